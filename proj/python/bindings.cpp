#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nehari/analytic.hpp"
#include "nehari/diagnostics.hpp"
#include "nehari/errors.hpp"
#include "nehari/experiment.hpp"
#include "nehari/nehari.hpp"
#include "nehari/solvers.hpp"

namespace py = pybind11;
using namespace nehari;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Array to_array(const RadialField& f) {
  Array out(static_cast<py::ssize_t>(f.size()));
  auto buf = out.mutable_unchecked<1>();
  for (std::size_t i = 0; i < f.size(); ++i) buf(static_cast<py::ssize_t>(i)) = f[i];
  return out;
}

RadialField to_field(const GridPtr& g, const Array& a) {
  if (a.ndim() != 1) throw GridMismatchError("field must be one-dimensional");
  const auto buf = a.unchecked<1>();
  std::vector<double> v(static_cast<std::size_t>(buf.shape(0)));
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = buf(static_cast<py::ssize_t>(i));
  return RadialField(g, std::move(v));
}

StatePair to_pair(const GridPtr& g, const Array& u, const Array& v) { return StatePair(to_field(g, u), to_field(g, v)); }

Params params_from(const std::string& text) { return params_from_json(Json::parse(text)); }

py::tuple pair_out(const StatePair& s) { return py::make_tuple(to_array(s.u()), to_array(s.v())); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Radial solver for coupled critical Hardy systems";

  auto base = py::register_exception<Error>(m, "NehariError", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<GridMismatchError>(m, "GridMismatchError", base.ptr());
  py::register_exception<SolverFailure>(m, "SolverFailure", base.ptr());
  py::register_exception<NoRootError>(m, "NoRootError", base.ptr());
  py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());
  py::register_exception<StalePointError>(m, "StalePointError", base.ptr());
  py::register_exception<GeometryViolation>(m, "GeometryViolation", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

  py::class_<RadialGrid, std::shared_ptr<RadialGrid>>(m, "Grid")
      .def_property_readonly("dimension", &RadialGrid::dimension)
      .def_property_readonly("size", &RadialGrid::size)
      .def_property_readonly("r_min", &RadialGrid::r_min)
      .def_property_readonly("r_max", &RadialGrid::r_max)
      .def_property_readonly("nodes", [](const RadialGrid& g) {
        const auto r = g.nodes();
        return Array(static_cast<py::ssize_t>(r.size()), r.data());
      });

  const auto grid_arg = [](const std::shared_ptr<RadialGrid>& g) -> GridPtr { return g; };

  m.def("build_grid", [](int dim, double r_min, double r_max, std::size_t n) {
    return std::const_pointer_cast<RadialGrid>(build_grid(dim, r_min, r_max, n));
  }, py::arg("dim"), py::arg("r_min"), py::arg("r_max"), py::arg("n"));
  m.def("bubble_window_grid", [](int dim, double lambda, std::size_t n, double tail) {
    return std::const_pointer_cast<RadialGrid>(bubble_window_grid(dim, lambda, n, tail));
  }, py::arg("dim"), py::arg("lambda_"), py::arg("n"), py::arg("tail") = 1e-12);

  m.def("a_lambda", &a_lambda, py::arg("dim"), py::arg("lambda_"));
  m.def("sobolev_constant", &sobolev_constant, py::arg("dim"));
  m.def("s_lambda", &s_lambda, py::arg("dim"), py::arg("lambda_"));
  m.def("semi_trivial_energy", &semi_trivial_energy, py::arg("dim"), py::arg("lambda_"));
  m.def("bubble", [](int dim, double lambda, double mu, double r) { return terracini_bubble({dim, lambda, mu}, r); },
        py::arg("dim"), py::arg("lambda_"), py::arg("mu"), py::arg("r"));
  m.def("sample_bubble", [grid_arg](const std::shared_ptr<RadialGrid>& g, double lambda, double mu) {
    return to_array(sample_bubble(grid_arg(g), {g->dimension(), lambda, mu}));
  }, py::arg("grid"), py::arg("lambda_"), py::arg("mu") = 1.0);
  m.def("sigma_infimum", [](double A, double B, double gamma, int dim, double nu) {
    const SigmaInfimum s = sigma_infimum(A, B, gamma, dim, nu);
    return py::make_tuple(s.value, s.has_root);
  }, py::arg("A"), py::arg("B"), py::arg("gamma"), py::arg("dim"), py::arg("nu"));

  m.def("_energy", [grid_arg](const std::shared_ptr<RadialGrid>& g, const Array& u, const Array& v,
                              const std::string& params, bool positive_part) {
    return to_json(energy_report(to_pair(grid_arg(g), u, v), params_from(params), positive_part)).dump();
  });
  m.def("_project", [grid_arg](const std::shared_ptr<RadialGrid>& g, const Array& u, const Array& v,
                               const std::string& params, bool positive_part) {
    const NehariPoint np = project(to_pair(grid_arg(g), u, v), params_from(params), positive_part);
    return py::make_tuple(to_array(np.state.u()), to_array(np.state.v()), np.t_star, np.phi_residual);
  });
  m.def("_classify", [](const std::string& which, const std::string& params, int n_directions, double step) {
    ClassifyOptions o;
    o.n_directions = n_directions;
    o.step = step;
    const SemiTrivial w = which == "first" ? SemiTrivial::First : which == "second" ? SemiTrivial::Second
                                                                                    : throw DomainError("which must be first or second");
    py::gil_scoped_release nogil;
    return to_json(classify_semitrivial(w, params_from(params), o)).dump();
  });
  m.def("_minimize", [grid_arg](const std::shared_ptr<RadialGrid>& g, const Array& u, const Array& v,
                                const std::string& params, const std::string& descent) {
    const StatePair init = to_pair(grid_arg(g), u, v);
    const Params p = params_from(params);
    const DescentConfig cfg = descent_from_json(Json::parse(descent));
    SolveResult r;
    {
      py::gil_scoped_release nogil;
      r = minimize_on_nehari(init, p, cfg);
    }
    return py::make_tuple(to_json(r).dump(), pair_out(r.state.state));
  });
  m.def("_mountain_pass", [grid_arg](const std::string& params, const std::string& config,
                                     const std::shared_ptr<RadialGrid>& g) {
    const Params p = params_from(params);
    const MountainPassConfig cfg = mountain_pass_from_json(Json::parse(config));
    MountainPassResult r;
    {
      py::gil_scoped_release nogil;
      r = mountain_pass(p, cfg, grid_arg(g));
    }
    return py::make_tuple(to_json(r).dump(), pair_out(r.solve.state.state));
  });
  m.def("_ps_thresholds", [](const std::string& params) { return to_json(ps_thresholds(params_from(params))).dump(); });
  m.def("_mass_accounting", [grid_arg](const std::shared_ptr<RadialGrid>& g, const Array& u, const Array& v,
                                       double eps, double R) {
    return to_json(mass_accounting(to_pair(grid_arg(g), u, v), eps, R)).dump();
  });
  m.def("_run_config", [](const std::string& text, const std::vector<std::string>& overrides) {
    Json doc;
    try {
      doc = Json::parse(text);
    } catch (const Json::parse_error&) {
      parse_config(text);  // rethrows with position
    }
    for (const auto& o : overrides) apply_override(doc, o);
    const ExperimentConfig cfg = parse_config(doc.dump());
    ExperimentOutcome out;
    {
      py::gil_scoped_release nogil;
      out = run_experiment(cfg);
    }
    Json j = {{"pass", out.pass}, {"summary", out.verdict}, {"result", out.result}};
    return j.dump();
  });
}
