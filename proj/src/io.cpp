#include "nehari/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "nehari/errors.hpp"

namespace nehari {

namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw ConfigError("write failed: " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void check_keys(const Json& j, const char* where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(std::string(where) + ": expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : j.items())
    if (!ok.count(k)) throw ConfigError(std::string(where) + ": unknown key '" + k + "'");
}

template <class T>
void read_opt(const Json& j, const char* key, T& dst, const char* where) {
  if (!j.contains(key)) return;
  try {
    dst = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string(where) + "." + key + ": wrong type");
  }
}

Json vec(const std::vector<double>& v) { return Json(v); }

}  // namespace

// ---------------------------------------------------------------------------
// CSV

std::string field_csv(const StatePair& s) {
  const auto r = s.grid()->nodes();
  std::string out = "r,u,v\n";
  for (std::size_t i = 0; i < r.size(); ++i)
    out += fmt17(r[i]) + "," + fmt17(s.u()[i]) + "," + fmt17(s.v()[i]) + "\n";
  return out;
}

void write_field_csv(const std::filesystem::path& path, const StatePair& s) { write_text(path, field_csv(s)); }

StatePair parse_field_csv(const std::string& text, const GridPtr& grid) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("r,u,v", 0) != 0) throw ConfigError("field csv: missing header r,u,v");
  const auto nodes = grid->nodes();
  std::vector<double> u, v;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double r = 0, a = 0, b = 0;
    char c1 = 0, c2 = 0;
    std::istringstream ls(line);
    if (!(ls >> r >> c1 >> a >> c2 >> b) || c1 != ',' || c2 != ',')
      throw ConfigError("field csv: bad row " + std::to_string(row + 2));
    if (row >= nodes.size()) throw GridMismatchError("field csv: more rows than grid nodes");
    if (std::abs(r - nodes[row]) > 1e-12 * nodes[row])
      throw GridMismatchError("field csv: radius mismatch at row " + std::to_string(row + 2));
    u.push_back(a);
    v.push_back(b);
    ++row;
  }
  if (row != nodes.size()) throw GridMismatchError("field csv: row count differs from grid size");
  return StatePair(RadialField(grid, std::move(u)), RadialField(grid, std::move(v)));
}

StatePair read_field_csv(const std::filesystem::path& path, const GridPtr& grid) {
  return parse_field_csv(read_text(path), grid);
}

void write_history_csv(const std::filesystem::path& path, const std::vector<HistoryEntry>& h) {
  std::string out = "iteration,energy,grad_norm\n";
  for (const auto& e : h) out += std::to_string(e.iteration) + "," + fmt17(e.energy) + "," + fmt17(e.grad_norm) + "\n";
  write_text(path, out);
}

// ---------------------------------------------------------------------------
// JSON out

Json to_json(const HProfile& h) {
  Json j;
  j["kind"] = h.kind();
  if (const auto* c = std::get_if<HProfile::Constant>(&h.shape())) {
    j["c"] = c->c;
  } else if (const auto* b = std::get_if<HProfile::BumpRadial>(&h.shape())) {
    j["c"] = b->c;
    j["kappa"] = b->kappa;
  } else if (const auto* t = std::get_if<HProfile::Custom>(&h.shape())) {
    j["r"] = t->r;
    j["h"] = t->h;
  }
  return j;
}

Json to_json(const Params& p) {
  return Json{{"N", p.N},       {"lambda1", p.lambda1}, {"lambda2", p.lambda2}, {"alpha", p.alpha},
              {"beta", p.beta}, {"nu", p.nu},           {"h", to_json(p.h)}};
}

Json to_json(const DescentConfig& c) {
  return Json{{"max_iters", c.max_iters},         {"step0", c.step0},
              {"armijo_c", c.armijo_c},           {"grad_tol", c.grad_tol},
              {"positive_part", c.positive_part}, {"max_backtracks", c.max_backtracks}};
}

Json to_json(const MountainPassConfig& c) {
  return Json{{"path_points", c.path_points}, {"max_sweeps", c.max_sweeps},
              {"descent_per_sweep", c.descent_per_sweep}, {"level_tol", c.level_tol},
              {"grad_tol", c.grad_tol}, {"climb_step", c.climb_step}};
}

Json to_json(const EnergyTerms& t) {
  return Json{{"grad_u", t.grad_u},   {"grad_v", t.grad_v},   {"hardy_u", t.hardy_u}, {"hardy_v", t.hardy_v},
              {"power_u", t.power_u}, {"power_v", t.power_v}, {"coupling", t.coupling}};
}

Json to_json(const EnergyReport& r) {
  return Json{{"j_value", r.j_value},
              {"norm_D_sq", r.norm_D_sq},
              {"terms", to_json(r.terms)},
              {"nu", r.nu},
              {"coupling_degree", r.coupling_degree},
              {"N", r.dim},
              {"nehari_residual", r.nehari_residual},
              {"grad_norm", r.grad_norm},
              {"positive_part", r.positive_part}};
}

Json to_json(const ClassifyResult& r) {
  Json probes = Json::array();
  for (const auto& d : r.probes)
    probes.push_back(Json{{"kind", d.kind}, {"amplitude", d.amplitude}, {"delta", d.delta}, {"ladder", d.ladder_deltas}});
  return Json{{"which", to_string(r.which)},
              {"verdict", to_string(r.verdict)},
              {"base_level", r.base_level},
              {"analytic_level", r.analytic_level},
              {"amplitudes", r.amplitudes},
              {"directions", probes}};
}

Json to_json(const ComponentLedger& l) {
  return Json{{"rho_origin", l.rho_origin},     {"rho_bulk", l.rho_bulk},     {"rho_infinity", l.rho_infinity},
              {"gamma_origin", l.gamma_origin}, {"gamma_bulk", l.gamma_bulk}, {"gamma_infinity", l.gamma_infinity},
              {"mu_origin", l.mu_origin},       {"mu_bulk", l.mu_bulk},       {"mu_infinity", l.mu_infinity}};
}

Json to_json(const MassLedger& l) {
  return Json{{"eps", l.eps}, {"R", l.R}, {"first", to_json(l.first)}, {"second", to_json(l.second)}};
}

namespace {
Json window_json(const PsWindow& w) {
  return Json{{"applicable", w.applicable}, {"lower", w.lower}, {"upper", w.upper}, {"rung", w.rung},
              {"excluded", vec(w.excluded)}};
}
}  // namespace

Json to_json(const PsThresholds& t) {
  return Json{{"ground", t.ground},
              {"window", window_json(t.window)},
              {"mirrored", window_json(t.mirrored)},
              {"s_sum", t.s_sum},
              {"s_critical", t.s_critical},
              {"sum_below_critical", t.sum_below_critical}};
}

Json to_json(const LevelPlacement& l) {
  return Json{{"level", l.level}, {"below_ground", l.below_ground}, {"in_window", l.in_window},
              {"admissible", l.admissible}};
}

Json to_json(const SolveResult& r) {
  return Json{{"classification", to_string(r.classification)},
              {"converged", r.converged},
              {"energy", r.energy},
              {"grad_norm", r.grad_norm},
              {"iterations", r.iterations},
              {"t_star", r.state.t_star},
              {"phi_residual", r.state.phi_residual},
              {"message", r.message},
              {"history_length", r.history.size()}};
}

Json to_json(const MountainPassResult& r) {
  return Json{{"solve", to_json(r.solve)},
              {"initial_path", Json{{"t", r.initial_path.t}, {"level", r.initial_path.level}, {"bound", r.initial_path.bound}}},
              {"final_levels", r.final_levels},
              {"level_first", r.level_first},
              {"level_second", r.level_second},
              {"lower", r.lower},
              {"upper", r.upper},
              {"sandwich", r.sandwich}};
}

Json to_json(const MountainPassSweep& s) {
  Json entries = Json::array();
  for (const auto& e : s.entries)
    entries.push_back(Json{{"nu", e.nu}, {"geometry", e.geometry}, {"sandwich", e.sandwich}, {"level", e.level}, {"note", e.note}});
  Json j{{"entries", entries}, {"nu_accepted", s.nu_accepted}};
  j["accepted"] = s.accepted ? to_json(*s.accepted) : Json(nullptr);
  return j;
}

Json to_json(const GroundStateReport& r) {
  Json runs = Json::array();
  for (const auto& o : r.runs)
    runs.push_back(Json{{"label", o.label},
                        {"share_first", o.share.first},
                        {"share_second", o.share.second},
                        {"result", to_json(o.result)}});
  return Json{{"winner", r.winner},
              {"winner_kind", r.winner_kind},
              {"classification", to_string(r.classification)},
              {"level_first", r.level_first},
              {"level_second", r.level_second},
              {"runs", runs}};
}

// ---------------------------------------------------------------------------
// JSON in

HProfile hprofile_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind")) throw ConfigError("params.h: expected an object with 'kind'");
  const std::string kind = j.at("kind").is_string() ? j.at("kind").get<std::string>() : "";
  if (kind == "constant") {
    check_keys(j, "params.h", {"kind", "c"});
    double c = 1.0;
    read_opt(j, "c", c, "params.h");
    return HProfile::constant(c);
  }
  if (kind == "bump") {
    check_keys(j, "params.h", {"kind", "c", "kappa"});
    double c = 1.0, kappa = 1.0;
    read_opt(j, "c", c, "params.h");
    read_opt(j, "kappa", kappa, "params.h");
    return HProfile::bump(c, kappa);
  }
  if (kind == "custom") {
    check_keys(j, "params.h", {"kind", "r", "h"});
    std::vector<double> r, h;
    read_opt(j, "r", r, "params.h");
    read_opt(j, "h", h, "params.h");
    return HProfile::custom(std::move(r), std::move(h));
  }
  throw ConfigError("params.h.kind: expected constant, bump or custom");
}

Params params_from_json(const Json& j) {
  check_keys(j, "params", {"N", "lambda1", "lambda2", "alpha", "beta", "nu", "h"});
  Params p;
  read_opt(j, "N", p.N, "params");
  read_opt(j, "lambda1", p.lambda1, "params");
  read_opt(j, "lambda2", p.lambda2, "params");
  read_opt(j, "alpha", p.alpha, "params");
  read_opt(j, "beta", p.beta, "params");
  read_opt(j, "nu", p.nu, "params");
  if (j.contains("h")) p.h = hprofile_from_json(j.at("h"));
  return p;
}

DescentConfig descent_from_json(const Json& j, DescentConfig c) {
  check_keys(j, "descent", {"max_iters", "step0", "armijo_c", "grad_tol", "positive_part", "max_backtracks"});
  read_opt(j, "max_iters", c.max_iters, "descent");
  read_opt(j, "step0", c.step0, "descent");
  read_opt(j, "armijo_c", c.armijo_c, "descent");
  read_opt(j, "grad_tol", c.grad_tol, "descent");
  read_opt(j, "positive_part", c.positive_part, "descent");
  read_opt(j, "max_backtracks", c.max_backtracks, "descent");
  return c;
}

MountainPassConfig mountain_pass_from_json(const Json& j, MountainPassConfig c) {
  check_keys(j, "mountain_pass",
             {"path_points", "max_sweeps", "descent_per_sweep", "level_tol", "grad_tol", "climb_step"});
  read_opt(j, "path_points", c.path_points, "mountain_pass");
  read_opt(j, "max_sweeps", c.max_sweeps, "mountain_pass");
  read_opt(j, "descent_per_sweep", c.descent_per_sweep, "mountain_pass");
  read_opt(j, "level_tol", c.level_tol, "mountain_pass");
  read_opt(j, "grad_tol", c.grad_tol, "mountain_pass");
  read_opt(j, "climb_step", c.climb_step, "mountain_pass");
  return c;
}

}  // namespace nehari
