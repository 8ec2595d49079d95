#include "nehari/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "nehari/analytic.hpp"
#include "nehari/errors.hpp"

namespace nehari {

namespace {

constexpr std::pair<Scenario, const char*> kScenarioNames[] = {
    {Scenario::ClosedFormSuite, "ClosedFormSuite"}, {Scenario::Classify, "Classify"},
    {Scenario::GroundSmallNu, "GroundSmallNu"},     {Scenario::GroundLargeNu, "GroundLargeNu"},
    {Scenario::MountainPass, "MountainPass"},       {Scenario::AlgebraicLemma, "AlgebraicLemma"},
    {Scenario::MassLedger, "MassLedger"},
};

std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

template <class T>
T opt(const Json& o, const char* key, T fallback) {
  if (!o.contains(key)) return fallback;
  try {
    return o.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("options.") + key + ": wrong type");
  }
}

GridPtr make_grid(const ExperimentConfig& c) {
  return build_grid(c.params.N, c.grid.r_min, c.grid.r_max, c.grid.n);
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

// --- scenarios -------------------------------------------------------------

ExperimentOutcome closed_form_suite(const ExperimentConfig& c) {
  const auto dims = opt<std::vector<int>>(c.options, "dims", {3, 4, 5});
  const auto fractions = opt<std::vector<double>>(c.options, "fractions", {0.1, 0.5, 0.9});
  const auto n = opt<std::size_t>(c.options, "n", 2048);
  const double tol = opt<double>(c.options, "tol", 0.01);
  const double grad_factor = opt<double>(c.options, "grad_factor", 1e-4);

  ExperimentOutcome out;
  out.pass = true;
  Json rows = Json::array();
  int failed = 0;
  for (int N : dims) {
    for (double f : fractions) {
      const double lambda = f * hardy_constant(N);
      const GridPtr g = bubble_window_grid(N, lambda, n);
      const RadialField z = sample_bubble(g, BubbleSpec{N, lambda, 1.0});
      const double level = std::pow(s_lambda(N, lambda), 0.5 * N);
      const double norm = inner_lambda(z, z, lambda);
      const double mass = lp_star_norm(z);
      const double j = j_single(z, lambda);
      Params p;
      p.N = N;
      p.lambda1 = p.lambda2 = lambda;
      RadialField zc = z;
      zc.clamp_ends();
      const double gn = dual_norm(gradient(StatePair(zc, RadialField(g)), p), p);
      const double e_norm = std::abs(norm / level - 1.0);
      const double e_mass = std::abs(mass / level - 1.0);
      const double e_j = std::abs(j * N / level - 1.0);
      const double g_lim = grad_factor * std::pow(s_lambda(N, lambda), 0.25 * N);
      const bool ok = e_norm <= tol && e_mass <= tol && e_j <= tol && gn <= g_lim;
      if (!ok) ++failed;
      rows.push_back(Json{{"N", N}, {"lambda", lambda}, {"norm_rel_err", e_norm}, {"mass_rel_err", e_mass},
                          {"energy_rel_err", e_j}, {"grad_norm", gn}, {"grad_limit", g_lim}, {"pass", ok}});
    }
  }
  out.pass = failed == 0;
  out.result = Json{{"n", n}, {"cases", rows}};
  out.verdict = std::to_string(rows.size() - failed) + "/" + std::to_string(rows.size()) +
                " closed-form cases within tolerance";
  return out;
}

ExperimentOutcome classify(const ExperimentConfig& c) {
  ClassifyOptions o;
  o.grid = make_grid(c);
  o.n_directions = opt<int>(c.options, "n_directions", o.n_directions);
  o.step = opt<double>(c.options, "step", o.step);
  o.seed = c.seed;
  ExperimentOutcome out;
  out.pass = true;
  Json res = Json::object();
  std::string line;
  for (SemiTrivial w : {SemiTrivial::First, SemiTrivial::Second}) {
    const std::string key = w == SemiTrivial::First ? "first" : "second";
    const ClassifyResult r = classify_semitrivial(w, c.params, o);
    res[key] = to_json(r);
    const std::string expect = opt<std::string>(c.options, ("expect_" + key).c_str(), "");
    const bool ok = expect.empty() ? r.verdict != Verdict::Inconclusive : to_string(r.verdict) == expect;
    out.pass = out.pass && ok;
    line += (line.empty() ? "" : ", ") + key + "=" + to_string(r.verdict) + (expect.empty() ? "" : " (expected " + expect + ")");
    out.fields.emplace_back(key, semitrivial_point(w, c.params, o.grid).state);
  }
  if (c.options.contains("threshold")) {
    const Json& t = c.options.at("threshold");
    const SemiTrivial w = opt<std::string>(t, "which", "first") == "second" ? SemiTrivial::Second : SemiTrivial::First;
    const double nu_star = classify_nu_threshold(w, c.params, o, opt<double>(t, "nu_lo", 0.01), opt<double>(t, "nu_hi", 100.0),
                                                 opt<int>(t, "iterations", 20));
    res["nu_threshold"] = Json{{"which", to_string(w)}, {"nu", nu_star}};
    line += ", threshold nu=" + fmt(nu_star);
  }
  out.result = res;
  out.verdict = line;
  return out;
}

ExperimentOutcome ground(const ExperimentConfig& c, bool large) {
  const GridPtr g = make_grid(c);
  const int n_random = opt<int>(c.options, "n_random", 3);
  const double level_tol = opt<double>(c.options, "level_tol", 0.01);
  const GroundStateReport rep = ground_state_experiment(c.params, c.descent, n_random, g, c.seed);
  const PsThresholds th = ps_thresholds(c.params);
  ExperimentOutcome out;
  out.result = Json{{"report", to_json(rep)}, {"thresholds", to_json(th)}};
  if (rep.winner < 0) {
    out.verdict = "no start converged";
    return out;
  }
  const StartOutcome& w = rep.runs[static_cast<std::size_t>(rep.winner)];
  out.history = w.result.history;
  out.fields.emplace_back("winner", w.result.state.state);
  out.result["placement"] = to_json(place_level(w.result.energy, th));
  const double low = std::min(rep.level_first, rep.level_second);
  if (!large) {
    const std::string expected = rep.level_second < rep.level_first ? "second" : "first";
    const double other = expected == "second" ? w.share.first : w.share.second;
    const double target = expected == "second" ? rep.level_second : rep.level_first;
    const double err = std::abs(w.result.energy / target - 1.0);
    out.pass = rep.winner_kind == expected && err <= level_tol && other <= 1e-4;
    out.verdict = "winner " + std::string(expected == "second" ? "(0, z2)" : "(z1, 0)") + " expected; got " +
                  rep.winner_kind + " at energy " + fmt(w.result.energy) + " (level " + fmt(target) + ")";
  } else {
    const bool both = std::min(w.share.first, w.share.second) >= 1e-2;
    out.pass = rep.winner_kind == "coupled" && both && w.result.energy <= (1.0 - level_tol) * low;
    out.verdict = "winner " + rep.winner_kind + " at energy " + fmt(w.result.energy) + ", smaller semi-trivial level " + fmt(low);
  }
  return out;
}

ExperimentOutcome mountain(const ExperimentConfig& c) {
  const GridPtr g = make_grid(c);
  auto nus = opt<std::vector<double>>(c.options, "nus", {1, 0.5, 0.2, 0.1, 0.05, 0.02, 0.01, 0.005, 0.002, 0.001});
  const MountainPassSweep sw = mountain_pass_sweep(c.params, c.mountain_pass, g, nus);
  ExperimentOutcome out;
  out.result = Json{{"sweep", to_json(sw)}, {"epsilon", mountain_pass_epsilon(c.params)}};
  if (!sw.accepted) {
    out.verdict = "no nu in the sweep gave geometry and sandwich";
    return out;
  }
  const MountainPassResult& r = *sw.accepted;
  const auto& ip = r.initial_path;
  bool below = true;
  for (std::size_t k = 0; k < ip.t.size(); ++k) below = below && ip.level[k] <= ip.bound[k] * (1.0 + 1e-9);
  const auto peak = static_cast<std::size_t>(std::max_element(ip.level.begin(), ip.level.end()) - ip.level.begin());
  const double dt = ip.t.size() > 1 ? ip.t[1] : 1.0;
  const bool centred = std::abs(ip.t[peak] - 0.5) <= dt * (1.0 + 1e-12);
  Params p = c.params;
  p.nu = sw.nu_accepted;
  out.result["placement"] = to_json(place_level(r.solve.energy, ps_thresholds(p)));
  out.result["initial_peak"] = Json{{"t", ip.t[peak]}, {"below_bound", below}};
  out.pass = r.sandwich && below && centred;
  out.history = r.solve.history;
  out.fields.emplace_back("saddle", r.solve.state.state);
  out.verdict = "nu=" + fmt(sw.nu_accepted) + " level " + fmt(r.solve.energy) + " in (" + fmt(r.lower) + ", " + fmt(r.upper) +
                ")" + (below ? "" : ", path above g(t)") + (centred ? "" : ", path peak off t=1/2");
  return out;
}

// Scan of the boundary function on a log grid, refined by linear interpolation.
double scan_infimum(double A, double B, double gamma, int N, double nu, std::size_t points) {
  const double p = (N - 2.0) / N;
  const double q = 0.5 * gamma * p;
  const auto f = [&](double s) { return s + B * nu * std::pow(s, q) - A * std::pow(s, p); };
  const double lo = std::log(1e-12 * std::pow(A, 0.5 * N));
  const double hi = std::log(1e3 * std::pow(A, 0.5 * N));
  double x0 = lo, f0 = f(std::exp(lo));
  if (f0 > 0.0) return 0.0;
  for (std::size_t i = 1; i < points; ++i) {
    const double x1 = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    const double f1 = f(std::exp(x1));
    if (f1 > 0.0) return std::exp(x0 + (x1 - x0) * (-f0) / (f1 - f0));
    x0 = x1;
    f0 = f1;
  }
  return std::exp(hi);
}

ExperimentOutcome algebraic(const ExperimentConfig& c) {
  const int samples = opt<int>(c.options, "samples", 200);
  const auto points = opt<std::size_t>(c.options, "scan_points", 1000000);
  const double tol = opt<double>(c.options, "tol", 1e-6);
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double worst = 0.0;
  int rooted = 0;
  for (int k = 0; k < samples; ++k) {
    const int N = 3 + static_cast<int>(U(rng) * 4.0);
    const double A = std::exp(std::log(0.5) + U(rng) * std::log(100.0));
    const double B = std::exp(std::log(0.1) + U(rng) * std::log(100.0));
    const double gamma = 2.0 + 1e-3 + U(rng) * (critical_exponent(N) - 2.0 - 1e-3);
    const double nu = std::exp(std::log(1e-4) + U(rng) * std::log(1e3));
    const SigmaInfimum s = sigma_infimum(A, B, gamma, N, nu);
    const double oracle = scan_infimum(A, B, gamma, N, nu, points);
    if (s.has_root) ++rooted;
    const double err = s.has_root ? std::abs(s.value / oracle - 1.0) : (oracle == 0.0 ? 0.0 : 1.0);
    worst = std::max(worst, err);
  }
  double worst_closed = 0.0;
  for (int N = 3; N <= 6; ++N)
    for (double nu : {0.0, 0.1, 0.5, 0.9}) {
      const double A = 2.5;
      const double exact = std::pow(1.0 - nu, 0.5 * N) * std::pow(A, 0.5 * N);
      worst_closed = std::max(worst_closed, std::abs(sigma_infimum(A, A, 2.0, N, nu).value / exact - 1.0));
    }
  ExperimentOutcome out;
  out.pass = worst <= tol && worst_closed <= 1e-10;
  out.result = Json{{"samples", samples}, {"with_root", rooted}, {"worst_rel_err", worst}, {"gamma2_worst_rel_err", worst_closed}};
  out.verdict = "scan agreement " + fmt(worst) + ", gamma=2 closed form " + fmt(worst_closed);
  return out;
}

ExperimentOutcome mass_ledger(const ExperimentConfig& c) {
  const GridPtr g = make_grid(c);
  std::vector<TrainSpec> specs;
  if (c.options.contains("bubbles")) {
    for (const Json& b : c.options.at("bubbles")) {
      TrainSpec t;
      t.lambda = opt<double>(b, "lambda", 0.0);
      t.mu = opt<double>(b, "mu", 1.0);
      t.sign = opt<double>(b, "sign", 1.0);
      t.component = opt<int>(b, "component", 0);
      specs.push_back(t);
    }
  } else {
    specs.push_back(TrainSpec{c.params.lambda1, 1.0, 1.0, 0});
  }
  const double eps = opt<double>(c.options, "eps", 1e-3);
  const double R = opt<double>(c.options, "R", 1e3);
  const StatePair s = bubble_train(g, specs);
  const MassLedger L = mass_accounting(s, eps, R);
  const EnergyReport e = j_nu(s, c.params);
  double expected = 0.0;
  for (const auto& t : specs) expected += semi_trivial_energy(c.params.N, t.lambda);
  const auto additivity = [](const ComponentLedger& l, double total) {
    return total == 0.0 ? std::abs(l.rho_total()) : std::abs(l.rho_total() / total - 1.0);
  };
  const double add = std::max(additivity(L.first, lp_star_norm(s.u())), additivity(L.second, lp_star_norm(s.v())));
  bool nonneg = true;
  for (const ComponentLedger* l : {&L.first, &L.second})
    for (double x : {l->rho_origin, l->rho_bulk, l->rho_infinity, l->gamma_origin, l->gamma_bulk, l->gamma_infinity,
                     l->mu_origin, l->mu_bulk, l->mu_infinity})
      nonneg = nonneg && x >= 0.0;
  const double qerr = std::abs(e.j_value / expected - 1.0);
  ExperimentOutcome out;
  out.pass = add <= 1e-10 && nonneg && qerr <= opt<double>(c.options, "energy_tol", 0.05);
  out.result = Json{{"ledger", to_json(L)}, {"energy", to_json(e)}, {"sum_of_levels", expected},
                    {"energy_rel_err", qerr}, {"additivity_rel_err", add}, {"nonnegative", nonneg},
                    {"thresholds", to_json(ps_thresholds(c.params))}};
  out.fields.emplace_back("train", s);
  out.verdict = std::to_string(specs.size()) + "-bubble train energy " + fmt(e.j_value) + " vs " + fmt(expected) +
                " (rel err " + fmt(qerr) + ")";
  return out;
}

}  // namespace

std::string to_string(Scenario s) {
  for (const auto& [k, name] : kScenarioNames)
    if (k == s) return name;
  return "?";
}

Scenario scenario_from_string(const std::string& s) {
  for (const auto& [k, name] : kScenarioNames)
    if (s == name) return k;
  throw ConfigError("unknown scenario '" + s + "'");
}

ExperimentConfig parse_config(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
    throw ConfigError("config parse error at " + line_col(text, at) + ": " + e.what());
  }
  ExperimentConfig c;
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  for (const auto& [k, v] : doc.items()) {
    if (k == "scenario") {
      if (!v.is_string()) throw ConfigError("scenario: expected a string");
      c.scenario = scenario_from_string(v.get<std::string>());
    } else if (k == "params") {
      c.params = params_from_json(v);
    } else if (k == "grid") {
      for (const auto& [gk, gv] : v.items()) {
        if (gk == "r_min" && gv.is_number()) c.grid.r_min = gv.get<double>();
        else if (gk == "r_max" && gv.is_number()) c.grid.r_max = gv.get<double>();
        else if (gk == "n" && gv.is_number_unsigned()) c.grid.n = gv.get<std::size_t>();
        else throw ConfigError("grid." + gk + ": unknown key or wrong type");
      }
    } else if (k == "descent") {
      c.descent = descent_from_json(v);
    } else if (k == "mountain_pass") {
      c.mountain_pass = mountain_pass_from_json(v);
    } else if (k == "seed") {
      if (!v.is_number_unsigned()) throw ConfigError("seed: expected a nonnegative integer");
      c.seed = v.get<std::uint64_t>();
    } else if (k == "output_dir") {
      if (!v.is_string()) throw ConfigError("output_dir: expected a string");
      c.output_dir = v.get<std::string>();
    } else if (k == "options") {
      if (!v.is_object()) throw ConfigError("options: expected an object");
      c.options = v;
    } else if (k != "schema_version") {
      throw ConfigError("config: unknown key '" + k + "'");
    }
  }
  if (!doc.contains("scenario")) throw ConfigError("config: missing 'scenario'");
  if (!doc.contains("params") && c.scenario != Scenario::ClosedFormSuite && c.scenario != Scenario::AlgebraicLemma)
    throw ConfigError("config: scenario " + to_string(c.scenario) + " needs 'params'");
  return c;
}

Json config_to_json(const ExperimentConfig& c) {
  return Json{{"scenario", to_string(c.scenario)},
              {"params", to_json(c.params)},
              {"grid", Json{{"r_min", c.grid.r_min}, {"r_max", c.grid.r_max}, {"n", c.grid.n}}},
              {"descent", to_json(c.descent)},
              {"mountain_pass", to_json(c.mountain_pass)},
              {"seed", c.seed},
              {"output_dir", c.output_dir.string()},
              {"options", c.options}};
}

void apply_override(Json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "': expected key=value");
  const std::string path = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  Json value = Json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;
  Json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot - start);
    if (key.empty()) throw ConfigError("override '" + assignment + "': empty path segment");
    if (!node->is_object()) throw ConfigError("override '" + assignment + "': '" + key + "' is not inside an object");
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    if (node->is_null()) *node = Json::object();
    start = dot + 1;
  }
}

ExperimentConfig load_config(const std::filesystem::path& file, const std::vector<std::string>& overrides) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ConfigError("cannot open config " + file.string());
  std::ostringstream os;
  os << in.rdbuf();
  std::string text = os.str();
  if (!overrides.empty()) {
    Json doc;
    try {
      doc = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError("config parse error at " + line_col(text, e.byte > 0 ? e.byte - 1 : 0) + ": " + e.what());
    }
    for (const auto& o : overrides) apply_override(doc, o);
    text = doc.dump();
  }
  return parse_config(text);
}

ExperimentOutcome run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.scenario) {
    case Scenario::ClosedFormSuite: return closed_form_suite(cfg);
    case Scenario::Classify: return classify(cfg);
    case Scenario::GroundSmallNu: return ground(cfg, false);
    case Scenario::GroundLargeNu: return ground(cfg, true);
    case Scenario::MountainPass: return mountain(cfg);
    case Scenario::AlgebraicLemma: return algebraic(cfg);
    case Scenario::MassLedger: return mass_ledger(cfg);
  }
  throw ConfigError("unhandled scenario");
}

void write_outputs(const std::filesystem::path& dir, const ExperimentConfig& cfg, const ExperimentOutcome& out) {
  std::filesystem::create_directories(dir / "fields");
  Json doc{{"schema_version", kSchemaVersion},
           {"scenario", to_string(cfg.scenario)},
           {"verdict", out.pass ? "PASS" : "FAIL"},
           {"summary", out.verdict},
           {"config", config_to_json(cfg)},
           {"result", out.result}};
  {
    std::ofstream f(dir / "result.json", std::ios::binary);
    if (!f) throw ConfigError("cannot write " + (dir / "result.json").string());
    f << doc.dump(2) << "\n";
  }
  write_history_csv(dir / "history.csv", out.history);
  for (const auto& [name, state] : out.fields) write_field_csv(dir / "fields" / (name + ".csv"), state);
}

}  // namespace nehari
