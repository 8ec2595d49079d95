#include "nehari/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "nehari/analytic.hpp"
#include "nehari/errors.hpp"
#include "nehari/parallel.hpp"

namespace nehari {

void DescentConfig::validate() const {
  if (max_iters < 0 || !(step0 > 0.0) || !(armijo_c > 0.0 && armijo_c < 1.0) || !(grad_tol > 0.0) ||
      max_backtracks < 1)
    throw DomainError("descent config: need max_iters >= 0, step0 > 0, armijo_c in (0,1), grad_tol > 0");
}

void MountainPassConfig::validate() const {
  if (path_points < 8 || max_sweeps < 1 || descent_per_sweep < 1 || !(level_tol > 0.0) ||
      !(grad_tol > 0.0) || !(climb_step > 0.0))
    throw DomainError("mountain-pass config: need path_points >= 8 and positive settings");
}

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::GroundCandidate: return "GroundCandidate";
    case Outcome::BoundCandidate: return "BoundCandidate";
    case Outcome::SemiTrivialLimit: return "SemiTrivialLimit";
    default: return "Diverged";
  }
}

std::string to_string(Separability s) {
  switch (s) {
    case Separability::AlternativeI: return "AlternativeI";
    case Separability::AlternativeII: return "AlternativeII";
    default: return "None";
  }
}

ComponentShare component_share(const StatePair& s, const Params& p) {
  const double a = std::max(0.0, inner_lambda(s.u(), s.u(), p.lambda1));
  const double b = std::max(0.0, inner_lambda(s.v(), s.v(), p.lambda2));
  const double tot = std::sqrt(a + b);
  if (tot == 0.0) return {};
  return {std::sqrt(a) / tot, std::sqrt(b) / tot};
}

namespace {

constexpr double kSemiTrivialShare = 1e-4;
// Roundoff allowance in the sufficient-decrease test, relative to |E|.
constexpr double kEnergySlack = 1e-13;

struct StepOutcome {
  bool accepted = false;
  double step = 0.0;
};

// One Armijo-backtracked projected step from np along -dir; the expected
// first-order decrease is slope * step.
StepOutcome backtrack(NehariPoint& np, double& energy, const StatePair& dir, double slope,
                      double step0, const Params& p, double armijo_c, int max_backtracks) {
  double tau = step0;
  for (int b = 0; b < max_backtracks; ++b, tau *= 0.5) {
    StatePair trial = np.state;
    trial.axpy(-tau, dir);
    if (np.positive_part) trial = trial.positive_part();
    try {
      NehariPoint cand = project(trial, p, np.positive_part);
      const double e = restricted_energy(cand, p);
      if (e <= energy - armijo_c * tau * slope + kEnergySlack * std::abs(energy)) {
        np = std::move(cand);
        energy = e;
        return {true, tau};
      }
    } catch (const Error&) {
      // projection failed for this trial (e.g. clipped to zero): shrink
    }
  }
  return {false, 0.0};
}

Outcome converged_outcome(const StatePair& s, const Params& p) {
  const ComponentShare sh = component_share(s, p);
  return std::min(sh.first, sh.second) <= kSemiTrivialShare ? Outcome::SemiTrivialLimit
                                                            : Outcome::GroundCandidate;
}

}  // namespace

SolveResult minimize_on_nehari(const StatePair& init, const Params& p, const DescentConfig& cfg) {
  cfg.validate();
  SolveResult res;
  const bool pos = cfg.positive_part;
  NehariPoint np;
  try {
    np = project(pos ? init.positive_part() : init, p, pos);
  } catch (const Error& e) {
    res.message = std::string("initial projection failed: ") + e.what();
    return res;
  }
  double energy = restricted_energy(np, p);
  double step = cfg.step0;
  for (int it = 0;; ++it) {
    const StatePair g = gradient(np.state, p, {pos, false});
    const double gn = dual_norm(g, p);
    res.history.push_back({it, energy, gn});
    res.iterations = it;
    res.grad_norm = gn;
    if (gn <= cfg.grad_tol) {
      res.converged = true;
      res.classification = converged_outcome(np.state, p);
      break;
    }
    if (it >= cfg.max_iters) {
      res.message = "max_iters reached";
      break;
    }
    const StepOutcome st = backtrack(np, energy, g, gn * gn, std::min(cfg.step0, 2.0 * step), p,
                                     cfg.armijo_c, cfg.max_backtracks);
    if (!st.accepted) {
      std::ostringstream os;
      os << "no sufficient decrease after " << cfg.max_backtracks << " backtracks";
      res.message = os.str();
      break;
    }
    step = st.step;
  }
  res.state = std::move(np);
  res.energy = energy;
  return res;
}

Separability separability_check(const Params& p) {
  const double lam = p.hardy();
  const double thr = std::pow(2.0, -2.0 / (p.N - 1));
  if (p.alpha >= 2.0 && p.lambda2 > p.lambda1 && (lam - p.lambda2) / (lam - p.lambda1) > thr)
    return Separability::AlternativeI;
  if (p.beta >= 2.0 && p.lambda1 > p.lambda2 && (lam - p.lambda1) / (lam - p.lambda2) > thr)
    return Separability::AlternativeII;
  return Separability::None;
}

double path_bound(double t, double sigma1, double sigma2, int dim) {
  const double half_star = 0.5 * critical_exponent(dim);
  const double a = (1.0 - t) * sigma1 + t * sigma2;
  const double b = std::pow(1.0 - t, half_star) * sigma1 + std::pow(t, half_star) * sigma2;
  return a / dim * std::pow(a / b, 0.5 * (dim - 2));
}

double mountain_pass_epsilon(const Params& p) {
  const double s1 = s_lambda(p.N, p.lambda1);
  const double s2 = s_lambda(p.N, p.lambda2);
  const double e = 0.5 * p.N;
  const double hi = std::pow(std::max(s1, s2), e);
  const double lo = std::pow(std::min(s1, s2), e);
  const double e1 = 1.0 - lo / std::pow(0.5 * (s1 + s2), e);
  const double e2 = 2.0 * lo / hi - 1.0;
  const double m = std::min(e1, e2);
  return m > 0.0 ? 0.5 * m : 0.0;
}

// ---------------------------------------------------------------------------
// Mountain pass

namespace {

double distance_D(const StatePair& a, const StatePair& b, const Params& p) {
  StatePair d = a;
  d.axpy(-1.0, b);
  return std::sqrt(std::max(0.0, norm_D_sq(d, p)));
}

// Moves the points strictly between lo and hi to equal D-arclength along the
// piecewise-linear chain, then puts them back on the manifold.
void reparametrize(std::vector<NehariPoint>& path, std::size_t lo, std::size_t hi, const Params& p) {
  if (hi <= lo + 1) return;
  std::vector<double> arc(hi - lo + 1, 0.0);
  for (std::size_t k = lo; k < hi; ++k) arc[k - lo + 1] = arc[k - lo] + distance_D(path[k + 1].state, path[k].state, p);
  const double total = arc.back();
  if (!(total > 0.0)) return;
  std::vector<StatePair> moved;
  moved.reserve(hi - lo - 1);
  std::size_t seg = 0;
  for (std::size_t k = lo + 1; k < hi; ++k) {
    const double target = total * static_cast<double>(k - lo) / static_cast<double>(hi - lo);
    while (seg + 1 < arc.size() - 1 && arc[seg + 1] < target) ++seg;
    const double len = arc[seg + 1] - arc[seg];
    const double w = len > 0.0 ? (target - arc[seg]) / len : 0.0;
    StatePair s = path[lo + seg].state.scaled(1.0 - w);
    s.axpy(w, path[lo + seg + 1].state);
    moved.push_back(std::move(s));
  }
  for (std::size_t k = lo + 1; k < hi; ++k) path[k] = project(moved[k - lo - 1], p, true);
}

std::size_t argmax_interior(const std::vector<double>& levels) {
  std::size_t best = 1;
  for (std::size_t k = 2; k + 1 < levels.size(); ++k)
    if (levels[k] > levels[best]) best = k;
  return best;
}

}  // namespace

MountainPassResult mountain_pass(const Params& p, const MountainPassConfig& cfg, const GridPtr& grid) {
  cfg.validate();
  p.validate();
  if (separability_check(p) == Separability::None)
    throw DomainError("mountain_pass: parameters satisfy neither separability alternative");

  MountainPassResult out;
  out.lower = std::max(semi_trivial_energy(p.N, p.lambda1), semi_trivial_energy(p.N, p.lambda2));
  out.upper = (std::pow(s_lambda(p.N, p.lambda1), 0.5 * p.N) + std::pow(s_lambda(p.N, p.lambda2), 0.5 * p.N)) / p.N;

  NehariPoint end0 = semitrivial_point(SemiTrivial::First, p, grid);
  NehariPoint end1 = semitrivial_point(SemiTrivial::Second, p, grid);
  end0.positive_part = end1.positive_part = true;
  out.level_first = restricted_energy(end0, p);
  out.level_second = restricted_energy(end1, p);
  const RadialField& z1 = end0.state.u();
  const RadialField& z2 = end1.state.v();
  const double sigma1 = lp_star_norm(z1);
  const double sigma2 = lp_star_norm(z2);

  const std::size_t m = static_cast<std::size_t>(cfg.path_points);
  std::vector<NehariPoint> path(m);
  std::vector<double> levels(m);
  path.front() = end0;
  path.back() = end1;
  for (std::size_t k = 0; k < m; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(m - 1);
    if (k > 0 && k + 1 < m) path[k] = project(StatePair(std::sqrt(1.0 - t) * z1, std::sqrt(t) * z2), p, true);
    levels[k] = restricted_energy(path[k], p);
    out.initial_path.t.push_back(t);
    out.initial_path.level.push_back(levels[k]);
    out.initial_path.bound.push_back(k == 0 ? sigma1 / p.N
                                     : k + 1 == m ? sigma2 / p.N
                                                  : path_bound(t, sigma1, sigma2, p.N));
  }
  const double peak0 = levels[argmax_interior(levels)];
  if (!(peak0 > std::max(out.level_first, out.level_second))) {
    std::ostringstream os;
    os << "mountain_pass: initial path peak " << peak0 << " does not exceed the semi-trivial level "
       << std::max(out.level_first, out.level_second);
    throw GeometryViolation(os.str());
  }

  SolveResult& res = out.solve;
  double prev_peak = peak0;
  for (int sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
    const std::size_t ci = argmax_interior(levels);

    // Relax the other interior points downhill.
    parallel_for(m - 2, [&](std::size_t j) {
      const std::size_t k = j + 1;
      if (k == ci) return;
      double e = levels[k];
      for (int s = 0; s < cfg.descent_per_sweep; ++s) {
        const StatePair g = gradient(path[k].state, p, {true, false});
        const double gn = dual_norm(g, p);
        if (!backtrack(path[k], e, g, gn * gn, 1.0, p, 1e-4, 30).accepted) break;
      }
      levels[k] = e;
    });

    // Climbing image: ascend along the path tangent, descend across it.
    {
      StatePair tan = path[ci + 1].state;
      tan.axpy(-1.0, path[ci - 1].state);
      const double tn = std::sqrt(norm_D_sq(tan, p));
      StatePair g = gradient(path[ci].state, p, {true, false});
      if (tn > 0.0) {
        const double proj = inner_D(g, tan, p) / (tn * tn);
        g.axpy(-2.0 * proj, tan);
      }
      StatePair trial = path[ci].state;
      trial.axpy(-cfg.climb_step, g);
      path[ci] = project(trial.positive_part(), p, true);
    }

    reparametrize(path, 0, ci, p);
    reparametrize(path, ci, m - 1, p);
    for (std::size_t k = 1; k + 1 < m; ++k) levels[k] = restricted_energy(path[k], p);

    const std::size_t top = argmax_interior(levels);
    const double peak = levels[top];
    const double gn = dual_norm(gradient(path[top].state, p, {true, false}), p);
    res.history.push_back({sweep, peak, gn});
    res.iterations = sweep;
    res.grad_norm = gn;
    res.energy = peak;
    res.state = path[top];
    if (std::abs(peak - prev_peak) <= cfg.level_tol * std::abs(peak) && gn <= cfg.grad_tol) {
      res.converged = true;
      break;
    }
    prev_peak = peak;
  }
  out.final_levels = levels;
  if (res.converged) {
    const ComponentShare sh = component_share(res.state.state, p);
    res.classification = std::min(sh.first, sh.second) <= kSemiTrivialShare ? Outcome::SemiTrivialLimit
                                                                            : Outcome::BoundCandidate;
  } else {
    res.message = "max_sweeps reached";
  }
  out.sandwich = res.converged && res.energy > out.lower && res.energy < out.upper;
  return out;
}

MountainPassSweep mountain_pass_sweep(Params p, const MountainPassConfig& cfg, const GridPtr& grid,
                                      std::vector<double> nus) {
  std::sort(nus.begin(), nus.end(), std::greater<>());
  MountainPassSweep sweep;
  for (double nu : nus) {
    p.nu = nu;
    SweepEntry e;
    e.nu = nu;
    try {
      MountainPassResult r = mountain_pass(p, cfg, grid);
      e.geometry = true;
      e.sandwich = r.sandwich;
      e.level = r.solve.energy;
      e.note = r.solve.converged ? to_string(r.solve.classification) : r.solve.message;
      sweep.entries.push_back(e);
      if (r.sandwich) {
        sweep.nu_accepted = nu;
        sweep.accepted = std::move(r);
        break;
      }
    } catch (const GeometryViolation& ex) {
      e.note = ex.what();
      sweep.entries.push_back(e);
    }
  }
  return sweep;
}

// ---------------------------------------------------------------------------
// Ground states

GroundStateReport ground_state_experiment(const Params& p, const DescentConfig& cfg, int n_random,
                                          const GridPtr& grid, std::uint64_t seed) {
  p.validate();
  cfg.validate();
  if (n_random < 0) throw DomainError("ground_state_experiment: n_random must be >= 0");
  GroundStateReport rep;
  rep.level_first = semi_trivial_energy(p.N, p.lambda1);
  rep.level_second = semi_trivial_energy(p.N, p.lambda2);

  const StatePair st1 = semitrivial_pair(SemiTrivial::First, p, grid);
  const StatePair st2 = semitrivial_pair(SemiTrivial::Second, p, grid);
  const RadialField& z1 = st1.u();
  const RadialField& z2 = st2.v();
  const RadialField b_in = log_bump(grid, -0.5, 2.0);
  const RadialField b_out = log_bump(grid, 0.5, 2.0);

  std::vector<std::pair<std::string, StatePair>> starts;
  const double eps = 0.1;
  starts.emplace_back("first+bump", StatePair(z1 + eps * b_in, eps * b_out));
  starts.emplace_back("first-bump", StatePair(z1 - eps * b_in, eps * b_out));
  starts.emplace_back("second+bump", StatePair(eps * b_out, z2 + eps * b_in));
  starts.emplace_back("second-bump", StatePair(eps * b_out, z2 - eps * b_in));
  starts.emplace_back("balanced", StatePair((1.0 / std::sqrt(2.0)) * z1, (1.0 / std::sqrt(2.0)) * z2));

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> centre(-1.5, 1.5);
  std::uniform_real_distribution<double> width(1.0, 3.0);
  std::uniform_real_distribution<double> amp(0.2, 1.0);
  const auto random_field = [&] {
    RadialField f(grid);
    for (int k = 0; k < 3; ++k) {
      const double c = centre(rng);
      const double w = width(rng);
      f.axpy(amp(rng), log_bump(grid, c, w));
    }
    return f;
  };
  for (int k = 0; k < n_random; ++k) {
    RadialField a = random_field();
    RadialField b = random_field();
    starts.emplace_back("random" + std::to_string(k), StatePair(std::move(a), std::move(b)));
  }

  rep.runs.resize(starts.size());
  parallel_for(starts.size(), [&](std::size_t i) {
    StartOutcome& o = rep.runs[i];
    o.label = starts[i].first;
    o.result = minimize_on_nehari(starts[i].second, p, cfg);
    o.share = component_share(o.result.state.state, p);
  });

  std::vector<std::size_t> order(rep.runs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return rep.runs[a].result.energy < rep.runs[b].result.energy;
  });
  rep.winner_kind = "none";
  for (std::size_t i : order) {
    if (!rep.runs[i].result.converged) continue;
    rep.winner = static_cast<int>(i);
    const ComponentShare& sh = rep.runs[i].share;
    rep.winner_kind = sh.second <= kSemiTrivialShare ? "first" : sh.first <= kSemiTrivialShare ? "second" : "coupled";
    rep.classification = rep.runs[i].result.classification;
    break;
  }
  return rep;
}

}  // namespace nehari
