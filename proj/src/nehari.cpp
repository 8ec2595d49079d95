#include "nehari/nehari.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "nehari/analytic.hpp"
#include "nehari/errors.hpp"

namespace nehari {

namespace {

EnergyTerms terms_of(const StatePair& s, const Params& p, bool positive_part) {
  if (auto t = s.cached_terms(p, positive_part)) return *t;
  return compute_terms(s.u(), s.v(), p, positive_part);
}

constexpr double kStaleTol = 1e-8;

}  // namespace

double scaling_root(double Q, double P, double C, const Params& p) {
  const double ps = p.two_star();
  const double gamma = p.alpha + p.beta;
  const double k = p.nu * gamma * C;
  if (!(Q > 0.0)) throw NoRootError("project: the pair has nonpositive D-norm");
  if (!(P > 0.0) && !(k > 0.0))
    throw NoRootError("project: power and coupling terms vanish, no scaling reaches the manifold");

  double t = 0.0;
  if (!(k > 0.0)) {
    t = std::pow(Q / P, 1.0 / (ps - 2.0));
  } else if (!(P > 0.0)) {
    t = std::pow(Q / k, 1.0 / (gamma - 2.0));
  } else if (std::abs(gamma - ps) <= 1e-14 * ps) {
    t = std::pow(Q / (P + k), 1.0 / (ps - 2.0));
  } else {
    // F(x) = e^{(2*-2)x} P/Q + e^{(gamma-2)x} k/Q - 1 is increasing in x = log t.
    const double a = P / Q;
    const double b = k / Q;
    const auto F = [&](double x) { return a * std::exp((ps - 2.0) * x) + b * std::exp((gamma - 2.0) * x) - 1.0; };
    const auto dF = [&](double x) {
      return (ps - 2.0) * a * std::exp((ps - 2.0) * x) + (gamma - 2.0) * b * std::exp((gamma - 2.0) * x);
    };
    double lo = std::log(1e-8);
    double hi = std::log(1e8);
    if (!(F(lo) < 0.0) || !(F(hi) > 0.0))
      throw ConvergenceError("project: scaling root not bracketed in [1e-8, 1e8]");
    while (hi - lo > 1e-6) {
      const double mid = 0.5 * (lo + hi);
      (F(mid) < 0.0 ? lo : hi) = mid;
    }
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 8; ++it) {
      const double dx = F(x) / dF(x);
      x = std::clamp(x - dx, lo, hi);
      if (std::abs(dx) <= 1e-15) break;
    }
    return std::exp(x);
  }
  if (!(t >= 1e-8 && t <= 1e8)) throw ConvergenceError("project: scaling root outside [1e-8, 1e8]");
  return t;
}

NehariPoint project(const StatePair& s, const Params& p, bool positive_part) {
  const EnergyTerms t0 = terms_of(s, p, positive_part);
  const double t = scaling_root(t0.norm_D_sq(p), t0.power_sum(), t0.coupling, p);
  NehariPoint np;
  np.state = s.scaled(t);
  np.t_star = t;
  np.positive_part = positive_part;
  const EnergyTerms& t1 = np.state.terms(p, positive_part);
  np.phi_residual = t1.norm_D_sq(p) - t1.power_sum() - p.nu * (p.alpha + p.beta) * t1.coupling;
  return np;
}

double restricted_energy(const NehariPoint& np, const Params& p) {
  const EnergyTerms t = terms_of(np.state, p, np.positive_part);
  const double q = t.norm_D_sq(p);
  const double phi = q - t.power_sum() - p.nu * (p.alpha + p.beta) * t.coupling;
  if (std::abs(phi) > kStaleTol * std::abs(q)) {
    std::ostringstream os;
    os << "restricted_energy: state is off the manifold (residual " << phi << ", norm " << q << ")";
    throw StalePointError(os.str());
  }
  return t.power_sum() / p.N + p.nu * 0.5 * (p.alpha + p.beta - 2.0) * t.coupling;
}

double second_variation_along_state(const NehariPoint& np, const Params& p) {
  const EnergyTerms t = terms_of(np.state, p, np.positive_part);
  const double gamma = p.alpha + p.beta;
  return (2.0 - gamma) * t.norm_D_sq(p) + (gamma - p.two_star()) * t.power_sum();
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::LocalMin: return "LocalMin";
    case Verdict::Saddle: return "Saddle";
    default: return "Inconclusive";
  }
}

std::string to_string(SemiTrivial w) { return w == SemiTrivial::First ? "first" : "second"; }

RadialField log_bump(const GridPtr& grid, double center, double width) {
  return RadialField::sample(grid, [=](double r) {
    const double x = (std::log(r) - center) / width;
    if (std::abs(x) >= 1.0) return 0.0;
    const double y = 1.0 - x * x;
    return y * y * y;
  });
}

// ---------------------------------------------------------------------------
// Classifier

StatePair semitrivial_pair(SemiTrivial which, const Params& p, const GridPtr& grid) {
  if (grid->dimension() != p.N) throw GridMismatchError("grid dimension differs from N");
  const double lam = which == SemiTrivial::First ? p.lambda1 : p.lambda2;
  RadialField z = sample_bubble(grid, {p.N, lam, 1.0});
  z.clamp_ends();
  RadialField zero(grid);
  return which == SemiTrivial::First ? StatePair(std::move(z), std::move(zero))
                                     : StatePair(std::move(zero), std::move(z));
}

// The sampled bubble is critical only up to truncation and scheme error, which
// would show up as first-order energy changes. Fixed-point steps u <- u - grad
// (the Sobolev gradient with unit step) followed by projection converge to the
// discrete semi-trivial critical point.
NehariPoint polish_semitrivial(NehariPoint np, const Params& p) {
  const double norm0 = std::sqrt(np.state.terms(p, false).norm_D_sq(p));
  for (int it = 0; it < 500; ++it) {
    const StatePair g = gradient(np.state, p);
    if (dual_norm(g, p) <= 1e-11 * norm0) break;
    StatePair next = np.state;
    next.axpy(-1.0, g);
    np = project(next, p, false);
  }
  return np;
}

NehariPoint semitrivial_point(SemiTrivial which, const Params& p, const GridPtr& grid) {
  return polish_semitrivial(project(semitrivial_pair(which, p, grid), p, false), p);
}

namespace {

GridPtr classifier_grid(const ClassifyOptions& opts, int dim) {
  if (opts.grid) {
    if (opts.grid->dimension() != dim) throw GridMismatchError("classifier grid dimension differs from N");
    return opts.grid;
  }
  return build_grid(dim, 1e-6, 1e6, 1024);
}

double lambda_norm(const RadialField& f, double lambda) { return std::sqrt(inner_lambda(f, f, lambda)); }

struct CouplingMode {
  double mu = 0.0;
  RadialField phi;
};
CouplingMode coupling_mode(SemiTrivial which, const Params& p, const GridPtr& grid);

}  // namespace

ClassifyResult classify_semitrivial(SemiTrivial which, const Params& p, const ClassifyOptions& opts) {
  p.validate();
  if (opts.n_directions < 1 || !(opts.step > 0.0) || !(opts.tol > 0.0))
    throw DomainError("classify: need n_directions >= 1, step > 0, tol > 0");
  const GridPtr grid = classifier_grid(opts, p.N);
  const bool first = which == SemiTrivial::First;
  const double lam_active = first ? p.lambda1 : p.lambda2;
  const double lam_vanish = first ? p.lambda2 : p.lambda1;
  const double vanishing_exponent = first ? p.beta : p.alpha;

  ClassifyResult res;
  res.which = which;
  res.analytic_level = semi_trivial_energy(p.N, lam_active);
  const NehariPoint base = semitrivial_point(which, p, grid);
  res.base_level = restricted_energy(base, p);
  const RadialField& z = first ? base.state.u() : base.state.v();
  const double z_norm = lambda_norm(z, lam_active);

  for (double a = opts.step; a >= 0.99e-4 * opts.step; a *= 0.5) res.amplitudes.push_back(a);

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> centre(-2.0, 2.0);
  std::uniform_real_distribution<double> width(0.5, 3.0);

  bool any_down = false;
  bool any_up = false;
  for (int d = 0; d < opts.n_directions; ++d) {
    // Cycle through the three direction families; the vanishing component
    // carries the destabilising directions, so it gets two slots out of three.
    const int family = d % 3;
    RadialField vanish(grid);
    RadialField active(grid);
    std::string kind;
    if (d == 0 && vanishing_exponent == 2.0) {
      // Only the lowest coupling mode can destabilise at the borderline exponent.
      vanish = coupling_mode(which, p, grid).phi;
      vanish *= z_norm / lambda_norm(vanish, lam_vanish);
      centre(rng);
      width(rng);
    } else if (family == 0 || family == 1) {
      vanish = log_bump(grid, centre(rng), width(rng));
      vanish *= z_norm / lambda_norm(vanish, lam_vanish);
    }
    if (family == 1 || family == 2) {
      active = log_bump(grid, centre(rng), width(rng));
      active.axpy(-inner_lambda(active, z, lam_active) / (z_norm * z_norm), z);
      active *= z_norm / lambda_norm(active, lam_active);
    }
    kind = family == 0 ? "vanishing" : family == 1 ? "mixed" : "active";
    const StatePair dir = first ? StatePair(active, vanish) : StatePair(vanish, active);

    DirectionProbe probe;
    probe.kind = kind;
    for (double a : res.amplitudes) {
      StatePair trial = base.state;
      trial.axpy(a, dir);
      const NehariPoint np = project(trial, p, false);
      const double delta = (restricted_energy(np, p) - res.base_level) / res.base_level;
      probe.ladder_deltas.push_back(delta);
      if (std::abs(delta) > opts.tol) {
        probe.amplitude = a;
        probe.delta = delta;
      }
    }
    if (probe.amplitude > 0.0) (probe.delta < 0.0 ? any_down : any_up) = true;
    res.probes.push_back(std::move(probe));
  }
  if (any_down)
    res.verdict = Verdict::Saddle;
  else if (any_up)
    res.verdict = Verdict::LocalMin;
  else
    res.verdict = Verdict::Inconclusive;
  return res;
}

double classify_nu_threshold(SemiTrivial which, Params p, const ClassifyOptions& opts, double nu_lo,
                             double nu_hi, int iterations) {
  if (!(nu_lo > 0.0) || !(nu_hi > nu_lo)) throw DomainError("classify_nu_threshold: need 0 < nu_lo < nu_hi");
  const auto verdict_at = [&](double nu) {
    p.nu = nu;
    return classify_semitrivial(which, p, opts).verdict;
  };
  if (verdict_at(nu_lo) != Verdict::LocalMin || verdict_at(nu_hi) != Verdict::Saddle)
    throw ConvergenceError("classify_nu_threshold: verdicts at the ends do not bracket a switch");
  double lo = std::log(nu_lo);
  double hi = std::log(nu_hi);
  for (int it = 0; it < iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    (verdict_at(std::exp(mid)) == Verdict::Saddle ? hi : lo) = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

namespace {

// Inverse iteration for the weighted eigenproblem in the vanishing component.
CouplingMode coupling_mode(SemiTrivial which, const Params& p, const GridPtr& grid) {
  const bool first = which == SemiTrivial::First;
  const double lam_active = first ? p.lambda1 : p.lambda2;
  const double lam_vanish = first ? p.lambda2 : p.lambda1;
  const double expo = first ? p.alpha : p.beta;
  const RadialField z = sample_bubble(grid, {p.N, lam_active, 1.0});
  const auto r = grid->nodes();
  const auto w = grid->weights();
  std::vector<double> m(grid->size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = w[i] * p.h(r[i]) * std::pow(z[i], expo);

  RadialField phi = log_bump(grid, 0.0, 3.0);
  double mu = 0.0;
  std::vector<double> load(m.size());
  for (int it = 0; it < 2000; ++it) {
    for (std::size_t i = 0; i < m.size(); ++i) load[i] = m[i] * phi[i];
    RadialField next = riesz_solve_load(grid, load, lam_vanish);
    double num = inner_lambda(next, next, lam_vanish);
    double den = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) den += m[i] * next[i] * next[i];
    const double mu_new = num / den;
    next *= 1.0 / std::sqrt(num);
    phi = std::move(next);
    if (it > 5 && std::abs(mu_new - mu) <= 1e-13 * mu_new) return {mu_new, std::move(phi)};
    mu = mu_new;
  }
  return {mu, std::move(phi)};
}

}  // namespace

double coupling_eigenvalue(SemiTrivial which, const Params& p, const GridPtr& grid) {
  return coupling_mode(which, p, grid).mu;
}

}  // namespace nehari
