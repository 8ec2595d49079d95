#include "nehari/diagnostics.hpp"

#include <cmath>
#include <sstream>

#include "nehari/analytic.hpp"
#include "nehari/errors.hpp"

namespace nehari {

namespace {

constexpr double kHalfDecade = 0.5 * 2.302585092994046;  // ln(10) / 2

double smoothstep(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return x * x * (3.0 - 2.0 * x);
}

// 0 below centre/sqrt10, 1 above centre*sqrt10.
double ramp_up(double r, double centre) {
  return smoothstep((std::log(r / centre) + kHalfDecade) / (2.0 * kHalfDecade));
}

ComponentLedger split(const RadialField& u, const Cutoffs& cut) {
  ComponentLedger L;
  const auto& g = *u.grid();
  const double p = critical_exponent(g.dimension());
  const auto r = g.nodes();
  const auto w = g.weights();
  const auto wh = g.hardy_weights();
  const auto x = u.values();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double a = cut.origin(r[i]);
    const double b = cut.infinity(r[i]);
    const double m = 1.0 - a - b;
    const double rho = w[i] * std::pow(std::abs(x[i]), p);
    const double gam = wh[i] * x[i] * x[i];
    L.rho_origin += a * rho;
    L.rho_infinity += b * rho;
    L.rho_bulk += m * rho;
    L.gamma_origin += a * gam;
    L.gamma_infinity += b * gam;
    L.gamma_bulk += m * gam;
  }
  const auto c = g.panel_stiffness();
  const auto mid = g.midpoints();
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double d = panel_difference(x, k);
    const double e = c[k] * d * d;
    const double a = cut.origin(mid[k]);
    const double b = cut.infinity(mid[k]);
    L.mu_origin += a * e;
    L.mu_infinity += b * e;
    L.mu_bulk += (1.0 - a - b) * e;
  }
  return L;
}

PsWindow make_window(int dim, double s_own, double s_sum, bool applicable) {
  PsWindow w;
  w.rung = s_own / dim;
  w.lower = w.rung;
  w.upper = s_sum / dim;
  w.applicable = applicable;
  if (w.rung > 0.0)
    for (int l = 1; l * w.rung <= w.upper * (1.0 + 1e-12); ++l) w.excluded.push_back(l * w.rung);
  return w;
}

bool window_admits(const PsWindow& w, double c) {
  if (!w.applicable || !(c > w.lower && c < w.upper)) return false;
  for (double e : w.excluded)
    if (std::abs(c - e) <= 1e-9 * e) return false;
  return true;
}

}  // namespace

double Cutoffs::origin(double r) const { return 1.0 - ramp_up(r, eps); }
double Cutoffs::infinity(double r) const { return ramp_up(r, R); }

MassLedger mass_accounting(const StatePair& s, double eps, double R) {
  const auto& g = s.grid();
  if (!g) throw DomainError("mass_accounting: state has no grid");
  if (!(eps > g->r_min() && R < g->r_max() && eps < R)) {
    std::ostringstream os;
    os << "mass_accounting: need r_min < eps < R < r_max, got eps=" << eps << " R=" << R << " on ["
       << g->r_min() << ", " << g->r_max() << "]";
    throw DomainError(os.str());
  }
  if (R < 10.0 * eps) throw DomainError("mass_accounting: cut-off ramps overlap (need R >= 10 eps)");
  const Cutoffs cut{eps, R};
  MassLedger out;
  out.eps = eps;
  out.R = R;
  out.first = split(s.u(), cut);
  out.second = split(s.v(), cut);
  return out;
}

bool PsThresholds::admissible(double c) const { return window_admits(window, c) || window_admits(mirrored, c); }

PsThresholds ps_thresholds(const Params& p) {
  p.validate();
  const double e = 0.5 * p.N;
  const double s1 = std::pow(s_lambda(p.N, p.lambda1), e);
  const double s2 = std::pow(s_lambda(p.N, p.lambda2), e);
  PsThresholds t;
  t.ground = std::min(s1, s2) / p.N;
  t.s_sum = s1 + s2;
  t.s_critical = std::pow(sobolev_constant(p.N), e);
  t.sum_below_critical = t.s_sum < t.s_critical;
  t.window = make_window(p.N, s2, t.s_sum, p.alpha >= 2.0 && p.lambda2 >= p.lambda1);
  t.mirrored = make_window(p.N, s1, t.s_sum, p.beta >= 2.0 && p.lambda1 >= p.lambda2);
  return t;
}

LevelPlacement place_level(double level, const PsThresholds& t) {
  LevelPlacement out;
  out.level = level;
  out.below_ground = level < t.ground;
  out.in_window = (t.window.applicable && level > t.window.lower && level < t.window.upper) ||
                  (t.mirrored.applicable && level > t.mirrored.lower && level < t.mirrored.upper);
  out.admissible = t.admissible(level);
  return out;
}

StatePair bubble_train(const GridPtr& grid, const std::vector<TrainSpec>& specs) {
  if (specs.empty()) throw DomainError("bubble_train: empty spec list");
  RadialField u(grid), v(grid);
  for (const TrainSpec& t : specs) {
    if (t.component != 0 && t.component != 1) throw DomainError("bubble_train: component must be 0 or 1");
    const RadialField z = sample_bubble(grid, BubbleSpec{grid->dimension(), t.lambda, t.mu});
    (t.component == 0 ? u : v).axpy(t.sign, z);
  }
  return StatePair(std::move(u), std::move(v));
}

}  // namespace nehari
