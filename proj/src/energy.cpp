#include "nehari/energy.hpp"

#include <cmath>

#include "nehari/errors.hpp"

namespace nehari {

EnergyTerms compute_terms(const RadialField& u, const RadialField& v, const Params& p,
                          bool positive_part) {
  require_same_grid(u, v);
  EnergyTerms t;
  t.grad_u = grad_norm_sq(u);
  t.grad_v = grad_norm_sq(v);
  t.hardy_u = hardy_term(u);
  t.hardy_v = hardy_term(v);
  if (positive_part) {
    const RadialField up = u.positive_part();
    const RadialField vp = v.positive_part();
    t.power_u = lp_star_norm(up);
    t.power_v = lp_star_norm(vp);
    t.coupling = coupling_integral(up, vp, p);
  } else {
    t.power_u = lp_star_norm(u);
    t.power_v = lp_star_norm(v);
    t.coupling = coupling_integral(u, v, p);
  }
  return t;
}

// ---------------------------------------------------------------------------
// StatePair

StatePair::StatePair(RadialField u, RadialField v) : u_(std::move(u)), v_(std::move(v)) {
  require_same_grid(u_, v_);
}

StatePair StatePair::zero(const GridPtr& grid) { return StatePair(RadialField(grid), RadialField(grid)); }

void StatePair::set_u(RadialField u) {
  require_same_grid(u, v_);
  u_ = std::move(u);
  cache_.reset();
}

void StatePair::set_v(RadialField v) {
  require_same_grid(u_, v);
  v_ = std::move(v);
  cache_.reset();
}

const EnergyTerms& StatePair::terms(const Params& p, bool positive_part) {
  if (!cache_ || cache_->positive_part != positive_part || !(cache_->params == p)) {
    cache_ = Cache{p, positive_part, compute_terms(u_, v_, p, positive_part)};
  }
  return cache_->terms;
}

std::optional<EnergyTerms> StatePair::cached_terms(const Params& p, bool positive_part) const {
  if (!cache_ || cache_->positive_part != positive_part || !(cache_->params == p)) return std::nullopt;
  return cache_->terms;
}

StatePair StatePair::scaled(double t) const { return StatePair(t * u_, t * v_); }
StatePair StatePair::positive_part() const { return StatePair(u_.positive_part(), v_.positive_part()); }
StatePair StatePair::abs() const { return StatePair(u_.abs(), v_.abs()); }
StatePair StatePair::swapped() const { return StatePair(v_, u_); }

StatePair& StatePair::axpy(double c, const StatePair& o) {
  u_.axpy(c, o.u_);
  v_.axpy(c, o.v_);
  cache_.reset();
  return *this;
}

// ---------------------------------------------------------------------------
// Functionals

double EnergyReport::reconstruct() const {
  const double p = 2.0 * dim / (dim - 2.0);
  return 0.5 * norm_D_sq - (terms.power_u + terms.power_v) / p - nu * terms.coupling;
}

double norm_D_sq(const StatePair& s, const Params& p) {
  return grad_norm_sq(s.u()) - p.lambda1 * hardy_term(s.u()) + grad_norm_sq(s.v()) -
         p.lambda2 * hardy_term(s.v());
}

double j_single(const RadialField& u, double lambda) {
  const double p = critical_exponent(u.grid()->dimension());
  return 0.5 * (grad_norm_sq(u) - lambda * hardy_term(u)) - lp_star_norm(u) / p;
}

double energy_value(const EnergyTerms& t, const Params& p) {
  return 0.5 * t.norm_D_sq(p) - t.power_sum() / p.two_star() - p.nu * t.coupling;
}

double energy_value(StatePair& s, const Params& p, bool positive_part) {
  return energy_value(s.terms(p, positive_part), p);
}

EnergyReport energy_report(const StatePair& s, const Params& p, bool positive_part) {
  if (s.grid()->dimension() != p.N) throw GridMismatchError("grid dimension differs from N");
  EnergyReport r;
  r.terms = compute_terms(s.u(), s.v(), p, positive_part);
  r.norm_D_sq = r.terms.norm_D_sq(p);
  r.nu = p.nu;
  r.coupling_degree = p.alpha + p.beta;
  r.dim = p.N;
  r.positive_part = positive_part;
  r.j_value = energy_value(r.terms, p);
  r.nehari_residual = r.norm_D_sq - r.terms.power_sum() - p.nu * (p.alpha + p.beta) * r.terms.coupling;
  r.grad_norm = dual_norm(gradient(s, p, {positive_part, false}), p);
  return r;
}

EnergyReport j_nu(const StatePair& s, const Params& p) { return energy_report(s, p, false); }
EnergyReport j_nu_plus(const StatePair& s, const Params& p) { return energy_report(s, p, true); }

// ---------------------------------------------------------------------------
// Gradient

namespace {

// Nodal derivative of the nonlinear part with respect to the first slot:
// |a|^{2*-2} a + nu * expo * h |a|^{expo-2} a |b|^other (or its positive-part form).
std::vector<double> nonlinear_load(const RadialField& a, const RadialField& b, double expo,
                                   double other, const Params& p, bool positive_part) {
  const auto& g = *a.grid();
  const auto r = g.nodes();
  const auto w = g.weights();
  const double ps = p.two_star();
  std::vector<double> f(g.size(), 0.0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    double x = a[i];
    double y = b[i];
    if (positive_part) {
      x = std::max(x, 0.0);
      y = std::max(y, 0.0);
    }
    const double ax = std::abs(x);
    if (ax == 0.0) continue;
    const double sgn = x > 0.0 ? 1.0 : -1.0;
    double val = sgn * std::pow(ax, ps - 1.0);
    const double ay = std::abs(y);
    if (p.nu != 0.0 && ay != 0.0)
      val += p.nu * expo * p.h(r[i]) * sgn * std::pow(ax, expo - 1.0) * std::pow(ay, other);
    f[i] = w[i] * val;
  }
  return f;
}

RadialField component_gradient(const RadialField& a, const RadialField& b, double lambda,
                               double expo, double other, const Params& p,
                               const GradientOptions& opts) {
  const auto form = BandedForm::assemble(*a.grid(), lambda);
  std::vector<double> load = form.apply(a.values());
  if (!opts.linear_only) {
    const auto f = nonlinear_load(a, b, expo, other, p, opts.positive_part);
    for (std::size_t i = 0; i < load.size(); ++i) load[i] -= f[i];
  }
  return riesz_solve_load(a.grid(), load, lambda);
}

}  // namespace

StatePair gradient(const StatePair& s, const Params& p, GradientOptions opts) {
  if (s.grid()->dimension() != p.N) throw GridMismatchError("grid dimension differs from N");
  RadialField gu = component_gradient(s.u(), s.v(), p.lambda1, p.alpha, p.beta, p, opts);
  RadialField gv = component_gradient(s.v(), s.u(), p.lambda2, p.beta, p.alpha, p, opts);
  return StatePair(std::move(gu), std::move(gv));
}

double inner_D(const StatePair& a, const StatePair& b, const Params& p) {
  return inner_lambda(a.u(), b.u(), p.lambda1) + inner_lambda(a.v(), b.v(), p.lambda2);
}

double dual_norm(const StatePair& g, const Params& p) {
  return std::sqrt(std::max(0.0, norm_D_sq(g, p)));
}

}  // namespace nehari
