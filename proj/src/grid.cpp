#include "nehari/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "nehari/errors.hpp"
#include "nehari/params.hpp"

namespace nehari {

GridPtr RadialGrid::build(int dim, double r_min, double r_max, std::size_t n) {
  if (dim < 3) throw DomainError("build_grid: N must be >= 3");
  if (!(r_min > 0.0) || !(r_max > r_min) || !std::isfinite(r_max)) {
    std::ostringstream os;
    os << "build_grid: invalid range [" << r_min << ", " << r_max << "]";
    throw DomainError(os.str());
  }
  if (n < 16) throw DomainError("build_grid: need at least 16 nodes");

  auto g = std::shared_ptr<RadialGrid>(new RadialGrid());
  g->dim_ = dim;
  const double s0 = std::log(r_min);
  const double s1 = std::log(r_max);
  const double h = (s1 - s0) / static_cast<double>(n - 1);
  g->h_ = h;
  g->omega_ = 2.0 * std::pow(std::numbers::pi, 0.5 * dim) / std::tgamma(0.5 * dim);

  g->nodes_.resize(n);
  g->weights_.resize(n);
  g->hardy_weights_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = s0 + h * static_cast<double>(i);
    g->nodes_[i] = std::exp(s);
    g->weights_[i] = g->omega_ * h * std::exp(dim * s);
  }
  g->nodes_.front() = r_min;
  g->nodes_.back() = r_max;
  g->weights_.front() *= 0.5;
  g->weights_.back() *= 0.5;

  // Trapezoid error for exp(N s) on [s0, s1] is kappa (e^{N s1} - e^{N s0}).
  const double nh = dim * h;
  const double kappa = 0.5 * h / std::tanh(0.5 * nh) - 1.0 / dim;
  g->weights_.front() += g->omega_ * kappa * std::pow(r_min, dim);
  g->weights_.back() -= g->omega_ * kappa * std::pow(r_max, dim);

  for (std::size_t i = 0; i < n; ++i) {
    g->hardy_weights_[i] = g->weights_[i] / (g->nodes_[i] * g->nodes_[i]);
  }

  g->stiffness_.resize(n - 1);
  g->midpoints_.resize(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double s = s0 + h * (static_cast<double>(i) + 0.5);
    g->midpoints_[i] = std::exp(s);
    g->stiffness_[i] = g->omega_ * std::exp((dim - 2) * s) / h;
  }
  return g;
}

GridPtr build_grid(int dim, double r_min, double r_max, std::size_t n) {
  return RadialGrid::build(dim, r_min, r_max, n);
}

// ---------------------------------------------------------------------------
// RadialField

RadialField::RadialField(GridPtr grid) : grid_(std::move(grid)) {
  values_.assign(grid_->size(), 0.0);
}

RadialField::RadialField(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_->size())
    throw GridMismatchError("RadialField: value count does not match the grid");
}

RadialField RadialField::sample(GridPtr grid, const std::function<double(double)>& f) {
  RadialField out(grid);
  const auto r = grid->nodes();
  for (std::size_t i = 0; i < r.size(); ++i) out.values_[i] = f(r[i]);
  return out;
}

bool RadialField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double x) { return std::isfinite(x); });
}

double RadialField::max_abs() const {
  double m = 0.0;
  for (double x : values_) m = std::max(m, std::abs(x));
  return m;
}

bool RadialField::decays(double tol) const {
  const double m = max_abs();
  return m == 0.0 || std::abs(values_.back()) <= tol * m;
}

RadialField RadialField::positive_part() const {
  RadialField out = *this;
  for (double& x : out.values_) x = std::max(x, 0.0);
  return out;
}

RadialField RadialField::abs() const {
  RadialField out = *this;
  for (double& x : out.values_) x = std::abs(x);
  return out;
}

RadialField& RadialField::clamp_ends() {
  if (!values_.empty()) {
    values_.front() = 0.0;
    values_.back() = 0.0;
  }
  return *this;
}

void require_same_grid(const RadialField& a, const RadialField& b) {
  if (a.grid() != b.grid()) throw GridMismatchError("fields live on different grids");
}

RadialField& RadialField::operator+=(const RadialField& o) { return axpy(1.0, o); }
RadialField& RadialField::operator-=(const RadialField& o) { return axpy(-1.0, o); }

RadialField& RadialField::operator*=(double c) {
  for (double& x : values_) x *= c;
  return *this;
}

RadialField& RadialField::axpy(double c, const RadialField& o) {
  require_same_grid(*this, o);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += c * o.values_[i];
  return *this;
}

// ---------------------------------------------------------------------------
// Integrals

double integrate(const RadialField& f) {
  const auto w = f.grid()->weights();
  const auto x = f.values();
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * x[i];
  return acc;
}

double panel_difference(std::span<const double> u, std::size_t p) {
  if (p == 0 || p + 2 >= u.size()) return u[p + 1] - u[p];
  return (u[p - 1] - 27.0 * u[p] + 27.0 * u[p + 1] - u[p + 2]) / 24.0;
}

double grad_norm_sq(const RadialField& u) {
  const auto c = u.grid()->panel_stiffness();
  const auto x = u.values();
  double acc = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double d = panel_difference(x, i);
    acc += c[i] * d * d;
  }
  return acc;
}

double hardy_term(const RadialField& u) {
  const auto w = u.grid()->hardy_weights();
  const auto x = u.values();
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * x[i] * x[i];
  return acc;
}

double lp_star_norm(const RadialField& u) {
  const double p = critical_exponent(u.grid()->dimension());
  const auto w = u.grid()->weights();
  const auto x = u.values();
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * std::pow(std::abs(x[i]), p);
  return acc;
}

double coupling_integral(const RadialField& u, const RadialField& v, const Params& p) {
  require_same_grid(u, v);
  const auto& g = *u.grid();
  const auto w = g.weights();
  const auto r = g.nodes();
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double a = std::abs(u[i]);
    const double b = std::abs(v[i]);
    if (a == 0.0 || b == 0.0) continue;
    acc += w[i] * p.h(r[i]) * std::pow(a, p.alpha) * std::pow(b, p.beta);
  }
  return acc;
}

double inner_lambda(const RadialField& u, const RadialField& w, double lambda) {
  require_same_grid(u, w);
  const auto& g = *u.grid();
  const auto c = g.panel_stiffness();
  const auto d = g.hardy_weights();
  double acc = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i)
    acc += c[i] * panel_difference(u.values(), i) * panel_difference(w.values(), i);
  for (std::size_t i = 0; i < d.size(); ++i) acc -= lambda * d[i] * u[i] * w[i];
  return acc;
}

// ---------------------------------------------------------------------------
// Operators

namespace {

// Node offset and coefficients of the panel difference stencil.
struct Stencil {
  std::size_t first = 0;
  std::size_t len = 2;
  std::array<double, 4> coef{};
};

Stencil panel_stencil(std::size_t p, std::size_t n) {
  if (p == 0 || p + 2 >= n) return {p, 2, {-1.0, 1.0, 0.0, 0.0}};
  return {p - 1, 4, {1.0 / 24.0, -27.0 / 24.0, 27.0 / 24.0, -1.0 / 24.0}};
}

}  // namespace

BandedForm BandedForm::assemble(const RadialGrid& g, double lambda) {
  const std::size_t n = g.size();
  const auto c = g.panel_stiffness();
  const auto d = g.hardy_weights();
  BandedForm a;
  for (auto& b : a.band) b.assign(n, 0.0);
  for (std::size_t p = 0; p + 1 < n; ++p) {
    const Stencil st = panel_stencil(p, n);
    for (std::size_t k = 0; k < st.len; ++k)
      for (std::size_t l = k; l < st.len; ++l)
        a.band[l - k][st.first + k] += c[p] * st.coef[k] * st.coef[l];
  }
  for (std::size_t i = 0; i < n; ++i) a.band[0][i] -= lambda * d[i];
  return a;
}

std::vector<double> BandedForm::apply(std::span<const double> x) const {
  const std::size_t n = size();
  std::vector<double> y(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] += band[0][i] * x[i];
    for (std::size_t k = 1; k <= kBand && i + k < n; ++k) {
      y[i] += band[k][i] * x[i + k];
      y[i + k] += band[k][i] * x[i];
    }
  }
  return y;
}

RadialField riesz_solve_load(const GridPtr& grid, std::span<const double> load, double lambda) {
  const std::size_t n = grid->size();
  if (load.size() != n) throw GridMismatchError("riesz_solve: load size does not match grid");
  const BandedForm a = BandedForm::assemble(*grid, lambda);
  constexpr std::size_t bw = BandedForm::kBand;

  // Banded LDL^T on the interior block, global indices 1 .. n-2.
  const std::size_t m = n - 2;
  const auto A = [&](std::size_t i, std::size_t j) {  // interior i >= j
    return a.band[i - j][j + 1];
  };
  std::vector<double> piv(m);
  std::vector<std::array<double, bw>> low(m);  // low[i][d] = L(i, i - d - 1)
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j0 = i >= bw ? i - bw : 0;
    for (std::size_t j = j0; j < i; ++j) {
      double v = A(i, j);
      for (std::size_t k = j0; k < j; ++k) {
        if (j - k > bw) continue;
        v -= low[i][i - k - 1] * low[j][j - k - 1] * piv[k];
      }
      low[i][i - j - 1] = v / piv[j];
    }
    double dk = A(i, i);
    for (std::size_t k = j0; k < i; ++k) dk -= low[i][i - k - 1] * low[i][i - k - 1] * piv[k];
    if (!(dk > 1e-14 * std::abs(A(i, i)))) {
      std::ostringstream os;
      os << "riesz_solve: form is not positive definite at r = " << grid->nodes()[i + 1]
         << " (grid too coarse near the singularity or lambda >= Lambda_N)";
      throw SolverFailure(os.str());
    }
    piv[i] = dk;
  }
  std::vector<double> y(m);
  for (std::size_t i = 0; i < m; ++i) {
    double v = load[i + 1];
    const std::size_t j0 = i >= bw ? i - bw : 0;
    for (std::size_t k = j0; k < i; ++k) v -= low[i][i - k - 1] * y[k];
    y[i] = v;
  }
  RadialField w(grid);
  auto out = w.values();
  for (std::size_t i = m; i-- > 0;) {
    double v = y[i] / piv[i];
    for (std::size_t k = i + 1; k < m && k <= i + bw; ++k) v -= low[k][k - i - 1] * out[k + 1];
    out[i + 1] = v;
  }
  return w;
}

RadialField riesz_solve(const RadialField& rhs, double lambda) {
  const auto w = rhs.grid()->weights();
  std::vector<double> load(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) load[i] = w[i] * rhs[i];
  return riesz_solve_load(rhs.grid(), load, lambda);
}

RadialField apply_radial_operator(const RadialField& u, double lambda) {
  const auto& g = *u.grid();
  const std::size_t n = g.size();
  const double h = g.log_step();
  const int dim = g.dimension();
  const auto r = g.nodes();
  RadialField out(u.grid());
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double uss = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (h * h);
    const double us = (u[i + 1] - u[i - 1]) / (2.0 * h);
    out[i] = -(uss + (dim - 2) * us) / (r[i] * r[i]) - lambda * u[i] / (r[i] * r[i]);
  }
  return out;
}

}  // namespace nehari
