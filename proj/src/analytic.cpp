#include "nehari/analytic.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "nehari/errors.hpp"
#include "nehari/params.hpp"

namespace nehari {

namespace {

void require_dimension(int dim) {
  if (dim < 3) throw DomainError("dimension N must be >= 3");
}

// log(1 + e^x) without overflow.
double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

// a_lambda on the closed-open range [0, Lambda_N).
double hardy_exponent(int dim, double lambda) {
  const double m = 0.5 * (dim - 2);
  return m - std::sqrt(m * m - lambda);
}

// Reference grids for the Sobolev constant (fourth-order form, so the
// extrapolation weight is 16): the lambda = 0 bubble is bounded at
// the origin and decays like r^{2-N}, so the outer radius is pushed far out.
constexpr double kRefRmin = 1e-8;
constexpr double kRefRmax = 1e16;
constexpr std::size_t kRefCoarse = 8193;
constexpr std::size_t kRefFine = 2 * kRefCoarse - 1;

}  // namespace

double a_lambda(int dim, double lambda) {
  require_dimension(dim);
  if (!(lambda > 0.0 && lambda < hardy_constant(dim))) {
    std::ostringstream os;
    os << "a_lambda: lambda = " << lambda << " outside (0, " << hardy_constant(dim) << ")";
    throw DomainError(os.str());
  }
  return hardy_exponent(dim, lambda);
}

double terracini_constant_literal(int dim, double lambda) {
  require_dimension(dim);
  if (!(lambda >= 0.0 && lambda < hardy_constant(dim)))
    throw DomainError("terracini constant: lambda outside [0, Lambda_N)");
  const double a = hardy_exponent(dim, lambda);
  const double d = dim - 2 - 2.0 * a;
  return dim * d * d / (dim - 2);
}

double terracini_amplitude(int dim, double lambda) {
  return std::pow(terracini_constant_literal(dim, lambda), 0.25 * (dim - 2));
}

void BubbleSpec::validate() const {
  require_dimension(N);
  if (!(lambda >= 0.0 && lambda < hardy_constant(N)))
    throw DomainError("bubble: lambda outside [0, Lambda_N)");
  if (!(mu > 0.0) || !std::isfinite(mu)) throw DomainError("bubble: mu must be positive");
}

double terracini_profile(const BubbleSpec& spec, double amplitude, double r) {
  spec.validate();
  if (!(r > 0.0)) throw DomainError("bubble: evaluation at r <= 0 is singular");
  const double m = 0.5 * (spec.N - 2);
  const double a = hardy_exponent(spec.N, spec.lambda);
  const double b = 2.0 - 4.0 * a / (spec.N - 2);
  const double log_mu = std::log(spec.mu);
  const double log_rho = std::log(r) - log_mu;
  const double log_z = -m * log_mu + std::log(amplitude) - a * log_rho - m * softplus(b * log_rho);
  return std::exp(log_z);
}

double terracini_bubble(const BubbleSpec& spec, double r) {
  return terracini_profile(spec, terracini_amplitude(spec.N, spec.lambda), r);
}

RadialField sample_bubble(const GridPtr& grid, const BubbleSpec& spec) {
  if (grid->dimension() != spec.N) throw GridMismatchError("bubble dimension differs from grid");
  return RadialField::sample(grid, [&spec](double r) { return terracini_bubble(spec, r); });
}

GridPtr bubble_window_grid(int dim, double lambda, std::size_t n, double tail) {
  require_dimension(dim);
  if (!(lambda >= 0.0 && lambda < hardy_constant(dim))) throw DomainError("bubble_window_grid: lambda outside [0, Lambda_N)");
  if (!(tail > 0.0 && tail < 1.0)) throw DomainError("bubble_window_grid: tail must lie in (0, 1)");
  const double spread = dim - 2 - 2.0 * hardy_exponent(dim, lambda);
  const double r_min = std::exp(std::log(tail) / spread);
  return build_grid(dim, r_min, 1.0 / r_min, n);
}

double rayleigh_quotient(const RadialField& u, double lambda) {
  const double num = grad_norm_sq(u) - lambda * hardy_term(u);
  const double p = critical_exponent(u.grid()->dimension());
  return num / std::pow(lp_star_norm(u), 2.0 / p);
}

double sobolev_constant(int dim) {
  require_dimension(dim);
  static std::mutex mutex;
  static std::map<int, double> cache;
  std::lock_guard lock(mutex);
  if (auto it = cache.find(dim); it != cache.end()) return it->second;

  const BubbleSpec spec{dim, 0.0, 1.0};
  const auto coarse = build_grid(dim, kRefRmin, kRefRmax, kRefCoarse);
  const auto fine = build_grid(dim, kRefRmin, kRefRmax, kRefFine);
  const double rc = rayleigh_quotient(sample_bubble(coarse, spec), 0.0);
  const double rf = rayleigh_quotient(sample_bubble(fine, spec), 0.0);
  const double s = (16.0 * rf - rc) / 15.0;
  cache.emplace(dim, s);
  return s;
}

double s_lambda(int dim, double lambda) {
  require_dimension(dim);
  if (!(lambda >= 0.0 && lambda < hardy_constant(dim)))
    throw DomainError("s_lambda: lambda outside [0, Lambda_N)");
  const double ratio = 1.0 - 4.0 * lambda / ((dim - 2.0) * (dim - 2.0));
  return std::pow(ratio, (dim - 1.0) / dim) * sobolev_constant(dim);
}

double semi_trivial_energy(int dim, double lambda) {
  return std::pow(s_lambda(dim, lambda), 0.5 * dim) / dim;
}

double residual_minimizing_amplitude(const GridPtr& grid, double lambda, double r_lo, double r_hi) {
  const int dim = grid->dimension();
  const double p = critical_exponent(dim);
  const BubbleSpec spec{dim, lambda, 1.0};
  const auto prof = RadialField::sample(grid, [&](double r) { return terracini_profile(spec, 1.0, r); });
  const auto lin = apply_radial_operator(prof, lambda);
  const auto r = grid->nodes();
  // c L z = c^{2*-1} z^{2*-1}: average the pointwise ratio L z / z^{2*-1}.
  double acc = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 1; i + 1 < r.size(); ++i) {
    if (r[i] < r_lo || r[i] > r_hi) continue;
    acc += lin[i] / std::pow(prof[i], p - 1.0);
    ++count;
  }
  if (count == 0) throw DomainError("residual_minimizing_amplitude: empty radius window");
  return std::pow(acc / static_cast<double>(count), 1.0 / (p - 2.0));
}

double bubble_residual(const RadialField& z, double lambda, double r_lo, double r_hi) {
  const double p = critical_exponent(z.grid()->dimension());
  const auto lin = apply_radial_operator(z, lambda);
  const auto r = z.grid()->nodes();
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < r.size(); ++i) {
    if (r[i] < r_lo || r[i] > r_hi) continue;
    const double rhs = std::pow(std::abs(z[i]), p - 1.0);
    worst = std::max(worst, std::abs(lin[i] - rhs) / rhs);
  }
  return worst;
}

SigmaInfimum sigma_infimum(double A, double B, double gamma, int dim, double nu) {
  require_dimension(dim);
  if (!(A > 0.0) || !(B > 0.0) || !(gamma >= 2.0) || !(nu >= 0.0))
    throw DomainError("sigma_infimum: need A, B > 0, gamma >= 2, nu >= 0");
  const double p = (dim - 2.0) / dim;
  const double q = 0.5 * gamma * p;
  const double scale = std::pow(A, 0.5 * dim);
  // Dividing the boundary inequality by sigma^p gives an increasing function.
  const auto g = [&](double log_sigma) {
    return std::exp((1.0 - p) * log_sigma) + B * nu * std::exp((q - p) * log_sigma) - A;
  };
  double lo = std::log(1e-12 * scale);
  double hi = std::log(1e3 * scale);
  if (g(lo) >= 0.0) return {0.0, false};
  if (g(hi) <= 0.0) throw NoRootError("sigma_infimum: boundary equation has no root on the bracket");
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  return {std::exp(0.5 * (lo + hi)), true};
}

double sigma_nu_threshold(double A, double B, double gamma, int dim, double eps) {
  require_dimension(dim);
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("sigma_nu_threshold: eps outside (0, 1)");
  if (!(A > 0.0) || !(B > 0.0) || !(gamma >= 2.0))
    throw DomainError("sigma_nu_threshold: need A, B > 0, gamma >= 2");
  const double p = (dim - 2.0) / dim;
  const double q = 0.5 * gamma * p;
  const double sigma = (1.0 - eps) * std::pow(A, 0.5 * dim);
  return (A - std::pow(sigma, 1.0 - p)) / (B * std::pow(sigma, q - p));
}

}  // namespace nehari
