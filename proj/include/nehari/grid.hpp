#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace nehari {

struct Params;

/// Log-uniform radial mesh on [r_min, r_max] for radial functions on R^N.
///
/// Nodes r_i = r_min * exp(i h). The node weights integrate f(r) against
/// the measure omega_{N-1} r^{N-1} dr with the trapezoidal rule in s = log r,
/// corrected at both ends so that constants integrate exactly over the shell.
/// The gradient form lives on panel midpoints (one coefficient per panel); the
/// panel derivative uses the four-point stencil (u_{p-1} - 27 u_p + 27 u_{p+1}
/// - u_{p+2}) / 24h, falling back to the two-point difference on the end panels.
class RadialGrid {
 public:
  static std::shared_ptr<const RadialGrid> build(int dim, double r_min, double r_max,
                                                 std::size_t n);

  int dimension() const { return dim_; }
  std::size_t size() const { return nodes_.size(); }
  double log_step() const { return h_; }
  double r_min() const { return nodes_.front(); }
  double r_max() const { return nodes_.back(); }
  /// Surface area omega_{N-1} of the unit sphere in R^N.
  double sphere_area() const { return omega_; }

  std::span<const double> nodes() const { return nodes_; }
  /// Quadrature weights for dV = omega r^{N-1} dr.
  std::span<const double> weights() const { return weights_; }
  /// weights()[i] / r_i^2, the Hardy-term weights.
  std::span<const double> hardy_weights() const { return hardy_weights_; }
  /// Per-panel stiffness omega r_{i+1/2}^{N-2} / h.
  std::span<const double> panel_stiffness() const { return stiffness_; }
  /// Panel midpoints r_{i+1/2}.
  std::span<const double> midpoints() const { return midpoints_; }

 private:
  RadialGrid() = default;

  int dim_ = 3;
  double h_ = 0.0;
  double omega_ = 0.0;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> hardy_weights_;
  std::vector<double> stiffness_;
  std::vector<double> midpoints_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

/// Free-function spelling of RadialGrid::build.
GridPtr build_grid(int dim, double r_min, double r_max, std::size_t n);

/// Nodal samples of one radial component on a shared grid.
class RadialField {
 public:
  RadialField() = default;
  explicit RadialField(GridPtr grid);
  RadialField(GridPtr grid, std::vector<double> values);

  static RadialField sample(GridPtr grid, const std::function<double(double)>& f);

  const GridPtr& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  bool all_finite() const;
  /// |value at r_max| <= tol * max |value|.
  bool decays(double tol = 1e-6) const;
  double max_abs() const;

  RadialField positive_part() const;
  RadialField abs() const;
  /// Zero the two end nodes (homogeneous Dirichlet truncation).
  RadialField& clamp_ends();

  RadialField& operator+=(const RadialField& o);
  RadialField& operator-=(const RadialField& o);
  RadialField& operator*=(double c);
  /// this += c * o
  RadialField& axpy(double c, const RadialField& o);

  friend RadialField operator+(RadialField a, const RadialField& b) { return a += b; }
  friend RadialField operator-(RadialField a, const RadialField& b) { return a -= b; }
  friend RadialField operator*(double c, RadialField a) { return a *= c; }
  friend RadialField operator*(RadialField a, double c) { return a *= c; }

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

void require_same_grid(const RadialField& a, const RadialField& b);

/// Integral of f over the shell, f dV.
double integrate(const RadialField& f);

/// Integral of |u'|^2 dV from panel differences in log-radius.
double grad_norm_sq(const RadialField& u);

/// Integral of u^2 / r^2 dV.
double hardy_term(const RadialField& u);

/// Integral of |u|^{2*} dV (the power integral, not its root).
double lp_star_norm(const RadialField& u);

/// Integral of h |u|^alpha |v|^beta dV.
double coupling_integral(const RadialField& u, const RadialField& v, const Params& p);

/// Bilinear form <u, w>_lambda whose diagonal is grad_norm_sq - lambda hardy_term.
double inner_lambda(const RadialField& u, const RadialField& w, double lambda);

/// Panel derivative (D u)_p = h du/ds at the midpoint of panel p.
double panel_difference(std::span<const double> u, std::size_t p);

/// Symmetric banded matrix of the quadratic form ||u||^2_lambda on all nodes.
struct BandedForm {
  static constexpr std::size_t kBand = 3;
  /// band[k][i] couples node i and i + k.
  std::array<std::vector<double>, kBand + 1> band;

  static BandedForm assemble(const RadialGrid& g, double lambda);
  std::size_t size() const { return band[0].size(); }
  /// y = A x on all nodes.
  std::vector<double> apply(std::span<const double> x) const;
};

/// Solves A_int w = load_int with w = 0 at both end nodes, where A is the
/// lambda-form and load holds nodal values of a linear functional.
/// Throws SolverFailure when A_int is not positive definite.
RadialField riesz_solve_load(const GridPtr& grid, std::span<const double> load, double lambda);

/// Riesz representative of the L2(dV) functional phi -> int rhs phi dV,
/// i.e. the discrete solution of -Lap w - lambda w / r^2 = rhs, w = 0 at the ends.
RadialField riesz_solve(const RadialField& rhs, double lambda);

/// Strong-form finite-difference operator -Lap u - lambda u / r^2 at the
/// interior nodes (end nodes are set to zero).
RadialField apply_radial_operator(const RadialField& u, double lambda);

}  // namespace nehari
