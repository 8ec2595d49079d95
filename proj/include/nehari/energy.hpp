#pragma once

#include <optional>

#include "nehari/grid.hpp"
#include "nehari/params.hpp"

namespace nehari {

/// Separate integrals entering the energy. The power and coupling entries are
/// taken of positive parts when the terms were built for J+.
struct EnergyTerms {
  double grad_u = 0.0;
  double grad_v = 0.0;
  double hardy_u = 0.0;
  double hardy_v = 0.0;
  double power_u = 0.0;  // int |u|^{2*}
  double power_v = 0.0;
  double coupling = 0.0;  // int h |u|^alpha |v|^beta

  double norm_D_sq(const Params& p) const {
    return grad_u - p.lambda1 * hardy_u + grad_v - p.lambda2 * hardy_v;
  }
  double power_sum() const { return power_u + power_v; }
};

EnergyTerms compute_terms(const RadialField& u, const RadialField& v, const Params& p,
                          bool positive_part);

/// A pair (u, v) on one grid, with a cache of its energy terms.
class StatePair {
 public:
  StatePair() = default;
  StatePair(RadialField u, RadialField v);

  /// Pair of zero fields on grid.
  static StatePair zero(const GridPtr& grid);

  const RadialField& u() const { return u_; }
  const RadialField& v() const { return v_; }
  const GridPtr& grid() const { return u_.grid(); }

  void set_u(RadialField u);
  void set_v(RadialField v);

  /// Terms for (p, positive_part), computed on first use and reused while the
  /// pair is unchanged and the key matches.
  const EnergyTerms& terms(const Params& p, bool positive_part = false);
  /// Cached terms when present for this key.
  std::optional<EnergyTerms> cached_terms(const Params& p, bool positive_part = false) const;

  bool is_zero() const { return u_.max_abs() == 0.0 && v_.max_abs() == 0.0; }

  StatePair scaled(double t) const;
  StatePair positive_part() const;
  StatePair abs() const;
  /// (v, u): pair for Params::swapped().
  StatePair swapped() const;

  /// this += c * o, componentwise
  StatePair& axpy(double c, const StatePair& o);

 private:
  struct Cache {
    Params params;
    bool positive_part = false;
    EnergyTerms terms;
  };

  RadialField u_;
  RadialField v_;
  std::optional<Cache> cache_;
};

/// Energy value with its term breakdown, Nehari residual and gradient norm.
struct EnergyReport {
  double j_value = 0.0;
  double norm_D_sq = 0.0;
  EnergyTerms terms;
  double nu = 0.0;
  double coupling_degree = 0.0;  // alpha + beta
  int dim = 3;
  /// ||(u,v)||^2 - int|u|^{2*} - int|v|^{2*} - nu (alpha + beta) int h|u|^alpha|v|^beta
  double nehari_residual = 0.0;
  /// D-norm of the Riesz representative of the derivative.
  double grad_norm = 0.0;
  bool positive_part = false;

  /// Signed sum of the terms, computed independently of j_value.
  double reconstruct() const;
};

double norm_D_sq(const StatePair& s, const Params& p);

/// Scalar functional of one component, 1/2 ||u||_lambda^2 - 1/2* int |u|^{2*}.
double j_single(const RadialField& u, double lambda);

/// Full report for J_nu. grad_norm is filled (one banded solve per component).
EnergyReport j_nu(const StatePair& s, const Params& p);
/// Same for J+, the functional of the positive-part problem.
EnergyReport j_nu_plus(const StatePair& s, const Params& p);
EnergyReport energy_report(const StatePair& s, const Params& p, bool positive_part);

/// Value only; uses and fills the pair's cache.
double energy_value(StatePair& s, const Params& p, bool positive_part);
double energy_value(const EnergyTerms& t, const Params& p);

struct GradientOptions {
  bool positive_part = false;
  /// Drop the nonlinear terms (test mode): the result is the Riesz
  /// representative of the quadratic part alone.
  bool linear_only = false;
};

/// Riesz representative in the D inner product of the derivative of J_nu (or
/// J+), restricted to directions that vanish at the two end nodes.
StatePair gradient(const StatePair& s, const Params& p, GradientOptions opts = {});

/// sqrt(norm_D_sq(g)).
double dual_norm(const StatePair& g, const Params& p);

/// <a, b>_D = <a_u, b_u>_{lambda1} + <a_v, b_v>_{lambda2}.
double inner_D(const StatePair& a, const StatePair& b, const Params& p);

}  // namespace nehari
