#pragma once

#include <optional>

#include "nehari/grid.hpp"

namespace nehari {

/// Singular exponent a_lambda = (N-2)/2 - sqrt(((N-2)/2)^2 - lambda).
/// Domain: 0 < lambda < Lambda_N.
double a_lambda(int dim, double lambda);

/// The constant A(N, lambda) = N (N - 2 - 2 a_lambda)^2 / (N - 2) exactly as
/// it appears in the closed form of the bubble. It is not the amplitude of a
/// solution unless N = 6; see terracini_amplitude.
double terracini_constant_literal(int dim, double lambda);

/// Amplitude that makes the bubble solve -Lap z - lambda z/|x|^2 = z^{2*-1}:
/// A(N, lambda)^{(N-2)/4}.
double terracini_amplitude(int dim, double lambda);

/// One member z_mu^lambda of the singular bubble family.
struct BubbleSpec {
  int N = 3;
  double lambda = 0.0;  // 0 <= lambda < Lambda_N; 0 gives the Aubin-Talenti bubble
  double mu = 1.0;      // scaling factor

  void validate() const;
};

/// z_mu^lambda(r) for r > 0, evaluated in log-radius.
double terracini_bubble(const BubbleSpec& spec, double r);

/// Same profile with an explicit amplitude in place of terracini_amplitude.
double terracini_profile(const BubbleSpec& spec, double amplitude, double r);

/// Nodal samples of the bubble on a grid (all nodes, no truncation).
RadialField sample_bubble(const GridPtr& grid, const BubbleSpec& spec);

/// Best Sobolev constant S for dimension N: discrete Rayleigh quotient of the
/// lambda = 0 bubble on two nested reference grids, Richardson-extrapolated.
/// Cached per N after the first call.
double sobolev_constant(int dim);

/// Log grid [r, 1/r] sized so that the gradient mass of the bubble beyond
/// either end is about tail: r = tail^{1/(N - 2 - 2 a_lambda)}.
GridPtr bubble_window_grid(int dim, double lambda, std::size_t n, double tail = 1e-12);

/// Rayleigh quotient ||u||_lambda^2 / (int |u|^{2*})^{2/2*} on u's grid.
double rayleigh_quotient(const RadialField& u, double lambda);

/// S(lambda) = (1 - 4 lambda/(N-2)^2)^{(N-1)/N} S, for 0 <= lambda < Lambda_N.
double s_lambda(int dim, double lambda);

/// Level (1/N) S(lambda)^{N/2} of the semi-trivial solutions.
double semi_trivial_energy(int dim, double lambda);

/// Amplitude c minimising the discrete residual of c * profile in the scalar
/// critical equation (least squares over interior nodes in [r_lo, r_hi]).
double residual_minimizing_amplitude(const GridPtr& grid, double lambda, double r_lo, double r_hi);

/// Largest pointwise relative residual |(-Lap z - lambda z/r^2) / z^{2*-1} - 1|
/// over interior nodes in [r_lo, r_hi].
double bubble_residual(const RadialField& z, double lambda, double r_lo, double r_hi);

/// Result of the algebraic-lemma infimum.
struct SigmaInfimum {
  double value = 0.0;
  /// False when the set is all of (0, inf) on the bracket, so the infimum is 0.
  bool has_root = true;
};

/// inf { sigma > 0 : A sigma^{(N-2)/N} < sigma + B nu sigma^{(gamma/2)(N-2)/N} }
/// by log-bisection on the boundary equation.
SigmaInfimum sigma_infimum(double A, double B, double gamma, int dim, double nu);

/// Largest nu with sigma_infimum >= (1 - eps) A^{N/2}.
double sigma_nu_threshold(double A, double B, double gamma, int dim, double eps);

}  // namespace nehari
