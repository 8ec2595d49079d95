#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nehari/energy.hpp"

namespace nehari {

/// A pair scaled onto the Nehari manifold.
struct NehariPoint {
  StatePair state;
  double t_star = 1.0;
  double phi_residual = 0.0;
  bool positive_part = false;
};

/// Radial scaling onto the Nehari manifold of J_nu (or of J+ when
/// positive_part is set). Throws NoRootError for pairs whose power and
/// coupling terms all vanish, ConvergenceError when the root is outside
/// [1e-8, 1e8].
NehariPoint project(const StatePair& s, const Params& p, bool positive_part = false);

/// Multiplier t > 0 solving Q = t^{2*-2} P + nu (alpha+beta) t^{alpha+beta-2} C.
double scaling_root(double Q, double P, double C, const Params& p);

/// Energy on the manifold, (1/N) P + nu (alpha+beta-2)/2 C.
/// Throws StalePointError when the state is off the manifold by more than 1e-8 relative.
double restricted_energy(const NehariPoint& np, const Params& p);

/// (2 - alpha - beta) ||(u,v)||^2 + (alpha + beta - 2*) P, the second derivative of
/// t -> J(t u, t v) at t = 1 on the manifold.
double second_variation_along_state(const NehariPoint& np, const Params& p);

enum class Verdict { LocalMin, Saddle, Inconclusive };
enum class SemiTrivial { First, Second };  // (z1, 0) or (0, z2)

std::string to_string(Verdict v);
std::string to_string(SemiTrivial w);

/// Clamped bubble of the active component, zero in the other.
StatePair semitrivial_pair(SemiTrivial which, const Params& p, const GridPtr& grid);

/// Unit-step Sobolev gradient iterations with projection, until the dual
/// gradient norm is below 1e-11 relative (at most 500 steps). Meant for starts
/// close to a semi-trivial point.
NehariPoint polish_semitrivial(NehariPoint np, const Params& p);

/// The discrete semi-trivial critical point on grid.
NehariPoint semitrivial_point(SemiTrivial which, const Params& p, const GridPtr& grid);

struct ClassifyOptions {
  GridPtr grid;  // null: log grid on [1e-6, 1e6] with 1024 nodes
  int n_directions = 12;
  /// Largest relative amplitude; the ladder halves it down to ~1e-4 * step.
  double step = 0.05;
  std::uint64_t seed = 1;
  /// Relative energy changes below this are treated as zero.
  double tol = 1e-8;
};

struct DirectionProbe {
  std::string kind;  // "vanishing", "mixed", "active"
  double amplitude = 0.0;  // amplitude that decided the sign (0 if none did)
  double delta = 0.0;      // relative restricted-energy change at that amplitude
  std::vector<double> ladder_deltas;
};

struct ClassifyResult {
  Verdict verdict = Verdict::Inconclusive;
  SemiTrivial which = SemiTrivial::First;
  double base_level = 0.0;      // discrete restricted energy of the projected bubble
  double analytic_level = 0.0;  // (1/N) S(lambda)^{N/2}
  std::vector<double> amplitudes;
  std::vector<DirectionProbe> probes;
};

/// Probes the restricted energy around a semi-trivial point along random
/// smooth perturbations and labels the point. Uses J_nu (signs are irrelevant
/// to the semi-trivial comparison).
ClassifyResult classify_semitrivial(SemiTrivial which, const Params& p, const ClassifyOptions& opts = {});

/// Bisection in log nu for the coupling at which the verdict switches from
/// LocalMin (at nu_lo) to Saddle (at nu_hi). Throws ConvergenceError when the
/// end verdicts are not LocalMin / Saddle.
double classify_nu_threshold(SemiTrivial which, Params p, const ClassifyOptions& opts,
                             double nu_lo, double nu_hi, int iterations = 30);

/// Smallest mu with ||phi||^2_{lambda} = mu int h z^{expo} phi^2 on the grid,
/// where z is the bubble of the active component and phi lives in the
/// vanishing one. The quadratic form of the vanishing direction changes sign at
/// nu = mu / 2 when the vanishing exponent is 2.
double coupling_eigenvalue(SemiTrivial which, const Params& p, const GridPtr& grid);

/// Smooth compactly supported bump in log-radius, (1 - x^2)^3 with
/// x = (log r - center) / width on |x| < 1.
RadialField log_bump(const GridPtr& grid, double center, double width);

}  // namespace nehari
