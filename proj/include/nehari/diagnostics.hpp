#pragma once

#include <vector>

#include "nehari/energy.hpp"

namespace nehari {

/// Split of one component's integrals between the origin region, the bulk
/// and the region near infinity.
struct ComponentLedger {
  double rho_origin = 0.0;  // 2*-mass
  double rho_bulk = 0.0;
  double rho_infinity = 0.0;
  double gamma_origin = 0.0;  // Hardy mass, int u^2/r^2
  double gamma_bulk = 0.0;
  double gamma_infinity = 0.0;
  double mu_origin = 0.0;  // gradient mass, int |u'|^2
  double mu_bulk = 0.0;
  double mu_infinity = 0.0;

  double rho_total() const { return rho_origin + rho_bulk + rho_infinity; }
  double gamma_total() const { return gamma_origin + gamma_bulk + gamma_infinity; }
  double mu_total() const { return mu_origin + mu_bulk + mu_infinity; }
};

struct MassLedger {
  double eps = 0.0;
  double R = 0.0;
  ComponentLedger first;
  ComponentLedger second;
};

/// Partition of unity 1 = phi_origin + phi_bulk + phi_infinity in log-radius.
/// phi_origin drops from 1 to 0 over the decade [eps/sqrt10, eps*sqrt10] with a
/// C1 smoothstep; phi_infinity rises over the decade centred at R.
struct Cutoffs {
  double eps = 1e-3;
  double R = 1e3;
  double origin(double r) const;
  double infinity(double r) const;
};

/// Cut-off weighted split of the 2*, Hardy and gradient integrals of both
/// components (gradient terms weighted at panel midpoints). Throws DomainError
/// unless r_min < eps, R < r_max and the two ramps are disjoint (R >= 10 eps).
MassLedger mass_accounting(const StatePair& s, double eps = 1e-3, double R = 1e3);

/// Energy window of the PS condition for J+ around the level of one
/// semi-trivial solution, with the excluded ladder points inside it.
struct PsWindow {
  double lower = 0.0;  // (1/N) S^{N/2}(lambda_k)
  double upper = 0.0;  // (1/N) (S^{N/2}(lambda_1) + S^{N/2}(lambda_2))
  double rung = 0.0;   // ladder spacing (1/N) S^{N/2}(lambda_k)
  std::vector<double> excluded;  // ladder points l * rung with lower <= l rung <= upper
  bool applicable = false;  // exponent and ordering hypotheses of the window hold
};

struct PsThresholds {
  /// (1/N) min{S(l1), S(l2)}^{N/2}: PS holds below this for alpha + beta < 2*.
  double ground = 0.0;
  /// Window attached to lambda_2 (needs alpha >= 2, lambda_2 >= lambda_1).
  PsWindow window;
  /// Mirrored window attached to lambda_1 (needs beta >= 2, lambda_1 >= lambda_2).
  PsWindow mirrored;
  double s_sum = 0.0;       // S^{N/2}(l1) + S^{N/2}(l2)
  double s_critical = 0.0;  // S^{N/2}
  bool sum_below_critical = false;

  /// True when c lies in an applicable window and off its ladder (relative gap 1e-9).
  bool admissible(double c) const;
};

PsThresholds ps_thresholds(const Params& p);

/// Where an energy level sits relative to the thresholds.
struct LevelPlacement {
  double level = 0.0;
  bool below_ground = false;
  bool in_window = false;
  bool admissible = false;
};
LevelPlacement place_level(double level, const PsThresholds& t);

struct TrainSpec {
  double lambda = 0.0;
  double mu = 1.0;
  double sign = 1.0;
  int component = 0;  // 0: first, 1: second
};

/// Sum of signed dilated bubbles z_mu^lambda on grid, per component. Throws
/// DomainError for an empty list or a component index other than 0 or 1.
StatePair bubble_train(const GridPtr& grid, const std::vector<TrainSpec>& specs);

}  // namespace nehari
