#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nehari/nehari.hpp"

namespace nehari {

struct DescentConfig {
  int max_iters = 3000;
  double step0 = 1.0;
  double armijo_c = 1e-4;
  double grad_tol = 1e-7;  // absolute, on the dual gradient norm
  bool positive_part = false;
  int max_backtracks = 50;

  void validate() const;
};

struct MountainPassConfig {
  int path_points = 17;
  int max_sweeps = 400;
  int descent_per_sweep = 3;
  double level_tol = 1e-9;  // relative change of the path peak between sweeps
  double grad_tol = 1e-5;   // dual gradient norm at the climbing point
  double climb_step = 0.5;

  void validate() const;
};

enum class Outcome { GroundCandidate, BoundCandidate, SemiTrivialLimit, Diverged };
std::string to_string(Outcome o);

struct HistoryEntry {
  int iteration = 0;
  double energy = 0.0;
  double grad_norm = 0.0;
};

struct SolveResult {
  NehariPoint state;
  double energy = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  std::vector<HistoryEntry> history;
  Outcome classification = Outcome::Diverged;
  bool converged = false;
  std::string message;
};

/// D-norms of the two components relative to the pair norm.
struct ComponentShare {
  double first = 0.0;
  double second = 0.0;
};
ComponentShare component_share(const StatePair& s, const Params& p);

/// Sobolev-gradient descent of the restricted energy with Armijo
/// backtracking; each trial point is projected back onto the manifold (after
/// nodal clipping to nonnegative values when positive_part is set).
SolveResult minimize_on_nehari(const StatePair& init, const Params& p, const DescentConfig& cfg);

enum class Separability { AlternativeI, AlternativeII, None };
std::string to_string(Separability s);
Separability separability_check(const Params& p);

/// Path levels of the straight path between the semi-trivial points, with the
/// upper bound g(t) built from the discrete 2*-masses of the end points.
struct PathProfile {
  std::vector<double> t;
  std::vector<double> level;  // J+ of the projected path point
  std::vector<double> bound;  // g(t)
};

struct MountainPassResult {
  SolveResult solve;
  PathProfile initial_path;
  std::vector<double> final_levels;
  double level_first = 0.0;   // discrete J of the first semi-trivial point
  double level_second = 0.0;  // discrete J of the second one
  double lower = 0.0;         // larger semi-trivial level (analytic)
  double upper = 0.0;         // (S^{N/2}(l1) + S^{N/2}(l2)) / N
  bool sandwich = false;
};

/// Mountain-pass search on the positive-part manifold between (z1, 0) and
/// (0, z2) by a climbing string. Throws GeometryViolation when the initial
/// path does not rise above the larger semi-trivial level.
MountainPassResult mountain_pass(const Params& p, const MountainPassConfig& cfg, const GridPtr& grid);

struct SweepEntry {
  double nu = 0.0;
  bool geometry = false;
  bool sandwich = false;
  double level = 0.0;
  std::string note;
};

struct MountainPassSweep {
  std::vector<SweepEntry> entries;
  std::optional<MountainPassResult> accepted;
  double nu_accepted = 0.0;  // largest nu in the sweep with geometry and sandwich
};

/// Runs mountain_pass for each nu in descending order until geometry and
/// sandwich hold.
MountainPassSweep mountain_pass_sweep(Params p, const MountainPassConfig& cfg, const GridPtr& grid,
                                      std::vector<double> nus);

/// epsilon with (2/N)(1-e)((S1+S2)/2)^{N/2} > (2/N) S_lo^{N/2} > (1+e)/N S_hi^{N/2},
/// taken as half the largest admissible value (0 when none exists).
double mountain_pass_epsilon(const Params& p);

/// g(t) for 2*-masses sigma1, sigma2.
double path_bound(double t, double sigma1, double sigma2, int dim);

struct StartOutcome {
  std::string label;
  SolveResult result;
  ComponentShare share;
};

struct GroundStateReport {
  std::vector<StartOutcome> runs;
  int winner = -1;  // index into runs, -1 when nothing converged
  std::string winner_kind;  // "first", "second", "coupled" or "none"
  double level_first = 0.0;   // (1/N) S(l1)^{N/2}
  double level_second = 0.0;  // (1/N) S(l2)^{N/2}
  Outcome classification = Outcome::Diverged;
};

/// Multi-start descent: perturbed semi-trivial starts, a balanced start and
/// n_random random smooth pairs. Runs are independent and executed in
/// parallel; the winner is the lowest converged energy (ties by start index).
GroundStateReport ground_state_experiment(const Params& p, const DescentConfig& cfg, int n_random,
                                          const GridPtr& grid, std::uint64_t seed = 1);

}  // namespace nehari
