#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "../oracles.hpp"
#include "nehari/analytic.hpp"
#include "nehari/errors.hpp"
#include "nehari/solvers.hpp"

using namespace nehari;
using Catch::Approx;

namespace {

Params mp_params(double nu) {
  Params p;
  p.N = 4;
  p.lambda1 = 0.2;
  p.lambda2 = 0.4;
  p.alpha = 2.5;
  p.beta = 1.5;
  p.nu = nu;
  p.h = HProfile::bump(1.0, 1.0);
  return p;
}

}  // namespace

TEST_CASE("separability alternatives") {
  Params p = mp_params(0.1);
  CHECK(separability_check(p) == Separability::AlternativeI);
  Params q = p;
  q.lambda1 = 0.4;
  q.lambda2 = 0.2;
  q.alpha = 1.5;
  q.beta = 2.5;
  CHECK(separability_check(q) == Separability::AlternativeII);
  Params r = p;
  r.lambda1 = 0.05;
  r.lambda2 = 0.9;
  CHECK(separability_check(r) == Separability::None);
  Params s = p;
  s.alpha = 1.5;
  s.beta = 2.5;
  CHECK(separability_check(s) == Separability::None);
}

TEST_CASE("path bound g") {
  const double s1 = 3.0, s2 = 1.7;
  CHECK(path_bound(0.0, s1, s2, 4) == Approx(s1 / 4));
  CHECK(path_bound(1.0, s1, s2, 4) == Approx(s2 / 4));
  // N = 4: maximum (s1 + s2) / 4 at t = 1/2
  CHECK(path_bound(0.5, s1, s2, 4) == Approx((s1 + s2) / 4));
  for (double t = 0.01; t < 1.0; t += 0.01) CHECK(path_bound(t, s1, s2, 4) <= (s1 + s2) / 4 * (1 + 1e-14));
}

TEST_CASE("mountain-pass epsilon is admissible") {
  const Params p = mp_params(0.1);
  const double e = mountain_pass_epsilon(p);
  const double a = std::pow(oracle::s_lambda(4, 0.2), 2.0), b = std::pow(oracle::s_lambda(4, 0.4), 2.0);
  REQUIRE(e > 0.0);
  CHECK(0.5 * (1 - e) * std::pow(0.5 * (std::sqrt(a) + std::sqrt(b)), 2.0) > 0.5 * b);
  CHECK(0.5 * b > (1 + e) / 4 * a);
}

TEST_CASE("config validation") {
  DescentConfig d;
  d.step0 = 0.0;
  CHECK_THROWS_AS(d.validate(), DomainError);
  MountainPassConfig m;
  m.path_points = 5;
  CHECK_THROWS_AS(m.validate(), DomainError);
}

TEST_CASE("decoupled descent recovers the semi-trivial level") {
  Params p;
  p.N = 3;
  p.lambda1 = 0.1;
  p.lambda2 = 0.15;
  p.alpha = p.beta = 2.2;
  p.nu = 0.0;
  const auto g = build_grid(3, 1e-6, 1e6, 1024);
  StatePair init = semitrivial_pair(SemiTrivial::First, p, g);
  init.set_u(init.u() + 0.2 * log_bump(g, 0.5, 2.0));
  DescentConfig cfg;
  // dilations are a flat direction at nu = 0, so the tail of the descent is slow
  cfg.grad_tol = 1e-4;
  const SolveResult r = minimize_on_nehari(init, p, cfg);
  REQUIRE(r.converged);
  CHECK(r.grad_norm <= cfg.grad_tol);
  CHECK(r.classification == Outcome::SemiTrivialLimit);
  CHECK(r.energy == Approx(oracle::level(3, 0.1)).epsilon(0.01));
  for (std::size_t k = 1; k < r.history.size(); ++k)
    CHECK(r.history[k].energy <= r.history[k - 1].energy + 1e-12 * std::abs(r.history[k - 1].energy));
  CHECK(std::abs(j_nu(r.state.state, p).nehari_residual) <= 1e-8 * norm_D_sq(r.state.state, p));
}

TEST_CASE("positive-part descent keeps components nonnegative") {
  Params p;
  p.N = 3;
  p.lambda1 = 0.075;
  p.lambda2 = 0.175;
  p.alpha = p.beta = 2.2;
  p.nu = 50.0;
  const auto g = build_grid(3, 1e-6, 1e6, 1024);
  DescentConfig cfg;
  cfg.positive_part = true;
  const StatePair init(log_bump(g, 0.0, 2.0) - 0.3 * log_bump(g, 1.0, 1.0), log_bump(g, -0.5, 2.0));
  const SolveResult r = minimize_on_nehari(init, p, cfg);
  REQUIRE(r.converged);
  CHECK(r.classification == Outcome::GroundCandidate);
  for (std::size_t i = 0; i < g->size(); ++i) {
    CHECK(r.state.state.u()[i] >= 0.0);
    CHECK(r.state.state.v()[i] >= 0.0);
  }
}

TEST_CASE("descent reports failure instead of throwing") {
  Params p;
  p.N = 3;
  p.lambda1 = 0.1;
  p.lambda2 = 0.1;
  const auto g = build_grid(3, 1e-3, 1e3, 100);
  const SolveResult r = minimize_on_nehari(StatePair::zero(g), p, DescentConfig{});
  CHECK_FALSE(r.converged);
  CHECK(r.classification == Outcome::Diverged);
  CHECK_FALSE(r.message.empty());
}

TEST_CASE("ground state experiment at nu = 0 picks the lower semi-trivial level") {
  Params p;
  p.N = 3;
  p.lambda1 = 0.05;
  p.lambda2 = 0.125;
  p.alpha = p.beta = 2.2;
  p.nu = 0.0;
  DescentConfig cfg;
  cfg.positive_part = true;
  cfg.grad_tol = 1e-4;
  const GroundStateReport r = ground_state_experiment(p, cfg, 1, build_grid(3, 1e-6, 1e6, 1024), 3);
  REQUIRE(r.winner >= 0);
  CHECK(r.winner_kind == "second");
  CHECK(r.runs[static_cast<std::size_t>(r.winner)].result.energy == Approx(oracle::level(3, 0.125)).epsilon(0.01));
  CHECK(r.runs.size() == 6);  // five fixed starts and one random
}

TEST_CASE("mountain pass") {
  const auto g = build_grid(4, 1e-6, 1e6, 1024);
  SECTION("geometry violation for strong coupling") {
    CHECK_THROWS_AS(mountain_pass(mp_params(1.0), MountainPassConfig{}, g), GeometryViolation);
  }
  SECTION("no separability") {
    Params p = mp_params(0.1);
    p.lambda1 = 0.05;
    p.lambda2 = 0.9;
    CHECK_THROWS_AS(mountain_pass(p, MountainPassConfig{}, g), DomainError);
  }
  SECTION("bound state inside the window") {
    const MountainPassResult r = mountain_pass(mp_params(0.1), MountainPassConfig{}, g);
    REQUIRE(r.solve.converged);
    CHECK(r.sandwich);
    CHECK(r.solve.classification == Outcome::BoundCandidate);
    const auto sh = component_share(r.solve.state.state, mp_params(0.1));
    CHECK(sh.first > 1e-2);
    CHECK(sh.second > 1e-2);
    // positive away from the truncation
    const auto& s = r.solve.state.state;
    for (std::size_t i = 0; i < g->size(); ++i) {
      const double rad = g->nodes()[i];
      if (rad > 1e-5 && rad < 1e5) {
        CHECK(s.u()[i] > 0.0);
        CHECK(s.v()[i] > 0.0);
      }
    }
  }
  SECTION("peak rises as nu decreases") {
    const auto sweep = mountain_pass_sweep(mp_params(0.0), MountainPassConfig{}, g, {1e-3, 1e-1, 1e-2});
    REQUIRE(sweep.entries.size() == 1);  // stops at the first success
    CHECK(sweep.nu_accepted == 0.1);
    const double eps = mountain_pass_epsilon(mp_params(0.0));
    double prev = 0.0;
    for (double nu : {1e-1, 1e-2, 1e-3}) {
      const double level = mountain_pass(mp_params(nu), MountainPassConfig{}, g).solve.energy;
      CHECK(level > prev);
      CHECK(level >= (1 + eps) / 4 * std::pow(oracle::s_lambda(4, 0.2), 2.0));
      prev = level;
    }
  }
}
