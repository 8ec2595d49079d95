#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "nehari/errors.hpp"
#include "nehari/grid.hpp"
#include "nehari/params.hpp"

using namespace nehari;
using Catch::Approx;

namespace {

double unit_sphere(int N) { return 2.0 * std::pow(std::numbers::pi, 0.5 * N) / std::tgamma(0.5 * N); }

// int_0^inf r^k exp(-2 r^2) dr
double gauss_moment(double k) { return std::tgamma(0.5 * (k + 1)) / (2.0 * std::pow(2.0, 0.5 * (k + 1))); }

}  // namespace

TEST_CASE("grid construction rejects bad input") {
  CHECK_THROWS_AS(build_grid(2, 1e-3, 1e3, 100), DomainError);
  CHECK_THROWS_AS(build_grid(3, 0.0, 1e3, 100), DomainError);
  CHECK_THROWS_AS(build_grid(3, 10.0, 1.0, 100), DomainError);
  CHECK_THROWS_AS(build_grid(3, 1e-3, 1e3, 4), DomainError);
}

TEST_CASE("nodes are log-uniform and hit both ends") {
  const auto g = build_grid(4, 1e-3, 1e5, 257);
  CHECK(g->r_min() == 1e-3);
  CHECK(g->r_max() == 1e5);
  const auto r = g->nodes();
  for (std::size_t i = 1; i < r.size(); ++i) CHECK(std::log(r[i] / r[i - 1]) == Approx(g->log_step()).epsilon(1e-12));
}

TEST_CASE("constants integrate to the shell volume") {
  for (int N : {3, 4, 5, 7}) {
    for (std::size_t n : {17u, 100u, 1000u}) {
      const auto g = build_grid(N, 0.01, 50.0, n);
      const double exact = unit_sphere(N) / N * (std::pow(50.0, N) - std::pow(0.01, N));
      CHECK(integrate(RadialField::sample(g, [](double) { return 1.0; })) == Approx(exact).epsilon(1e-12));
    }
  }
}

TEST_CASE("gaussian moments") {
  for (int N : {3, 4, 5}) {
    const auto g = build_grid(N, 1e-8, 20.0, 4000);
    const auto gauss = RadialField::sample(g, [](double r) { return std::exp(-r * r); });
    CHECK(integrate(RadialField::sample(g, [](double r) { return std::exp(-2 * r * r); })) ==
          Approx(std::pow(std::numbers::pi / 2, 0.5 * N)).epsilon(1e-9));
    CHECK(grad_norm_sq(gauss) == Approx(unit_sphere(N) * 4.0 * gauss_moment(N + 1)).epsilon(1e-7));
    CHECK(hardy_term(gauss) == Approx(unit_sphere(N) * gauss_moment(N - 3)).epsilon(1e-6));
  }
}

TEST_CASE("gradient form converges at fourth order") {
  const int N = 3;
  const double exact = unit_sphere(N) * 4.0 * gauss_moment(N + 1);
  double prev = 0.0;
  for (std::size_t n : {200u, 400u, 800u}) {
    const auto g = build_grid(N, 1e-6, 12.0, n);
    const double err = std::abs(grad_norm_sq(RadialField::sample(g, [](double r) { return std::exp(-r * r); })) - exact);
    if (prev > 0.0) CHECK(prev / err > 12.0);
    prev = err;
  }
}

TEST_CASE("banded form matches the bilinear form") {
  const auto g = build_grid(3, 1e-3, 1e3, 300);
  const double lambda = 0.1;
  const BandedForm A = BandedForm::assemble(*g, lambda);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  RadialField x(g), y(g);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = nd(rng);
    y[i] = nd(rng);
  }
  const auto Ax = A.apply(x.values());
  double yAx = 0.0;
  for (std::size_t i = 0; i < Ax.size(); ++i) yAx += y[i] * Ax[i];
  CHECK(yAx == Approx(inner_lambda(y, x, lambda)).epsilon(1e-11));
  CHECK(inner_lambda(x, y, lambda) == Approx(inner_lambda(y, x, lambda)).epsilon(1e-13));
  CHECK(inner_lambda(x, x, lambda) == Approx(grad_norm_sq(x) - lambda * hardy_term(x)).epsilon(1e-12));
}

TEST_CASE("Riesz solve inverts the form on interior nodes") {
  const auto g = build_grid(4, 1e-3, 1e3, 200);
  const double lambda = 0.5;
  std::mt19937_64 rng(8);
  std::normal_distribution<double> nd;
  std::vector<double> load(g->size());
  for (auto& l : load) l = nd(rng);
  const RadialField w = riesz_solve_load(g, load, lambda);
  CHECK(w[0] == 0.0);
  CHECK(w[w.size() - 1] == 0.0);
  const auto Aw = BandedForm::assemble(*g, lambda).apply(w.values());
  for (std::size_t i = 1; i + 1 < load.size(); ++i) CHECK(Aw[i] == Approx(load[i]).epsilon(1e-8).margin(1e-10));
}

TEST_CASE("Riesz solve reports an indefinite form") {
  const auto g = build_grid(3, 1e-3, 1e3, 200);
  std::vector<double> load(g->size(), 1.0);
  CHECK_THROWS_AS(riesz_solve_load(g, load, 50.0), SolverFailure);
}

TEST_CASE("fields on different grids do not mix") {
  const auto a = build_grid(3, 1e-3, 1e3, 100);
  const auto b = build_grid(3, 1e-3, 1e3, 100);
  RadialField x(a), y(b);
  CHECK_THROWS_AS(x += y, GridMismatchError);
  CHECK_THROWS_AS(RadialField(a, std::vector<double>(5)), GridMismatchError);
}

TEST_CASE("params validation") {
  Params p;
  p.N = 3;
  p.lambda1 = 0.1;
  p.lambda2 = 0.2;
  CHECK_NOTHROW(p.validate());
  Params q = p;
  q.lambda1 = 0.25;
  CHECK_THROWS_AS(q.validate(), DomainError);
  q = p;
  q.nu = -1.0;
  CHECK_THROWS_AS(q.validate(), DomainError);
  q = p;
  q.alpha = q.beta = 3.0;  // critical with constant h
  CHECK_THROWS_AS(q.validate(), DomainError);
  q.h = HProfile::bump(1.0, 1.0);
  CHECK_NOTHROW(q.validate());
  q.alpha = 4.0;
  CHECK_THROWS_AS(q.validate(), DomainError);
  CHECK(p.swapped().lambda1 == p.lambda2);
}

TEST_CASE("h profiles") {
  const HProfile bump = HProfile::bump(2.0, 1.0);
  CHECK(bump(1.0) == Approx(1.0));
  CHECK(bump.sup_norm() == Approx(1.0));
  CHECK(bump.vanishes_at_origin_and_infinity());
  CHECK_FALSE(HProfile::constant(1.0).vanishes_at_origin_and_infinity());
  const HProfile tab = HProfile::custom({0.1, 1.0, 10.0}, {1e-4, 1.0, 1e-4});
  CHECK(tab(1.0) == Approx(1.0));
  CHECK(tab(std::sqrt(10.0)) == Approx(0.5).epsilon(1e-3));
  CHECK_THROWS_AS(HProfile::custom({0.1, 1.0, 10.0}, {0.0, 1.0, 0.0}), DomainError);
  CHECK(tab.vanishes_at_origin_and_infinity());
}
