#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "../oracles.hpp"
#include "nehari/analytic.hpp"
#include "nehari/errors.hpp"

using namespace nehari;
using Catch::Approx;

TEST_CASE("singular exponent") {
  // a solves a^2 - (N-2) a + lambda = 0 on the small branch
  for (int N : {3, 4, 5, 6}) {
    for (double f : {0.01, 0.3, 0.99}) {
      const double lam = f * oracle::hardy(N);
      const double a = a_lambda(N, lam);
      CHECK(a * a - (N - 2) * a + lam == Approx(0.0).margin(1e-13));
      CHECK(a > 0.0);
      CHECK(a < 0.5 * (N - 2));
    }
    CHECK_THROWS_AS(a_lambda(N, 0.0), DomainError);
    CHECK_THROWS_AS(a_lambda(N, oracle::hardy(N)), DomainError);
  }
}

TEST_CASE("bubble amplitude") {
  // At N = 6 the exponent (N-2)/4 is 1, so amplitude and constant coincide.
  CHECK(terracini_amplitude(6, 1.0) == Approx(terracini_constant_literal(6, 1.0)));
  // lambda = 0 gives the Aubin-Talenti amplitude (N(N-2))^{(N-2)/4}.
  for (int N : {3, 4, 5}) CHECK(terracini_amplitude(N, 0.0) == Approx(std::pow(N * (N - 2.0), 0.25 * (N - 2))));
  // N = 4, lambda = 3/4: A = 4 (2 - 1)^2 / 2 = 2, amplitude sqrt 2; value at r = 1 is sqrt2 / 2.
  CHECK(terracini_constant_literal(4, 0.75) == Approx(2.0));
  CHECK(terracini_bubble(BubbleSpec{4, 0.75, 1.0}, 1.0) == Approx(std::sqrt(2.0) / 2.0));
}

TEST_CASE("bubble scaling") {
  const BubbleSpec one{3, 0.1, 1.0};
  const BubbleSpec dilated{3, 0.1, 1e-3};
  for (double r : {1e-5, 1e-3, 0.2, 5.0}) {
    CHECK(terracini_bubble(dilated, r) == Approx(std::pow(1e-3, -0.5) * terracini_bubble(one, r / 1e-3)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(terracini_bubble(BubbleSpec{3, 0.3, 1.0}, 1.0), DomainError);
  CHECK_THROWS_AS(terracini_bubble(BubbleSpec{3, 0.1, -1.0}, 1.0), DomainError);
}

TEST_CASE("bubble residual vanishes under refinement") {
  for (int N : {3, 4, 5}) {
    for (double f : {0.1, 0.5, 0.9}) {
      const double lam = f * oracle::hardy(N);
      double prev_res = 0.0, prev_amp = 0.0;
      for (std::size_t n : {1001u, 2001u, 4001u}) {
        const auto g = build_grid(N, 1e-4, 1e4, n);
        const double res = bubble_residual(sample_bubble(g, BubbleSpec{N, lam, 1.0}), lam, 1e-2, 1e2);
        const double amp = std::abs(residual_minimizing_amplitude(g, lam, 1e-2, 1e2) / terracini_amplitude(N, lam) - 1.0);
        if (prev_res > 0.0) {
          CHECK(prev_res / res > 3.0);
          CHECK(prev_amp / amp > 3.0);
        }
        prev_res = res;
        prev_amp = amp;
      }
      CHECK(prev_amp < 3e-3);
    }
  }
}

TEST_CASE("Sobolev constant matches the classical value") {
  for (int N = 3; N <= 7; ++N) CHECK(sobolev_constant(N) == Approx(oracle::sobolev(N)).epsilon(1e-10));
}

TEST_CASE("S(lambda) law and semi-trivial level") {
  for (int N : {3, 4, 5}) {
    CHECK(s_lambda(N, 0.0) == Approx(oracle::sobolev(N)).epsilon(1e-10));
    for (double f : {0.2, 0.7}) {
      const double lam = f * oracle::hardy(N);
      CHECK(s_lambda(N, lam) == Approx(oracle::s_lambda(N, lam)).epsilon(1e-10));
      CHECK(semi_trivial_energy(N, lam) == Approx(oracle::level(N, lam)).epsilon(1e-10));
    }
    CHECK(s_lambda(N, 0.2 * oracle::hardy(N)) > s_lambda(N, 0.4 * oracle::hardy(N)));
  }
}

TEST_CASE("bubble Rayleigh quotient attains S(lambda)") {
  const int N = 4;
  const double lam = 0.5;
  const auto g = bubble_window_grid(N, lam, 2048);
  const RadialField z = sample_bubble(g, BubbleSpec{N, lam, 1.0});
  CHECK(rayleigh_quotient(z, lam) == Approx(oracle::s_lambda(N, lam)).epsilon(1e-6));
  RadialField bent = z;
  bent.axpy(0.05, RadialField::sample(g, [](double r) { return std::exp(-std::log(r) * std::log(r)); }));
  CHECK(rayleigh_quotient(bent, lam) > rayleigh_quotient(z, lam));
}

TEST_CASE("algebraic infimum against a brute-force scan") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int k = 0; k < 40; ++k) {
    const int N = 3 + static_cast<int>(U(rng) * 3.0);
    const double A = 0.5 + 20.0 * U(rng);
    const double B = 0.2 + 5.0 * U(rng);
    const double gamma = 2.05 + U(rng) * (2.0 * N / (N - 2.0) - 2.1);
    const double nu = std::pow(10.0, -3.0 + 3.0 * U(rng));
    const SigmaInfimum s = sigma_infimum(A, B, gamma, N, nu);
    REQUIRE(s.has_root);
    CHECK(s.value == Approx(oracle::sigma_scan(A, B, gamma, N, nu)).epsilon(1e-6));
  }
}

TEST_CASE("algebraic infimum limits") {
  // nu = 0: boundary point A^{N/2}
  CHECK(sigma_infimum(3.0, 1.0, 2.5, 4, 0.0).value == Approx(9.0).epsilon(1e-12));
  // gamma = 2 with B = A: (1 - nu)^{N/2} A^{N/2}
  CHECK(sigma_infimum(2.0, 2.0, 2.0, 3, 0.19).value == Approx(std::pow(0.81 * 2.0, 1.5)).epsilon(1e-10));
  // gamma = 2 with B nu >= A: every sigma qualifies
  const SigmaInfimum empty = sigma_infimum(1.0, 1.0, 2.0, 3, 1.5);
  CHECK_FALSE(empty.has_root);
  CHECK(empty.value == 0.0);
  // infimum decreases in nu
  CHECK(sigma_infimum(5.0, 1.0, 3.0, 3, 0.1).value > sigma_infimum(5.0, 1.0, 3.0, 3, 0.2).value);
  CHECK_THROWS_AS(sigma_infimum(-1.0, 1.0, 3.0, 3, 0.1), DomainError);
}

TEST_CASE("nu threshold reproduces the requested fraction") {
  for (double eps : {0.01, 0.1, 0.5}) {
    const double A = 4.0, B = 1.5, gamma = 2.6;
    const int N = 4;
    const double nu = sigma_nu_threshold(A, B, gamma, N, eps);
    CHECK(sigma_infimum(A, B, gamma, N, nu).value == Approx((1.0 - eps) * std::pow(A, 0.5 * N)).epsilon(1e-8));
  }
}
