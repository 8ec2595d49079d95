#include "nehari/params.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nehari/errors.hpp"

namespace nehari {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

// Relative size of the end samples of a Custom table below which the table is
// treated as vanishing at 0 and infinity.
constexpr double kCustomVanishTol = 1e-3;

}  // namespace

HProfile HProfile::constant(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("h: constant profile needs c > 0");
  return HProfile(Constant{c});
}

HProfile HProfile::bump(double c, double kappa) {
  if (!(c > 0.0) || !(kappa > 0.0) || !std::isfinite(c) || !std::isfinite(kappa))
    throw DomainError("h: bump profile needs c > 0 and kappa > 0");
  return HProfile(BumpRadial{c, kappa});
}

HProfile HProfile::custom(std::vector<double> r, std::vector<double> h) {
  if (r.size() != h.size() || r.size() < 2)
    throw DomainError("h: custom table needs at least two (r, h) samples");
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(r[i] > 0.0) || !std::isfinite(r[i])) throw DomainError("h: custom radii must be positive");
    if (i > 0 && !(r[i] > r[i - 1])) throw DomainError("h: custom radii must increase");
    if (!(h[i] > 0.0) || !std::isfinite(h[i]))
      throw DomainError("h: custom samples must be positive and bounded");
  }
  return HProfile(Custom{std::move(r), std::move(h)});
}

double HProfile::operator()(double r) const {
  return std::visit(
      overloaded{
          [](const Constant& k) { return k.c; },
          [r](const BumpRadial& b) {
            // c / (r^-kappa + r^kappa), stable for extreme r.
            const double x = b.kappa * std::log(r);
            if (std::abs(x) > 700.0) return 0.0;
            return b.c / (2.0 * std::cosh(x));
          },
          [r](const Custom& t) {
            if (r <= t.r.front()) return t.h.front();
            if (r >= t.r.back()) return t.h.back();
            const auto it = std::upper_bound(t.r.begin(), t.r.end(), r);
            const std::size_t j = static_cast<std::size_t>(it - t.r.begin());
            const double s0 = std::log(t.r[j - 1]);
            const double s1 = std::log(t.r[j]);
            const double w = (std::log(r) - s0) / (s1 - s0);
            return (1.0 - w) * t.h[j - 1] + w * t.h[j];
          },
      },
      shape_);
}

double HProfile::sup_norm() const {
  return std::visit(overloaded{
                        [](const Constant& k) { return k.c; },
                        [](const BumpRadial& b) { return 0.5 * b.c; },
                        [](const Custom& t) { return *std::max_element(t.h.begin(), t.h.end()); },
                    },
                    shape_);
}

bool HProfile::vanishes_at_origin_and_infinity() const {
  return std::visit(overloaded{
                        [](const Constant&) { return false; },
                        [](const BumpRadial&) { return true; },
                        [](const Custom& t) {
                          const double m = *std::max_element(t.h.begin(), t.h.end());
                          return t.h.front() <= kCustomVanishTol * m &&
                                 t.h.back() <= kCustomVanishTol * m;
                        },
                    },
                    shape_);
}

std::string HProfile::kind() const {
  return std::visit(overloaded{
                        [](const Constant&) { return std::string("constant"); },
                        [](const BumpRadial&) { return std::string("bump"); },
                        [](const Custom&) { return std::string("custom"); },
                    },
                    shape_);
}

bool Params::is_critical() const { return std::abs(alpha + beta - two_star()) <= 1e-12 * two_star(); }

void Params::validate() const {
  std::ostringstream why;
  if (N < 3) why << "N must be >= 3; ";
  if (N >= 3) {
    const double lam = hardy();
    if (!(lambda1 > 0.0 && lambda1 < lam)) why << "lambda1 must lie in (0, Lambda_N); ";
    if (!(lambda2 > 0.0 && lambda2 < lam)) why << "lambda2 must lie in (0, Lambda_N); ";
    if (!(alpha > 1.0) || !(beta > 1.0)) why << "alpha and beta must exceed 1; ";
    if (alpha + beta > two_star() * (1.0 + 1e-12)) why << "alpha + beta must not exceed 2*; ";
    if (is_critical() && !h.vanishes_at_origin_and_infinity())
      why << "critical coupling needs h vanishing at 0 and infinity; ";
  }
  if (!(nu >= 0.0) || !std::isfinite(nu)) why << "nu must be nonnegative; ";
  const std::string msg = why.str();
  if (!msg.empty()) throw DomainError("invalid parameters: " + msg.substr(0, msg.size() - 2));
}

Params Params::swapped() const {
  Params q = *this;
  std::swap(q.lambda1, q.lambda2);
  std::swap(q.alpha, q.beta);
  return q;
}

}  // namespace nehari
