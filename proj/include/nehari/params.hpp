#pragma once

#include <string>
#include <variant>
#include <vector>

namespace nehari {

/// Best constant in the Hardy inequality, (N-2)^2/4.
inline double hardy_constant(int dim) {
  const double m = 0.5 * (dim - 2);
  return m * m;
}

/// Critical Sobolev exponent 2N/(N-2).
inline double critical_exponent(int dim) { return 2.0 * dim / (dim - 2); }

/// Radial coupling weight h(r) multiplying |u|^alpha |v|^beta.
class HProfile {
 public:
  struct Constant {
    double c = 1.0;
    bool operator==(const Constant&) const = default;
  };
  /// h(r) = c r^kappa / (1 + r^(2 kappa)); vanishes at the origin and at infinity.
  struct BumpRadial {
    double c = 1.0;
    double kappa = 1.0;
    bool operator==(const BumpRadial&) const = default;
  };
  /// Tabulated samples, interpolated linearly in log r and held constant
  /// beyond the table.
  struct Custom {
    std::vector<double> r;
    std::vector<double> h;
    bool operator==(const Custom&) const = default;
  };

  HProfile() = default;
  static HProfile constant(double c);
  static HProfile bump(double c, double kappa);
  static HProfile custom(std::vector<double> r, std::vector<double> h);

  double operator()(double r) const;
  /// Supremum of h over (0, inf).
  double sup_norm() const;
  /// h(0) = lim_{r->inf} h(r) = 0, required when alpha + beta = 2*.
  bool vanishes_at_origin_and_infinity() const;
  std::string kind() const;

  const std::variant<Constant, BumpRadial, Custom>& shape() const { return shape_; }

  bool operator==(const HProfile&) const = default;

 private:
  explicit HProfile(std::variant<Constant, BumpRadial, Custom> s) : shape_(std::move(s)) {}
  std::variant<Constant, BumpRadial, Custom> shape_{Constant{}};
};

/// Full description of the coupled system.
///
/// Lambda_N and 2* are derived from N on demand. nu = 0 is admitted as the
/// decoupled reference case.
struct Params {
  int N = 3;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double alpha = 2.0;
  double beta = 2.0;
  double nu = 0.0;
  HProfile h;

  double hardy() const { return hardy_constant(N); }
  double two_star() const { return critical_exponent(N); }
  bool is_critical() const;

  /// Throws DomainError when any hypothesis on the parameters fails.
  void validate() const;

  /// Same system with the roles of the two components exchanged.
  Params swapped() const;

  bool operator==(const Params&) const = default;
};

}  // namespace nehari
