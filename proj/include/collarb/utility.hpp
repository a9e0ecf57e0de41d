#pragma once

#include <string>
#include <vector>

#include "collarb/rational.hpp"

namespace collarb {

enum class UtilityKind { exponential, truncated_quadratic, logarithmic, power };

std::string to_string(UtilityKind kind);
UtilityKind parse_utility_kind(const std::string& name);

/// Concave, nondecreasing, Inada utility on its domain.
///
///   exponential(γ):          u(x) = -exp(-γx)/γ
///   truncated_quadratic(γ):  u(x) = -γx² for x ≤ 0, 0 for x > 0
///   logarithmic(b):          u(x) = ln(x + b),          domain x > -b
///   power(p, b):             u(x) = (x + b)^p / p,      domain x > -b, 0 < p < 1
///
/// Parameters are kept as exact rationals so that model files round-trip;
/// evaluation is in double precision. Construction rejects parameters that
/// would break concavity or the Inada conditions.
class UtilityFunction {
 public:
  static UtilityFunction exponential(Rational gamma);
  static UtilityFunction truncated_quadratic(Rational gamma);
  static UtilityFunction logarithmic(Rational shift);
  static UtilityFunction power(Rational exponent, Rational shift);

  UtilityKind kind() const { return kind_; }
  /// γ for exponential/truncated_quadratic, 0 otherwise.
  const Rational& gamma() const { return gamma_; }
  /// p for power, 0 otherwise.
  const Rational& exponent() const { return exponent_; }
  /// b for logarithmic/power, 0 otherwise.
  const Rational& shift() const { return shift_; }

  /// Left end of the domain: -b for shifted kinds, -inf otherwise.
  double domain_lower() const;
  bool in_domain(double x) const { return x > domain_lower(); }
  /// u(+inf): 0 for exponential and truncated_quadratic, +inf for the others.
  double sup_value() const;
  /// inf{x : u(x) = u(+inf)}: 0 for truncated_quadratic, +inf otherwise.
  double saturation_point() const;

  friend bool operator==(const UtilityFunction&, const UtilityFunction&) = default;

 private:
  UtilityFunction(UtilityKind kind, Rational gamma, Rational exponent, Rational shift);

  UtilityKind kind_;
  Rational gamma_;
  Rational exponent_;
  Rational shift_;
  double gamma_d_ = 0, exponent_d_ = 0, shift_d_ = 0;

  friend double eval_u(const UtilityFunction&, double);
  friend double eval_du(const UtilityFunction&, double);
  friend double eval_d2u(const UtilityFunction&, double);
  friend double eval_phi(const UtilityFunction&, double);
  friend double eval_dphi(const UtilityFunction&, double);
  friend double eval_d2phi(const UtilityFunction&, double);
};

/// u(x). Throws InputError outside the domain.
double eval_u(const UtilityFunction& u, double x);
/// u'(x). Throws InputError outside the domain.
double eval_du(const UtilityFunction& u, double x);
/// u''(x) (one-sided value at the kink of truncated_quadratic).
double eval_d2u(const UtilityFunction& u, double x);

/// Convex conjugate Φ(y) = sup_x (u(x) - xy), y ≥ 0. May return +inf at y = 0.
double eval_phi(const UtilityFunction& u, double y);
/// Φ'(y) = -argmax_x (u(x) - xy).
double eval_dphi(const UtilityFunction& u, double y);
double eval_d2phi(const UtilityFunction& u, double y);

struct UtilityReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Numeric spot checks of concavity, monotonicity and the Inada limits on a grid.
UtilityReport validate_utility(const UtilityFunction& u);

}  // namespace collarb
