#include "collarb/utility.hpp"

#include <cmath>
#include <limits>

#include "collarb/errors.hpp"

namespace collarb {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::string to_string(UtilityKind kind) {
  switch (kind) {
    case UtilityKind::exponential: return "exponential";
    case UtilityKind::truncated_quadratic: return "truncated_quadratic";
    case UtilityKind::logarithmic: return "logarithmic";
    case UtilityKind::power: return "power";
  }
  return "?";
}

UtilityKind parse_utility_kind(const std::string& name) {
  if (name == "exponential") return UtilityKind::exponential;
  if (name == "truncated_quadratic") return UtilityKind::truncated_quadratic;
  if (name == "logarithmic") return UtilityKind::logarithmic;
  if (name == "power") return UtilityKind::power;
  throw InputError("unknown utility kind '" + name + "'");
}

UtilityFunction::UtilityFunction(UtilityKind kind, Rational gamma, Rational exponent, Rational shift)
    : kind_(kind),
      gamma_(std::move(gamma)),
      exponent_(std::move(exponent)),
      shift_(std::move(shift)),
      gamma_d_(gamma_.get_d()),
      exponent_d_(exponent_.get_d()),
      shift_d_(shift_.get_d()) {}

UtilityFunction UtilityFunction::exponential(Rational gamma) {
  if (gamma <= 0) throw InputError("exponential utility needs gamma > 0");
  return UtilityFunction(UtilityKind::exponential, std::move(gamma), 0, 0);
}

UtilityFunction UtilityFunction::truncated_quadratic(Rational gamma) {
  if (gamma <= 0) throw InputError("truncated_quadratic utility needs gamma > 0");
  return UtilityFunction(UtilityKind::truncated_quadratic, std::move(gamma), 0, 0);
}

UtilityFunction UtilityFunction::logarithmic(Rational shift) {
  return UtilityFunction(UtilityKind::logarithmic, 0, 0, std::move(shift));
}

UtilityFunction UtilityFunction::power(Rational exponent, Rational shift) {
  if (exponent <= 0 || exponent >= 1) {
    throw InputError("power utility needs exponent in (0,1); got " + collarb::to_string(exponent));
  }
  return UtilityFunction(UtilityKind::power, 0, std::move(exponent), std::move(shift));
}

double UtilityFunction::domain_lower() const {
  switch (kind_) {
    case UtilityKind::logarithmic:
    case UtilityKind::power: return -shift_d_;
    default: return -kInf;
  }
}

double UtilityFunction::sup_value() const {
  switch (kind_) {
    case UtilityKind::exponential:
    case UtilityKind::truncated_quadratic: return 0.0;
    default: return kInf;
  }
}

double UtilityFunction::saturation_point() const {
  return kind_ == UtilityKind::truncated_quadratic ? 0.0 : kInf;
}

namespace {
void require_domain(const UtilityFunction& u, double x) {
  if (!u.in_domain(x)) {
    throw InputError("utility evaluated outside its domain at x = " + std::to_string(x));
  }
}
void require_dual_domain(double y) {
  if (!(y >= 0)) throw InputError("conjugate evaluated at negative argument y = " + std::to_string(y));
}
}  // namespace

double eval_u(const UtilityFunction& u, double x) {
  require_domain(u, x);
  switch (u.kind_) {
    case UtilityKind::exponential: return -std::exp(-u.gamma_d_ * x) / u.gamma_d_;
    case UtilityKind::truncated_quadratic: return x <= 0 ? -u.gamma_d_ * x * x : 0.0;
    case UtilityKind::logarithmic: return std::log(x + u.shift_d_);
    case UtilityKind::power: return std::pow(x + u.shift_d_, u.exponent_d_) / u.exponent_d_;
  }
  return 0;
}

double eval_du(const UtilityFunction& u, double x) {
  require_domain(u, x);
  switch (u.kind_) {
    case UtilityKind::exponential: return std::exp(-u.gamma_d_ * x);
    case UtilityKind::truncated_quadratic: return x < 0 ? -2 * u.gamma_d_ * x : 0.0;
    case UtilityKind::logarithmic: return 1.0 / (x + u.shift_d_);
    case UtilityKind::power: return std::pow(x + u.shift_d_, u.exponent_d_ - 1);
  }
  return 0;
}

double eval_d2u(const UtilityFunction& u, double x) {
  require_domain(u, x);
  switch (u.kind_) {
    case UtilityKind::exponential: return -u.gamma_d_ * std::exp(-u.gamma_d_ * x);
    case UtilityKind::truncated_quadratic: return x < 0 ? -2 * u.gamma_d_ : 0.0;
    case UtilityKind::logarithmic: {
      const double w = x + u.shift_d_;
      return -1.0 / (w * w);
    }
    case UtilityKind::power:
      return (u.exponent_d_ - 1) * std::pow(x + u.shift_d_, u.exponent_d_ - 2);
  }
  return 0;
}

double eval_phi(const UtilityFunction& u, double y) {
  require_dual_domain(y);
  switch (u.kind_) {
    case UtilityKind::exponential:
      return y == 0 ? 0.0 : (y / u.gamma_d_) * (std::log(y) - 1);
    case UtilityKind::truncated_quadratic: return y * y / (4 * u.gamma_d_);
    case UtilityKind::logarithmic:
      return y == 0 ? kInf : -std::log(y) - 1 + u.shift_d_ * y;
    case UtilityKind::power: {
      if (y == 0) return kInf;
      const double p = u.exponent_d_;
      return ((1 - p) / p) * std::pow(y, -p / (1 - p)) + u.shift_d_ * y;
    }
  }
  return 0;
}

double eval_dphi(const UtilityFunction& u, double y) {
  require_dual_domain(y);
  switch (u.kind_) {
    case UtilityKind::exponential: return y == 0 ? -kInf : std::log(y) / u.gamma_d_;
    case UtilityKind::truncated_quadratic: return y / (2 * u.gamma_d_);
    case UtilityKind::logarithmic: return y == 0 ? -kInf : -1.0 / y + u.shift_d_;
    case UtilityKind::power: {
      if (y == 0) return -kInf;
      const double p = u.exponent_d_;
      return -std::pow(y, -1 / (1 - p)) + u.shift_d_;
    }
  }
  return 0;
}

double eval_d2phi(const UtilityFunction& u, double y) {
  require_dual_domain(y);
  switch (u.kind_) {
    case UtilityKind::exponential: return y == 0 ? kInf : 1.0 / (u.gamma_d_ * y);
    case UtilityKind::truncated_quadratic: return 1.0 / (2 * u.gamma_d_);
    case UtilityKind::logarithmic: return y == 0 ? kInf : 1.0 / (y * y);
    case UtilityKind::power: {
      if (y == 0) return kInf;
      const double p = u.exponent_d_;
      return (1 / (1 - p)) * std::pow(y, -1 / (1 - p) - 1);
    }
  }
  return 0;
}

UtilityReport validate_utility(const UtilityFunction& u) {
  UtilityReport report;
  const double lo = std::isfinite(u.domain_lower()) ? u.domain_lower() + 1e-3 : -20.0;
  const double hi = lo + 40.0;
  constexpr int kGrid = 200;
  const double h = (hi - lo) / kGrid;

  bool concave = true, monotone = true;
  for (int k = 0; k + 2 <= kGrid; ++k) {
    const double a = lo + k * h, b = lo + (k + 2) * h, m = lo + (k + 1) * h;
    const double ua = eval_u(u, a), ub = eval_u(u, b), um = eval_u(u, m);
    if (um + 1e-12 * (1 + std::abs(um)) < 0.5 * (ua + ub)) concave = false;
    if (ub + 1e-12 * (1 + std::abs(ub)) < ua) monotone = false;
    if (eval_du(u, a) < 0) monotone = false;
  }
  if (!concave) report.violations.push_back("not concave: midpoint test failed");
  if (!monotone) report.violations.push_back("not nondecreasing");

  // u' -> +inf at the left end of the domain.
  const double left = std::isfinite(u.domain_lower()) ? u.domain_lower() + 1e-12 : -1e12;
  if (!(eval_du(u, left) > 1e6)) report.violations.push_back("Inada condition fails at the left end");
  // u' -> 0 at +inf.
  const double right_big = eval_du(u, 1e300);
  const double anchor = eval_du(u, std::isfinite(u.domain_lower()) ? u.domain_lower() + 1 : -1.0);
  if (!(right_big < 1e-2 * anchor)) report.violations.push_back("Inada condition fails at +inf");

  // Strict concavity on (-inf, a).
  const double a = u.saturation_point();
  const double probe = std::isfinite(a) ? a - 1.0 : lo + 1.0;
  if (!(eval_d2u(u, probe) < 0)) report.violations.push_back("not strictly concave below saturation");
  return report;
}

}  // namespace collarb
