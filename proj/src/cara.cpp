#include "collarb/cara.hpp"

#include <cmath>

namespace collarb {

void check_spec(const CaraRegionSpec& s) {
  if (!(s.q1 > s.q2 && s.q2 > 0 && s.q1 < 1)) throw InputError("cara region: need 0 < q2 < q1 < 1");
  if (!(s.gamma1 > 0 && s.gamma2 > 0)) throw InputError("cara region: risk aversions must be positive");
}

double curve_U(const CaraRegionSpec& s, double alpha) {
  return -std::log1p(s.q1 * std::expm1(-s.gamma1 * alpha)) / s.gamma1;
}

double curve_L(const CaraRegionSpec& s, double alpha) {
  // ln(q e^{γα} + 1 − q) = γα + ln(q + (1 − q) e^{−γα}), stable for large α.
  const double ga = s.gamma2 * alpha;
  if (ga > 1) return (ga + std::log(s.q2 + (1 - s.q2) * std::exp(-ga))) / s.gamma2;
  return std::log1p(s.q2 * std::expm1(ga)) / s.gamma2;
}

double alpha_star(const CaraRegionSpec& s, double tol) {
  check_spec(s);
  auto h = [&](double a) { return curve_U(s, a) - curve_L(s, a); };
  // h'(0) = q1 − q2 > 0, so h is positive just right of zero.
  double lo = 1e-3 / std::max(s.gamma1, s.gamma2);
  while (!(h(lo) > 0)) {
    lo *= 0.5;
    if (lo < 1e-300) throw NumericError("alpha_star: h not positive near zero");
  }
  double hi = lo;
  int doublings = 0;
  while (h(hi) >= 0) {
    lo = hi;
    hi *= 2;
    if (++doublings > 60) throw NumericError("alpha_star: no sign change within 60 doublings");
  }
  for (int it = 0; it < 400 && hi - lo > 0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double v = h(mid);
    if (std::abs(v) <= tol * 1e-3) return mid;
    (v > 0 ? lo : hi) = mid;
  }
  const double a = std::abs(h(lo)) <= std::abs(h(hi)) ? lo : hi;
  if (std::abs(h(a)) > tol) throw NumericError("alpha_star: residual above tolerance");
  return a;
}

RegionMembership region_membership(const CaraRegionSpec& s, double alpha, double beta) {
  check_spec(s);
  RegionMembership m;
  m.expectation1 = s.q1 * std::exp(-s.gamma1 * (alpha - beta)) + (1 - s.q1) * std::exp(s.gamma1 * beta);
  m.expectation2 = s.q2 * std::exp(-s.gamma2 * (beta - alpha)) + (1 - s.q2) * std::exp(-s.gamma2 * beta);
  if (!(alpha > 0)) return m;
  const double root = alpha_star(s);
  m.member = alpha < root && curve_L(s, alpha) < beta && beta < curve_U(s, alpha);
  return m;
}

std::pair<std::pair<double, double>, std::pair<double, double>> emit_exchange(const CaraRegionSpec& s, double alpha,
                                                                           double beta) {
  if (!region_membership(s, alpha, beta).member) throw InputError("emit_exchange: point outside the trade region");
  return {{alpha - beta, -beta}, {beta - alpha, beta}};
}

ModelDocument trivial_market_model(const CaraRegionSpec& s, double alpha, double beta) {
  const auto legs = emit_exchange(s, alpha, beta);
  ModelDocument doc;
  doc.description = "Two-outcome market without traded assets built from a CARA trade-region point.";
  auto& m = doc.model;
  m.space.outcomes = {"A", "Ac"};
  m.space.reference_measure = {Rational(1, 2), Rational(1, 2)};
  m.horizon = 1;
  const Filtration filt{{trivial_partition(2), point_partition(2)}};
  const double q[2] = {s.q1, s.q2};
  const double g[2] = {s.gamma1, s.gamma2};
  for (int i = 0; i < 2; ++i) {
    AgentSpec a;
    a.name = "agent" + std::to_string(i + 1);
    const Rational qa = snap_rational(q[i]);
    a.measure = {qa, 1 - qa};
    a.filtration = filt;
    a.utility = UtilityFunction::exponential(exact_from_double(g[i]));
    a.endowment = {0, 0};
    m.agents.push_back(std::move(a));
  }
  const Rational x1 = exact_from_double(legs.first.first), x2 = exact_from_double(legs.first.second);
  ExchangeSpace ex;
  ex.kind = ExchangeKind::convex_cone;
  ex.zero_sum = true;
  ex.includes_deterministic = true;
  ex.basis.push_back({{x1, x2}, {-x1, -x2}});
  ex.basis.push_back({{1, 1}, {-1, -1}});
  ex.basis.push_back({{-1, -1}, {1, 1}});
  doc.exchange = std::move(ex);
  return doc;
}

}  // namespace collarb
