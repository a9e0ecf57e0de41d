#include <cmath>
#include <random>

#include "collarb/beneficial.hpp"
#include "collarb/cara.hpp"
#include "collarb/minimax.hpp"
#include "helpers.hpp"

using namespace testing;

namespace {

double plain_U(const CaraRegionSpec& s, double a) {
  return -std::log(s.q1 * std::exp(-s.gamma1 * a) + 1 - s.q1) / s.gamma1;
}
double plain_L(const CaraRegionSpec& s, double a) {
  return std::log(s.q2 * std::exp(s.gamma2 * a) + 1 - s.q2) / s.gamma2;
}

std::vector<CaraRegionSpec> grid() {
  std::vector<CaraRegionSpec> out;
  for (const double q1 : {0.3, 0.6, 0.9})
    for (const double q2 : {0.1, 0.25})
      for (const double g1 : {0.5, 2.0})
        for (const double g2 : {1.0, 3.0}) out.push_back({q1, q2, g1, g2});
  return out;
}

}  // namespace

TEST_CASE("spec checks") {
  CHECK_THROWS_AS(check_spec({0.2, 0.3, 1, 1}), InputError);
  CHECK_THROWS_AS(check_spec({0.5, 0.5, 1, 1}), InputError);
  CHECK_THROWS_AS(check_spec({1.0, 0.3, 1, 1}), InputError);
  CHECK_THROWS_AS(check_spec({0.6, 0.3, 0, 1}), InputError);
  CHECK_NOTHROW(check_spec({0.6, 0.3, 1, 1}));
}

TEST_CASE("indifference curves agree with direct evaluation and cross once") {
  for (const auto& s : grid()) {
    const double a_star = alpha_star(s);
    CHECK(a_star > 0);
    CHECK(std::abs(curve_U(s, a_star) - curve_L(s, a_star)) <= 1e-10);
    for (const double f : {0.05, 0.3, 0.7, 0.99}) {
      const double a = f * a_star;
      CHECK(curve_U(s, a) == doctest::Approx(plain_U(s, a)).epsilon(1e-12));
      CHECK(curve_L(s, a) == doctest::Approx(plain_L(s, a)).epsilon(1e-12));
      CHECK(curve_U(s, a) > curve_L(s, a));
    }
    for (const double f : {1.01, 1.5, 3.0}) CHECK(curve_U(s, f * a_star) < curve_L(s, f * a_star));
  }
}

TEST_CASE("symmetric risk aversion has a closed-form crossing") {
  // γ1 = γ2 = γ: U = L  ⇔  e^{γα} = (1 − q2) q1 / ((1 − q1) q2).
  const CaraRegionSpec s{0.6, 0.2, 1.5, 1.5};
  const double expected = std::log((1 - s.q2) * s.q1 / ((1 - s.q1) * s.q2)) / s.gamma1;
  CHECK(alpha_star(s) == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("region membership is the pair of expected-utility gains") {
  std::mt19937_64 rng(13);
  for (const auto& s : grid()) {
    const double a_star = alpha_star(s);
    std::uniform_real_distribution<double> ua(1e-3, 2 * a_star), ub(-1, 2);
    for (int k = 0; k < 50; ++k) {
      const double a = ua(rng), b = ub(rng);
      const double e1 = s.q1 * std::exp(-s.gamma1 * (a - b)) + (1 - s.q1) * std::exp(s.gamma1 * b);
      const double e2 = s.q2 * std::exp(-s.gamma2 * (b - a)) + (1 - s.q2) * std::exp(-s.gamma2 * b);
      const auto r = region_membership(s, a, b);
      // Skip points within rounding of the boundary.
      if (std::abs(e1 - 1) < 1e-9 || std::abs(e2 - 1) < 1e-9 || std::abs(a - a_star) < 1e-9) continue;
      CHECK(r.member == (e1 < 1 && e2 < 1));
      if (r.member) {
        CHECK(r.expectation1 == doctest::Approx(e1).epsilon(1e-12));
        CHECK(r.expectation2 == doctest::Approx(e2).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("emitted exchange is zero-sum and improves both agents of the bridge model") {
  const CaraRegionSpec s{0.7, 0.2, 1, 2};
  const double a = 0.5 * alpha_star(s);
  const double b = 0.5 * (curve_U(s, a) + curve_L(s, a));
  const auto legs = emit_exchange(s, a, b);
  CHECK(legs.first.first + legs.second.first == 0);
  CHECK(legs.first.second + legs.second.second == 0);
  CHECK_THROWS_AS(emit_exchange(s, 2 * alpha_star(s), b), InputError);

  const auto doc = trivial_market_model(s, a, b);
  CHECK(validate_model(doc.model, &*doc.exchange).ok());
  const std::vector<double> leg1 = {legs.first.first, legs.first.second};
  const std::vector<double> leg2 = {legs.second.first, legs.second.second};
  CHECK(indirect_utility(doc.model, 0, leg1).value > indirect_utility(doc.model, 0).value);
  CHECK(indirect_utility(doc.model, 1, leg2).value > indirect_utility(doc.model, 1).value);
  const auto out = beneficial_pipeline(doc.model, *doc.exchange);
  REQUIRE(out.certificate);
  CHECK(verify_certificate(doc.model, *doc.exchange, *out.certificate));
}
