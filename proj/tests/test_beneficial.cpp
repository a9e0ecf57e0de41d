#include <random>

#include "collarb/beneficial.hpp"
#include "collarb/sweep.hpp"
#include "helpers.hpp"

using namespace testing;

namespace {

void check_certificate_shape(const MarketModel& m, const ExchangeSpace& ex, const BeneficialCertificate& c) {
  CHECK(sum(c.candidate.shifts) == 0);
  for (const double e : c.candidate.expectations)
    CHECK(e == doctest::Approx(c.candidate.expectations.front()).epsilon(1e-9));
  for (const double d : c.derivatives) CHECK(d > 0);
  for (std::size_t i = 0; i < c.before.size(); ++i) CHECK(c.after[i] > c.before[i]);
  CHECK(c.strict);
  CHECK(verify_certificate(m, ex, c));
}

}  // namespace

TEST_CASE("two-period tree: polarity fails and the first atom pair seeds a beneficial exchange") {
  const auto doc = fixture_fig1();
  const auto out = beneficial_pipeline(doc.model, *doc.exchange);
  REQUIRE(out.polarity.exact_values);
  CHECK(*out.polarity.exact_values == qs({"37/250", "-79/750", "11/75", "-71/375"}));
  REQUIRE(out.polarity.violated());
  CHECK(*out.polarity.violating_index == 0);
  CHECK(out.polarity.violating_sign == 1);
  REQUIRE(out.certificate);
  const auto& c = *out.certificate;
  CHECK(c.seed_index == 0);
  REQUIRE(c.candidate.exact_common_value);
  CHECK(*c.candidate.exact_common_value == q("37/500"));
  CHECK(c.candidate.expectations[0] == doctest::Approx(0.074).epsilon(1e-10));
  CHECK(c.alpha == 0.5);
  check_certificate_shape(doc.model, *doc.exchange, c);
}

TEST_CASE("without a seed hint the largest violation seeds the exchange") {
  auto doc = fixture_fig1();
  doc.exchange->seed_hint.reset();
  const auto out = beneficial_pipeline(doc.model, *doc.exchange);
  REQUIRE(out.certificate);
  // |−71/375| is the largest value; the sign flips it positive.
  CHECK(out.certificate->seed_index == 3);
  CHECK(out.certificate->seed_sign == -1);
  check_certificate_shape(doc.model, *doc.exchange, *out.certificate);
}

TEST_CASE("common complete market: polarity holds, nothing to gain") {
  const auto doc = fixture_twin_complete();
  const auto out = beneficial_pipeline(doc.model, *doc.exchange);
  CHECK_FALSE(out.polarity.violated());
  CHECK_FALSE(out.certificate);
  REQUIRE(out.polarity.exact_values);
  for (const auto& v : *out.polarity.exact_values) CHECK(v == 0);
  std::mt19937_64 rng(7);
  CHECK_FALSE(random_improvement_found(doc.model, *doc.exchange, rng));
}

TEST_CASE("different risk-neutral measures give a beneficial exchange") {
  const auto doc = fixture_ca_pair();
  const auto out = beneficial_pipeline(doc.model, *doc.exchange);
  REQUIRE(out.certificate);
  REQUIRE(out.certificate->candidate.exact_common_value);
  CHECK(*out.certificate->candidate.exact_common_value == q("1/6"));
  check_certificate_shape(doc.model, *doc.exchange, *out.certificate);
}

TEST_CASE("no traded assets: pipeline agrees with comparing beliefs directly") {
  const auto doc = fixture_zero_market();
  const auto out = beneficial_pipeline(doc.model, *doc.exchange);
  REQUIRE(out.polarity.exact_values);
  CHECK(*out.polarity.exact_values == qs({"1/4", "0", "-1/4"}));
  REQUIRE(out.certificate);
  check_certificate_shape(doc.model, *doc.exchange, *out.certificate);
  const auto z = check_corollary_zero_market(doc.model, *doc.exchange);
  CHECK(z.direct);
  CHECK(z.pipeline);

  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 2 + trial % 4;
    const auto p1 = random_probability(rng, n);
    const auto p2 = trial % 5 == 0 ? p1 : random_probability(rng, n);
    const auto m = idle_market({idle_agent(p1, UtilityFunction::exponential(1), constant_rv(0, n)),
                                idle_agent(p2, UtilityFunction::logarithmic(1), constant_rv(0, n))});
    const auto ex = zero_sum_pairs(point_partition(n), n);
    const auto r = check_corollary_zero_market(m, ex);
    CHECK(r.direct == r.pipeline);
    CHECK(r.direct == (p1 != p2));
  }
}

TEST_CASE("zero-market check refuses models with assets") {
  const auto doc = fixture_fig1();
  CHECK_THROWS_AS(check_corollary_zero_market(doc.model, *doc.exchange), InputError);
}

TEST_CASE("line search needs positive directional derivatives") {
  const auto doc = fixture_zero_market();
  const auto mm = solve_minimax_all(doc.model);
  const ExchangeVector zero(2, RandomVariable(3, 0));
  CHECK_THROWS_AS(line_search_alpha(doc.model, mm, zero), InputError);
}

TEST_CASE("pipeline on cone exchange sets") {
  auto doc = fixture_zero_market();
  auto& ex = *doc.exchange;
  ex.kind = ExchangeKind::convex_cone;
  // Keep both directions of the deterministic transfer so the hypotheses hold.
  ExchangeVector det = deterministic_exchange(0, 2, 3);
  ExchangeVector neg = det;
  for (auto& leg : neg)
    for (auto& v : leg) v = -v;
  ex.basis.push_back(det);
  ex.basis.push_back(neg);
  const auto out = beneficial_pipeline(doc.model, ex);
  REQUIRE(out.polarity.violated());
  CHECK(out.polarity.violating_sign == 1);
  REQUIRE(out.certificate);
  CHECK(out.certificate->seed_index == 0);
  check_certificate_shape(doc.model, ex, *out.certificate);
}
