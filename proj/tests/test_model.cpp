#include <random>

#include "collarb/fixtures.hpp"
#include "collarb/model.hpp"
#include "helpers.hpp"

using namespace testing;

TEST_CASE("fixtures validate cleanly") {
  for (const auto& name : fixture_names()) {
    const auto doc = make_fixture(name);
    const auto report = validate_model(doc.model, doc.exchange ? &*doc.exchange : nullptr);
    INFO(name);
    for (const auto& v : report.violations) INFO(v.code << ": " << v.message);
    CHECK(report.ok());
  }
}

TEST_CASE("validation reports each broken invariant") {
  SUBCASE("non-equivalent measure") {
    auto m = one_period(1, qs({"2", "0"}), qs({"0", "1"}));
    CHECK(validate_model(m).has("measure_not_equivalent"));
  }
  SUBCASE("measure not normalized") {
    auto m = one_period(1, qs({"2", "0"}), qs({"1/2", "1/3"}));
    CHECK(validate_model(m).has("measure_not_normalized"));
  }
  SUBCASE("non-trivial initial partition") {
    auto m = one_period(1, qs({"2", "0"}));
    m.agents[0].filtration.partitions[0] = point_partition(2);
    CHECK(validate_model(m).has("initial_not_trivial"));
  }
  SUBCASE("filtration does not refine") {
    auto m = one_period(1, qs({"2", "0", "1"}));
    m.horizon = 2;
    m.agents[0].filtration.partitions = {trivial_partition(3), point_partition(3), Partition{{0, 1}, {2}}};
    m.agents[0].assets[0].push_back(qs({"2", "0", "1"}));
    CHECK(validate_model(m).has("not_refining"));
  }
  SUBCASE("price not adapted") {
    auto m = one_period(1, qs({"2", "0"}));
    m.agents[0].assets[0][0] = qs({"1", "2"});
    CHECK(validate_model(m).has("not_adapted"));
  }
  SUBCASE("wrong sizes and missing agents") {
    auto m = one_period(1, qs({"2", "0"}));
    m.agents[0].endowment = qs({"1"});
    CHECK(validate_model(m).has("wrong_size"));
    m.agents.clear();
    CHECK(validate_model(m).has("no_agents"));
  }
  SUBCASE("exchange problems") {
    auto doc = fixture_fig1();
    auto ex = *doc.exchange;
    ex.basis[0][1][0] += 1;
    CHECK(validate_model(doc.model, &ex).has("exchange_not_zero_sum"));
    ex = *doc.exchange;
    ex.basis[0][0] = qs({"1", "0", "0", "0", "0", "0", "0", "0"});
    ex.basis[0][1] = qs({"-1", "0", "0", "0", "0", "0", "0", "0"});
    CHECK(validate_model(doc.model, &ex).has("exchange_not_measurable"));
    ex = *doc.exchange;
    ex.basis.pop_back();
    CHECK(validate_model(doc.model, &ex).has("deterministic_not_in_exchange"));
    ex = *doc.exchange;
    ex.seed_hint = SeedHint{9, 1};
    CHECK(validate_model(doc.model, &ex).has("bad_seed_hint"));
  }
}

TEST_CASE("partition helpers") {
  CHECK(is_partition({{0, 2}, {1}}, 3));
  CHECK_FALSE(is_partition({{0, 1}, {1, 2}}, 3));
  CHECK_FALSE(is_partition({{0}, {1}}, 3));
  CHECK_FALSE(is_partition({{2, 0}, {1}}, 3));
  CHECK(refines(point_partition(4), Partition{{0, 1}, {2, 3}}, 4));
  CHECK_FALSE(refines(Partition{{0, 1}, {2, 3}}, Partition{{0, 2}, {1, 3}}, 4));
  CHECK(atom_lookup(Partition{{1, 2}, {0}}, 3) == std::vector<std::size_t>{1, 0, 0});
  CHECK(is_measurable(qs({"1", "1", "3"}), Partition{{0, 1}, {2}}));
  CHECK_FALSE(is_measurable(qs({"1", "2", "3"}), Partition{{0, 1}, {2}}));
}

TEST_CASE("conditional expectation: tower, idempotence, total mass") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> d(-5, 5);
  const Partition fine = {{0, 1}, {2}, {3, 4}, {5}};
  const Partition coarse = {{0, 1, 2}, {3, 4, 5}};
  for (int trial = 0; trial < 50; ++trial) {
    const auto q = random_probability(rng, 6);
    RandomVariable x(6);
    for (auto& v : x) {
      v = Rational(d(rng), 1 + trial % 4);
      v.canonicalize();
    }
    const auto ef = conditional_expectation<Rational>(x, fine, q);
    const auto ec = conditional_expectation<Rational>(x, coarse, q);
    CHECK(conditional_expectation<Rational>(ef, coarse, q) == ec);
    CHECK(conditional_expectation<Rational>(ef, fine, q) == ef);
    CHECK(is_measurable(ef, fine));
    CHECK(dot(ef, q) == dot(x, q));
    const auto masses = restrict_measure<Rational>(q, coarse);
    CHECK(sum(masses) == 1);
    CHECK(restrict_measure<Rational>(restrict_measure<Rational>(q, fine), Partition{{0, 1}, {2, 3}}) == masses);
  }
  const RationalVector zero_mass = qs({"0", "0", "1"});
  CHECK_THROWS_AS(conditional_expectation<Rational>(qs({"1", "2", "3"}), Partition{{0, 1}, {2}}, zero_mass),
                  InputError);
}

TEST_CASE("exchange membership") {
  const auto doc = fixture_fig1();
  const auto& ex = *doc.exchange;
  CHECK(contains_deterministic(ex, 2, 8));
  const auto det = deterministic_exchange(0, 2, 8);
  const auto coeffs = exchange_coefficients(ex, det);
  REQUIRE(coeffs);
  CHECK(combine(ex, *coeffs, 2, 8) == det);
  ExchangeVector outside = {indicator({0}, 8), indicator({0}, 8)};
  for (auto& v : outside[1]) v = -v;
  CHECK_FALSE(exchange_contains(ex, outside));

  ExchangeSpace cone = ex;
  cone.kind = ExchangeKind::convex_cone;
  CHECK_FALSE(contains_deterministic(cone, 2, 8));
  auto neg = ex.basis[0];
  for (auto& leg : neg)
    for (auto& v : leg) v = -v;
  CHECK_FALSE(exchange_contains(cone, neg));
  CHECK(exchange_contains(ex, neg));
}
