#include <random>

#include "collarb/lp.hpp"
#include "collarb/polytope.hpp"
#include "helpers.hpp"

using namespace testing;

TEST_CASE("one-variable maximization") {
  LinearProgram lp(1);
  lp.sense = Sense::maximize;
  lp.objective = {1};
  lp.add_row({1}, Relation::less_equal, 1);
  const auto r = lp_solve(lp);
  REQUIRE(std::holds_alternative<LpOptimal>(r));
  CHECK(std::get<LpOptimal>(r).value == 1);
  CHECK(std::get<LpOptimal>(r).point[0] == 1);
}

TEST_CASE("contradictory bounds give a checkable Farkas certificate") {
  LinearProgram lp(1);
  lp.set_free(0);
  lp.add_row({1}, Relation::greater_equal, 1);
  lp.add_row({1}, Relation::less_equal, 0);
  const auto r = lp_solve(lp);
  REQUIRE(std::holds_alternative<LpInfeasible>(r));
  CHECK(verify_farkas(lp, std::get<LpInfeasible>(r).certificate));
}

TEST_CASE("unbounded program returns an improving ray") {
  LinearProgram lp(2);
  lp.sense = Sense::maximize;
  lp.objective = {1, 1};
  lp.add_row({1, -1}, Relation::less_equal, 1);
  const auto r = lp_solve(lp);
  REQUIRE(std::holds_alternative<LpUnbounded>(r));
  const auto& u = std::get<LpUnbounded>(r);
  CHECK(is_feasible_point(lp, u.point));
  CHECK(sgn(dot(lp.objective, u.ray)) > 0);
  RationalVector far = u.point;
  for (std::size_t j = 0; j < far.size(); ++j) far[j] += 1000 * u.ray[j];
  CHECK(is_feasible_point(lp, far));
}

TEST_CASE("bounded and free variables") {
  LinearProgram lp(2);
  lp.set_free(0);
  lp.lower[1] = Rational(-3);
  lp.upper[1] = Rational(5, 2);
  lp.objective = {1, -1};
  lp.add_row({1, 1}, Relation::equal, 0);
  lp.add_row({1, 0}, Relation::greater_equal, -2);
  const auto r = lp_solve(lp);
  REQUIRE(std::holds_alternative<LpOptimal>(r));
  CHECK(std::get<LpOptimal>(r).value == -4);  // x0 = -2, x1 = 2
}

namespace {

AffineSimplexSet random_set(std::mt19937_64& rng, std::size_t n, std::size_t rows) {
  std::uniform_int_distribution<long> coef(-4, 4);
  AffineSimplexSet set(n);
  set.positivity = Positivity::nonneg;
  for (std::size_t r = 0; r < rows; ++r) {
    RationalVector row(n);
    for (auto& v : row) v = coef(rng);
    set.add_equality(std::move(row), coef(rng) / 4);
  }
  return set;
}

}  // namespace

TEST_CASE("LP optimum equals the best enumerated vertex; infeasible systems carry valid certificates") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> coef(-5, 5);
  int feasible = 0, infeasible = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = 2 + trial % 5;
    const auto set = random_set(rng, n, 1 + trial % 2);
    LinearProgram lp(n);
    for (std::size_t r = 0; r < set.eq_rows.size(); ++r) lp.add_row(set.eq_rows[r], Relation::equal, set.eq_rhs[r]);
    lp.add_row(RationalVector(n, Rational(1)), Relation::equal, 1);
    lp.objective.resize(n);
    for (auto& c : lp.objective) c = coef(rng);
    lp.sense = trial % 2 ? Sense::maximize : Sense::minimize;
    const auto verts = vertex_enumerate(set);
    const auto r = lp_solve(lp);
    if (verts.empty()) {
      REQUIRE(std::holds_alternative<LpInfeasible>(r));
      CHECK(verify_farkas(lp, std::get<LpInfeasible>(r).certificate));
      ++infeasible;
      continue;
    }
    REQUIRE(std::holds_alternative<LpOptimal>(r));
    Rational best = dot(lp.objective, verts.front());
    for (const auto& v : verts) {
      const Rational val = dot(lp.objective, v);
      best = lp.sense == Sense::maximize ? std::max(best, val) : std::min(best, val);
    }
    CHECK(std::get<LpOptimal>(r).value == best);
    ++feasible;
  }
  CHECK(feasible > 20);
  CHECK(infeasible > 5);
}
