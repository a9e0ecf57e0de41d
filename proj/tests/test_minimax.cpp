#include <cmath>
#include <random>

#include "collarb/arbitrage.hpp"
#include "collarb/minimax.hpp"
#include "collarb/utility.hpp"
#include "helpers.hpp"

using namespace testing;

namespace {

const RationalVector kQ1 = {Rational(1, 8),  Rational(3, 8),  Rational(1, 12), Rational(1, 12),
                            Rational(1, 12), Rational(1, 12), Rational(1, 12), Rational(1, 12)};
const RationalVector kQ2 = {Rational(33, 125), Rational(11, 125), Rational(17, 125), Rational(17, 125),
                            Rational(1, 100),  Rational(1, 100),  Rational(89, 500), Rational(89, 500)};

/// Exact first-order test for min Σq² over a polytope: Σ q (v − q) ≥ 0 at every vertex v.
bool minimizes_sum_of_squares(const AffineSimplexSet& set, const RationalVector& q) {
  if (!set.contains(q)) return false;
  for (const auto& v : vertex_enumerate(set)) {
    Rational slope = 0;
    for (std::size_t w = 0; w < q.size(); ++w) slope += q[w] * (v[w] - q[w]);
    if (slope < 0) return false;
  }
  return true;
}

/// With uniform P, truncated quadratic utility and deterministic wealth x < 0
/// the objective is λx + λ² E_P[Z²]/(4γ); so λ = −2γx / E_P[Z²].
double quadratic_lambda(const RationalVector& q, double gamma, double x) {
  Rational second = 0;
  for (const auto& v : q) second += v * v * static_cast<long>(q.size());
  return -2 * gamma * x / second.get_d();
}

}  // namespace

TEST_CASE("oracle measures are the least-squares points of the martingale polytopes") {
  const auto doc = fixture_fig1();
  CHECK(minimizes_sum_of_squares(martingale_polytope(doc.model, 0).set, kQ1));
  CHECK(minimizes_sum_of_squares(martingale_polytope(doc.model, 1).set, kQ2));
  CHECK(quadratic_lambda(kQ1, 1, -1) == doctest::Approx(24.0 / 19).epsilon(1e-15));
}

TEST_CASE("two-period tree: exact minimax measures and multipliers") {
  const auto doc = fixture_fig1();
  const auto s1 = solve_minimax(doc.model, 0);
  const auto s2 = solve_minimax(doc.model, 1);
  REQUIRE(s1.exact_measure);
  REQUIRE(s2.exact_measure);
  CHECK(*s1.exact_measure == kQ1);
  CHECK(*s2.exact_measure == kQ2);
  CHECK(std::abs(s1.lambda - 24.0 / 19) <= 1e-8);
  CHECK(std::abs(s2.lambda - quadratic_lambda(kQ2, 1, -1)) <= 1e-8);
  CHECK(s1.equivalent);
  CHECK(s2.equivalent);
  CHECK(s1.gap <= 1e-8);
  CHECK(s2.gap <= 1e-8);
  CHECK(duality_gap(s1) <= 1e-8);
  CHECK(duality_gap(doc.model, 1) <= 1e-8);

  const auto all = solve_minimax_all(doc.model);
  REQUIRE(all.size() == 2);
  CHECK(all[0].exact_measure == s1.exact_measure);
  CHECK(all[1].exact_measure == s2.exact_measure);
}

TEST_CASE("minimax measure ignores gamma and the level of negative deterministic wealth") {
  auto doc = fixture_fig1();
  for (const auto& [gamma, x] : {std::pair{"3", "-2"}, std::pair{"1/5", "-1/7"}}) {
    for (auto& a : doc.model.agents) {
      a.utility = UtilityFunction::truncated_quadratic(q(gamma));
      a.endowment = constant_rv(q(x), 8);
    }
    const auto s = solve_minimax(doc.model, 0);
    REQUIRE(s.exact_measure);
    CHECK(*s.exact_measure == kQ1);
    CHECK(s.lambda == doctest::Approx(quadratic_lambda(kQ1, q(gamma).get_d(), q(x).get_d())).epsilon(1e-8));
  }
}

TEST_CASE("exponential utility: deterministic shifts and risk-aversion scaling") {
  const auto base = fixture_twin_complete();
  const auto s0 = solve_minimax(base.model, 0);
  auto shifted = base;
  for (auto& v : shifted.model.agents[0].endowment) v += 3;
  const auto s1 = solve_minimax(shifted.model, 0);
  for (std::size_t w = 0; w < 2; ++w) CHECK(s1.measure[w] == doctest::Approx(s0.measure[w]).epsilon(1e-9));
  CHECK(s1.lambda == doctest::Approx(s0.lambda * std::exp(-3.0)).epsilon(1e-8));

  // γX is what matters for Q: doubling γ and halving X leaves Q unchanged.
  auto scaled = base;
  scaled.model.agents[0].utility = UtilityFunction::exponential(2);
  for (auto& v : scaled.model.agents[0].endowment) v /= 2;
  const auto s2 = solve_minimax(scaled.model, 0);
  for (std::size_t w = 0; w < 2; ++w) CHECK(s2.measure[w] == doctest::Approx(s0.measure[w]).epsilon(1e-9));
}

TEST_CASE("complete market: the measure is the unique martingale measure") {
  const auto doc = fixture_twin_complete();
  for (std::size_t i = 0; i < 2; ++i) {
    const auto s = solve_minimax(doc.model, i);
    REQUIRE(s.exact_measure);
    CHECK(*s.exact_measure == qs({"1/3", "2/3"}));
  }
}

TEST_CASE("no assets and zero wealth: Q = P and λ = u'(0)") {
  const auto doc = fixture_zero_market();
  for (std::size_t i = 0; i < 2; ++i) {
    const auto s = solve_minimax(doc.model, i);
    REQUIRE(s.exact_measure);
    CHECK(*s.exact_measure == doc.model.agents[i].measure);
    CHECK(s.lambda == doctest::Approx(1).epsilon(1e-9));
  }
}

TEST_CASE("truncated quadratic minimizer on the boundary") {
  const auto m = idle_market({idle_agent(qs({"1/2", "1/2"}), UtilityFunction::truncated_quadratic(1), qs({"-1", "5"}))});
  const auto s = solve_minimax(m, 0);
  CHECK(s.boundary);
  CHECK_FALSE(s.equivalent);
  CHECK(s.measure[1] == doctest::Approx(0).epsilon(1e-9));
  CHECK(s.lambda == doctest::Approx(1).epsilon(1e-8));
  CHECK(s.gap <= 1e-8);
}

TEST_CASE("unbounded utility and arbitrage are rejected") {
  const auto sat = idle_market({idle_agent(qs({"1/2", "1/2"}), UtilityFunction::truncated_quadratic(1), qs({"1", "2"}))});
  CHECK(indirect_utility(sat, 0).unbounded_utility);
  CHECK_THROWS_AS(solve_minimax(sat, 0), UnboundedUtility);
  auto arb = one_period(1, qs({"2", "3"}));
  CHECK_THROWS_AS(solve_minimax(arb, 0), InputError);
  const auto bounded = idle_market({idle_agent(qs({"1/2", "1/2"}), UtilityFunction::exponential(1), qs({"1", "2"}))});
  CHECK_FALSE(indirect_utility(bounded, 0).unbounded_utility);
}

TEST_CASE("directional derivative matches central differences of the indirect utility") {
  const auto doc = fixture_fig1();
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1, 1);
  for (std::size_t i = 0; i < 2; ++i) {
    const auto s = solve_minimax(doc.model, i);
    for (int trial = 0; trial < 6; ++trial) {
      std::vector<double> leg(8);
      for (auto& v : leg) v = u(rng);
      const double h = 1e-5;
      std::vector<double> up(8), down(8);
      for (std::size_t w = 0; w < 8; ++w) {
        up[w] = h * leg[w];
        down[w] = -h * leg[w];
      }
      const double fd = (indirect_utility(doc.model, i, up).value - indirect_utility(doc.model, i, down).value) / (2 * h);
      const double d = directional_derivative(s, leg);
      CHECK(std::abs(fd - d) <= 1e-4 * std::max(1.0, std::abs(d)));
    }
  }
}

TEST_CASE("every dual point bounds the indirect utility from above") {
  const auto doc = fixture_fig1();
  const auto& agent = doc.model.agents[0];
  const double primal = indirect_utility(doc.model, 0).value;
  const auto set = martingale_polytope(doc.model, 0).set;
  const auto verts = vertex_enumerate(set);
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(0.01, 1);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> qv(8, 0);
    double total = 0;
    for (const auto& v : verts) {
      const double wgt = u(rng);
      total += wgt;
      for (std::size_t w = 0; w < 8; ++w) qv[w] += wgt * v[w].get_d();
    }
    const double lambda = 0.1 + 3 * u(rng);
    double dual = 0;
    for (std::size_t w = 0; w < 8; ++w) {
      const double p = agent.measure[w].get_d();
      const double qw = qv[w] / total;
      dual += lambda * qw * agent.endowment[w].get_d() + p * eval_phi(agent.utility, lambda * qw / p);
    }
    CHECK(dual >= primal - 1e-12);
  }
}
