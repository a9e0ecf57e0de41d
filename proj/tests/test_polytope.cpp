#include <algorithm>
#include <random>

#include "collarb/arbitrage.hpp"
#include "collarb/convex.hpp"
#include "collarb/polytope.hpp"
#include "helpers.hpp"

using namespace testing;

namespace {

/// Lifts {A q = b, Σq = 1, q ≥ 0} to q = s + t·1 with s, t ≥ 0, so that the
/// max-min coordinate is a vertex value of the lifted set.
AffineSimplexSet lifted(const AffineSimplexSet& set) {
  const std::size_t n = set.dimension;
  AffineSimplexSet out(n + 1);
  out.on_simplex = false;
  out.positivity = Positivity::nonneg;
  const auto rows = set.equality_rows();
  const auto rhs = set.equality_rhs();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    RationalVector row = rows[r];
    row.push_back(sum(rows[r]));
    out.add_equality(std::move(row), rhs[r]);
  }
  return out;
}

ConvexObjective chi_square(const std::vector<double>& p) {
  SeparableTerm t;
  t.value = [p](std::size_t w, double x) { return x * x / p[w]; };
  t.derivative = [p](std::size_t w, double x) { return 2 * x / p[w]; };
  t.curvature = [p](std::size_t w, double) { return 2 / p[w]; };
  return separable_objective(t);
}

}  // namespace

TEST_CASE("standard simplex vertices") {
  AffineSimplexSet set(3);
  const auto v = vertex_enumerate(set);
  REQUIRE(v.size() == 3);
  for (const auto& x : v) {
    CHECK(sum(x) == 1);
    CHECK(std::count(x.begin(), x.end(), Rational(1)) == 1);
  }
}

TEST_CASE("first-period polytope of agent 1 has three vertices") {
  // Time-1 restriction: the root step 8 -> (12, 4, 4, 4) on the four atoms.
  AffineSimplexSet set(4);
  set.add_equality(qs({"4", "-4", "-4", "-4"}), 0);
  const auto v = vertex_enumerate(set);
  std::vector<RationalVector> expected = {qs({"1/2", "0", "0", "1/2"}), qs({"1/2", "0", "1/2", "0"}),
                                          qs({"1/2", "1/2", "0", "0"})};
  std::sort(expected.begin(), expected.end());
  auto sorted = v;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == expected);
  for (const auto& x : v) CHECK(4 * x[0] - 4 * (x[1] + x[2] + x[3]) == 0);
}

TEST_CASE("infeasible set has no vertices and no interior point") {
  AffineSimplexSet set(2);
  set.add_equality(qs({"1", "1"}), 2);
  CHECK(vertex_enumerate(set).empty());
  const auto ip = interior_point_exists(set);
  REQUIRE(std::holds_alternative<InteriorPointNo>(ip));
  const auto& no = std::get<InteriorPointNo>(ip);
  REQUIRE(no.farkas);
  CHECK(verify_farkas(interior_point_lp(set), *no.farkas));
}

TEST_CASE("boundary-only set has no interior point") {
  AffineSimplexSet set(3);
  set.add_equality(qs({"1", "0", "0"}), 0);
  CHECK(std::holds_alternative<InteriorPointNo>(interior_point_exists(set)));
}

TEST_CASE("agent 1 of the two-period tree: interior point and max-min coordinate") {
  const auto doc = fixture_fig1();
  const auto poly = martingale_polytope(doc.model, 0);
  const auto ip = interior_point_exists(poly.set);
  REQUIRE(std::holds_alternative<InteriorPointYes>(ip));
  CHECK(poly.set.contains(std::get<InteriorPointYes>(ip).point));
  // The q = q' = 1/6 point of the time-1 family, split by the conditional laws.
  CHECK(poly.set.contains(qs({"1/8", "3/8", "1/12", "1/12", "1/12", "1/12", "1/12", "1/12"})));

  const auto verts = vertex_enumerate(lifted(poly.set));
  Rational best = 0;
  for (const auto& v : verts) best = std::max(best, v.back());
  CHECK(std::get<InteriorPointYes>(ip).min_coordinate == best);
  CHECK(best == Rational(1, 12));
}

TEST_CASE("one-period, three-outcome trees: interior point iff S0 inside the price range") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> d(0, 6);
  for (int trial = 0; trial < 120; ++trial) {
    const RationalVector s1 = {d(rng), d(rng), d(rng)};
    const Rational s0 = d(rng);
    AffineSimplexSet set(3);
    RationalVector row(3);
    for (std::size_t w = 0; w < 3; ++w) row[w] = s1[w] - s0;
    set.add_equality(row, 0);
    bool pos = false, neg = false, zero_all = true;
    for (const auto& v : row) {
      pos = pos || sgn(v) > 0;
      neg = neg || sgn(v) < 0;
      zero_all = zero_all && sgn(v) == 0;
    }
    const bool oracle = zero_all || (pos && neg);
    CHECK(std::holds_alternative<InteriorPointYes>(interior_point_exists(set)) == oracle);
  }
}

TEST_CASE("vertex enumeration: parallel kernel matches the serial reference") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> d(-3, 3);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 3 + trial % 8;
    AffineSimplexSet set(n);
    set.positivity = Positivity::nonneg;
    for (int r = 0; r < 1 + trial % 3; ++r) {
      RationalVector row(n);
      for (auto& v : row) v = d(rng);
      set.add_equality(row, 0);
    }
    if (trial % 4 == 0) {
      RationalVector row(n);
      for (auto& v : row) v = d(rng);
      set.add_inequality(row, 1);
    }
    CHECK(vertex_enumerate(set) == vertex_enumerate_serial(set));
  }
  AffineSimplexSet big(30);
  CHECK_THROWS_AS(vertex_enumerate(big), InputError);
}

TEST_CASE("chi-square projection onto agent 1's martingale measures") {
  const auto doc = fixture_fig1();
  const auto poly = martingale_polytope(doc.model, 0);
  const std::vector<double> p(8, 1.0 / 8);
  const auto sol = convex_minimize(poly.set, chi_square(p));
  const auto expected = qs({"1/8", "3/8", "1/12", "1/12", "1/12", "1/12", "1/12", "1/12"});
  CHECK(sol.kkt_residual <= 1e-10);
  CHECK(sol.duality_gap <= 1e-10);
  CHECK_FALSE(sol.boundary);
  for (std::size_t w = 0; w < 8; ++w) CHECK(snap_within(sol.point[w], 1e-9) == expected[w]);

  // First-order optimality against every vertex, and minimality over them.
  const auto f = chi_square(p);
  const auto g = f.gradient(sol.point);
  for (const auto& v : vertex_enumerate(poly.set)) {
    double slope = 0;
    for (std::size_t w = 0; w < 8; ++w) slope += g[static_cast<Eigen::Index>(w)] * (v[w].get_d() - sol.point[w]);
    CHECK(slope >= -1e-9);
    const auto vd = to_double(v);
    CHECK(f.value(vd) >= sol.value - 1e-12);
  }
}

TEST_CASE("strictly convex minimizer is independent of the start") {
  const auto doc = fixture_fig1();
  const auto poly = martingale_polytope(doc.model, 1);
  const auto verts = vertex_enumerate(poly.set);
  const auto interior = std::get<InteriorPointYes>(interior_point_exists(poly.set)).point;
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  const std::vector<double> p(8, 1.0 / 8);
  std::vector<std::vector<double>> points;
  for (int k = 0; k < 5; ++k) {
    std::vector<double> start = to_double(interior);
    double total = 1;
    for (const auto& v : verts) {
      const double wgt = u(rng);
      total += wgt;
      for (std::size_t w = 0; w < 8; ++w) start[w] += wgt * v[w].get_d();
    }
    for (auto& x : start) x /= total;
    ConvexOptions opts;
    opts.start = start;
    points.push_back(convex_minimize(poly.set, chi_square(p), opts).point);
  }
  for (const auto& pt : points) {
    for (std::size_t w = 0; w < 8; ++w) CHECK(std::abs(pt[w] - points.front()[w]) <= 10 * 1e-10);
  }
}

TEST_CASE("chi-square over the whole simplex is minimized at p; constants at any feasible point") {
  const std::vector<double> p = {0.2, 0.5, 0.3};
  AffineSimplexSet set(3);
  const auto sol = convex_minimize(set, chi_square(p));
  for (std::size_t w = 0; w < 3; ++w) CHECK(sol.point[w] == doctest::Approx(p[w]).epsilon(1e-10));

  ConvexObjective c;
  c.value = [](std::span<const double>) { return 4.0; };
  c.gradient = [](std::span<const double> x) { return Eigen::VectorXd::Zero(static_cast<Eigen::Index>(x.size())); };
  c.hessian = [](std::span<const double> x) {
    const auto n = static_cast<Eigen::Index>(x.size());
    return Eigen::MatrixXd::Zero(n, n);
  };
  const auto cs = convex_minimize(set, c);
  CHECK(cs.value == 4.0);
  CHECK(set.residual(cs.point) <= 1e-12);
}

TEST_CASE("minimizers on the boundary are flagged") {
  AffineSimplexSet set(3);
  SeparableTerm t;
  const std::vector<double> target = {0.9, 0.6, -0.5};
  t.value = [target](std::size_t w, double x) { return (x - target[w]) * (x - target[w]); };
  t.derivative = [target](std::size_t w, double x) { return 2 * (x - target[w]); };
  t.curvature = [](std::size_t, double) { return 2.0; };
  const auto sol = convex_minimize(set, separable_objective(t));
  CHECK(sol.boundary);
  CHECK(sol.point[2] == doctest::Approx(0).epsilon(1e-12));
  CHECK(sol.point[0] == doctest::Approx(0.65).epsilon(1e-9));
}

TEST_CASE("no interior point is an input error") {
  AffineSimplexSet set(2);
  set.add_equality(qs({"1", "0"}), 0);
  CHECK_THROWS_AS(convex_minimize(set, chi_square({0.5, 0.5})), InputError);
}
