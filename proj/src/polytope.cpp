#include "collarb/polytope.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "collarb/errors.hpp"

namespace collarb {

std::vector<RationalVector> AffineSimplexSet::equality_rows() const {
  auto rows = eq_rows;
  if (on_simplex) rows.emplace_back(dimension, Rational(1));
  return rows;
}

RationalVector AffineSimplexSet::equality_rhs() const {
  auto rhs = eq_rhs;
  if (on_simplex) rhs.emplace_back(1);
  return rhs;
}

bool AffineSimplexSet::contains(const RationalVector& q) const {
  if (q.size() != dimension) return false;
  for (const auto& v : q) {
    if (positivity == Positivity::strict ? sgn(v) <= 0 : sgn(v) < 0) return false;
  }
  const auto rows = equality_rows();
  const auto rhs = equality_rhs();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (dot(rows[r], q) != rhs[r]) return false;
  }
  for (std::size_t r = 0; r < le_rows.size(); ++r) {
    if (dot(le_rows[r], q) > le_rhs[r]) return false;
  }
  return true;
}

double AffineSimplexSet::residual(const std::vector<double>& q) const {
  double worst = 0;
  for (const double v : q) worst = std::max(worst, -v);
  const auto rows = equality_rows();
  const auto rhs = equality_rhs();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    double s = -rhs[r].get_d();
    for (std::size_t j = 0; j < dimension; ++j) s += rows[r][j].get_d() * q[j];
    worst = std::max(worst, std::abs(s));
  }
  for (std::size_t r = 0; r < le_rows.size(); ++r) {
    double s = -le_rhs[r].get_d();
    for (std::size_t j = 0; j < dimension; ++j) s += le_rows[r][j].get_d() * q[j];
    worst = std::max(worst, s);
  }
  return worst;
}

std::optional<ReducedRows> reduce_rows(const std::vector<RationalVector>& rows, const RationalVector& rhs) {
  if (rows.empty()) return ReducedRows{};
  const std::size_t n = rows.front().size();
  std::vector<RationalVector> aug;
  aug.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    auto row = rows[r];
    row.push_back(rhs[r]);
    aug.push_back(std::move(row));
  }
  std::size_t rank = 0;
  for (std::size_t col = 0; col < n && rank < aug.size(); ++col) {
    std::size_t piv = rank;
    while (piv < aug.size() && sgn(aug[piv][col]) == 0) ++piv;
    if (piv == aug.size()) continue;
    std::swap(aug[rank], aug[piv]);
    const Rational inv = 1 / aug[rank][col];
    for (auto& v : aug[rank]) v *= inv;
    for (std::size_t i = 0; i < aug.size(); ++i) {
      if (i == rank || sgn(aug[i][col]) == 0) continue;
      const Rational f = aug[i][col];
      for (std::size_t j = col; j <= n; ++j) aug[i][j] -= f * aug[rank][j];
    }
    ++rank;
  }
  for (std::size_t i = rank; i < aug.size(); ++i) {
    if (sgn(aug[i][n]) != 0) return std::nullopt;
  }
  ReducedRows out;
  for (std::size_t i = 0; i < rank; ++i) {
    out.rhs.push_back(aug[i][n]);
    aug[i].pop_back();
    out.rows.push_back(std::move(aug[i]));
  }
  return out;
}

LinearProgram interior_point_lp(const AffineSimplexSet& set) {
  const std::size_t n = set.dimension;
  LinearProgram lp(n + 1);
  lp.set_free(n);
  if (!set.on_simplex) lp.upper[n] = Rational(1);
  lp.sense = Sense::maximize;
  lp.objective.assign(n + 1, Rational(0));
  lp.objective[n] = 1;
  const auto rows = set.equality_rows();
  const auto rhs = set.equality_rhs();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    auto row = rows[r];
    row.emplace_back(0);
    lp.add_row(std::move(row), Relation::equal, rhs[r]);
  }
  for (std::size_t r = 0; r < set.le_rows.size(); ++r) {
    auto row = set.le_rows[r];
    row.emplace_back(0);
    lp.add_row(std::move(row), Relation::less_equal, set.le_rhs[r]);
  }
  for (std::size_t j = 0; j < n; ++j) {
    RationalVector row(n + 1, Rational(0));
    row[j] = 1;
    row[n] = -1;
    lp.add_row(std::move(row), Relation::greater_equal, 0);
  }
  return lp;
}

InteriorPointResult interior_point_exists(const AffineSimplexSet& set) {
  const auto lp = interior_point_lp(set);
  const auto result = lp_solve(lp);
  if (const auto* inf = std::get_if<LpInfeasible>(&result)) {
    return InteriorPointNo{inf->certificate, Rational(0)};
  }
  if (std::holds_alternative<LpUnbounded>(result)) {
    throw InternalInconsistency("interior_point_exists: bounded LP reported unbounded");
  }
  const auto& opt = std::get<LpOptimal>(result);
  if (sgn(opt.value) > 0) {
    RationalVector q(opt.point.begin(), opt.point.begin() + static_cast<std::ptrdiff_t>(set.dimension));
    return InteriorPointYes{std::move(q), opt.value};
  }
  return InteriorPointNo{std::nullopt, opt.value};
}

namespace {

struct StandardSystem {
  std::vector<RationalVector> rows;
  RationalVector rhs;
  std::size_t num_cols = 0;
  bool consistent = true;
};

StandardSystem standardize(const AffineSimplexSet& set) {
  const std::size_t n = set.dimension;
  const std::size_t slacks = set.le_rows.size();
  std::vector<RationalVector> rows;
  RationalVector rhs;
  const auto eq = set.equality_rows();
  const auto eqb = set.equality_rhs();
  for (std::size_t r = 0; r < eq.size(); ++r) {
    auto row = eq[r];
    row.resize(n + slacks, Rational(0));
    rows.push_back(std::move(row));
    rhs.push_back(eqb[r]);
  }
  for (std::size_t r = 0; r < slacks; ++r) {
    auto row = set.le_rows[r];
    row.resize(n + slacks, Rational(0));
    row[n + r] = 1;
    rows.push_back(std::move(row));
    rhs.push_back(set.le_rhs[r]);
  }
  StandardSystem sys;
  sys.num_cols = n + slacks;
  auto reduced = reduce_rows(rows, rhs);
  if (!reduced) {
    sys.consistent = false;
    return sys;
  }
  sys.rows = std::move(reduced->rows);
  sys.rhs = std::move(reduced->rhs);
  return sys;
}

std::uint64_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::uint64_t c = 1;
  for (std::size_t i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

/// Lexicographic rank → combination.
std::vector<std::size_t> unrank_combination(std::uint64_t rank, std::size_t n, std::size_t k) {
  std::vector<std::size_t> out;
  out.reserve(k);
  std::size_t next = 0;
  for (std::size_t slot = 0; slot < k; ++slot) {
    for (std::size_t c = next; c < n; ++c) {
      const std::uint64_t count = binomial(n - c - 1, k - slot - 1);
      if (rank < count) {
        out.push_back(c);
        next = c + 1;
        break;
      }
      rank -= count;
    }
  }
  return out;
}

bool next_combination(std::vector<std::size_t>& comb, std::size_t n) {
  const std::size_t k = comb.size();
  for (std::size_t i = k; i-- > 0;) {
    if (comb[i] < n - k + i) {
      ++comb[i];
      for (std::size_t j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
      return true;
    }
  }
  return false;
}

/// Basic solution for the given column set, if nonsingular and nonnegative.
std::optional<RationalVector> basic_solution(const StandardSystem& sys, const std::vector<std::size_t>& cols,
                                             std::size_t keep) {
  const std::size_t r = sys.rows.size();
  std::vector<RationalVector> m(r, RationalVector(r + 1));
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) m[i][j] = sys.rows[i][cols[j]];
    m[i][r] = sys.rhs[i];
  }
  for (std::size_t col = 0; col < r; ++col) {
    std::size_t piv = col;
    while (piv < r && sgn(m[piv][col]) == 0) ++piv;
    if (piv == r) return std::nullopt;
    std::swap(m[col], m[piv]);
    const Rational inv = 1 / m[col][col];
    for (std::size_t j = col; j <= r; ++j) m[col][j] *= inv;
    for (std::size_t i = 0; i < r; ++i) {
      if (i == col || sgn(m[i][col]) == 0) continue;
      const Rational f = m[i][col];
      for (std::size_t j = col; j <= r; ++j) m[i][j] -= f * m[col][j];
    }
  }
  RationalVector x(sys.num_cols, Rational(0));
  for (std::size_t j = 0; j < r; ++j) {
    if (sgn(m[j][r]) < 0) return std::nullopt;
    x[cols[j]] = m[j][r];
  }
  x.resize(keep);
  return x;
}

void sort_unique(std::vector<RationalVector>& vs) {
  auto less = [](const RationalVector& a, const RationalVector& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                        [](const Rational& x, const Rational& y) { return x < y; });
  };
  std::sort(vs.begin(), vs.end(), less);
  vs.erase(std::unique(vs.begin(), vs.end(),
                       [](const RationalVector& a, const RationalVector& b) {
                         return std::equal(a.begin(), a.end(), b.begin(), b.end(),
                                           [](const Rational& x, const Rational& y) { return x == y; });
                       }),
           vs.end());
}

StandardSystem prepare(const AffineSimplexSet& set, const VertexOptions& opts) {
  if (set.dimension + set.le_rows.size() > opts.dimension_cap) {
    throw InputError("vertex_enumerate: dimension " + std::to_string(set.dimension + set.le_rows.size()) +
                     " exceeds cap " + std::to_string(opts.dimension_cap));
  }
  return standardize(set);
}

}  // namespace

std::vector<RationalVector> vertex_enumerate_serial(const AffineSimplexSet& set, const VertexOptions& opts) {
  const auto sys = prepare(set, opts);
  if (!sys.consistent) return {};
  const std::size_t r = sys.rows.size();
  std::vector<RationalVector> out;
  if (r == 0) {
    out.emplace_back(set.dimension, Rational(0));
    return out;
  }
  if (r > sys.num_cols) return {};
  std::vector<std::size_t> comb(r);
  for (std::size_t i = 0; i < r; ++i) comb[i] = i;
  do {
    if (auto x = basic_solution(sys, comb, set.dimension)) out.push_back(std::move(*x));
  } while (next_combination(comb, sys.num_cols));
  sort_unique(out);
  return out;
}

std::vector<RationalVector> vertex_enumerate(const AffineSimplexSet& set, const VertexOptions& opts) {
  const auto sys = prepare(set, opts);
  if (!sys.consistent) return {};
  const std::size_t r = sys.rows.size();
  if (r == 0) return {RationalVector(set.dimension, Rational(0))};
  if (r > sys.num_cols) return {};
  const std::uint64_t total = binomial(sys.num_cols, r);
  constexpr std::uint64_t kChunk = 256;
  const auto num_chunks = static_cast<std::int64_t>((total + kChunk - 1) / kChunk);

  std::vector<RationalVector> out;
#pragma omp parallel
  {
    std::vector<RationalVector> local;
#pragma omp for schedule(dynamic)
    for (std::int64_t c = 0; c < num_chunks; ++c) {
      const std::uint64_t begin = static_cast<std::uint64_t>(c) * kChunk;
      const std::uint64_t end = std::min(total, begin + kChunk);
      auto comb = unrank_combination(begin, sys.num_cols, r);
      for (std::uint64_t k = begin; k < end; ++k) {
        if (auto x = basic_solution(sys, comb, set.dimension)) local.push_back(std::move(*x));
        next_combination(comb, sys.num_cols);
      }
    }
#pragma omp critical
    out.insert(out.end(), std::make_move_iterator(local.begin()), std::make_move_iterator(local.end()));
  }
  sort_unique(out);
  return out;
}

}  // namespace collarb
