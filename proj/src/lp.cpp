#include "collarb/lp.hpp"

#include <algorithm>

#include "collarb/errors.hpp"

namespace collarb {

void LinearProgram::check_dimensions() const {
  if (lower.size() != num_vars || upper.size() != num_vars) {
    throw InputError("LinearProgram: bound vectors do not match num_vars");
  }
  if (!objective.empty() && objective.size() != num_vars) {
    throw InputError("LinearProgram: objective length does not match num_vars");
  }
  for (const auto& row : rows) {
    if (row.coeffs.size() != num_vars) throw InputError("LinearProgram: row length does not match num_vars");
  }
  for (std::size_t j = 0; j < num_vars; ++j) {
    if (lower[j] && upper[j] && *lower[j] > *upper[j]) {
      // Contradictory bounds are legal input; the solver reports infeasibility.
    }
  }
}

namespace {

enum class VarForm { shifted_lower, reflected_upper, split_free };

struct VarMap {
  VarForm form;
  std::size_t col = 0;
  std::size_t col_neg = 0;      // split_free only
  std::size_t bound_row = 0;    // shifted_lower with finite upper
  bool has_bound_row = false;
  Rational shift;               // lower or upper bound
};

/// Dense tableau with the reduced-cost row stored last.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : m_(rows), n_(cols), t_(rows + 1, RationalVector(cols + 1)) {}

  Rational& at(std::size_t i, std::size_t j) { return t_[i][j]; }
  const Rational& at(std::size_t i, std::size_t j) const { return t_[i][j]; }
  Rational& rhs(std::size_t i) { return t_[i][n_]; }
  const Rational& rhs(std::size_t i) const { return t_[i][n_]; }
  RationalVector& cost_row() { return t_[m_]; }
  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }

  void pivot(std::size_t r, std::size_t c) {
    const Rational inv = 1 / t_[r][c];
    auto& prow = t_[r];
    for (auto& v : prow) {
      if (sgn(v) != 0) v *= inv;
    }
    std::vector<std::size_t> nz;
    nz.reserve(n_ + 1);
    for (std::size_t j = 0; j <= n_; ++j) {
      if (sgn(prow[j]) != 0) nz.push_back(j);
    }
    Rational f;
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == r || sgn(t_[i][c]) == 0) continue;
      f = t_[i][c];
      auto& row = t_[i];
      for (const auto j : nz) row[j] -= f * prow[j];
    }
  }

  void erase_row(std::size_t r) {
    t_.erase(t_.begin() + static_cast<std::ptrdiff_t>(r));
    --m_;
  }

 private:
  std::size_t m_, n_;
  std::vector<RationalVector> t_;
};

enum class PivotOutcome { optimal, unbounded };

/// Bland's rule: smallest entering index with negative reduced cost, ties in the
/// ratio test broken by smallest basic variable index.
PivotOutcome run_simplex(Tableau& tab, std::vector<std::size_t>& basis, const std::vector<bool>& allowed,
                         std::size_t* unbounded_col) {
  const std::size_t m = tab.rows();
  for (;;) {
    std::size_t enter = tab.cols();
    for (std::size_t j = 0; j < tab.cols(); ++j) {
      if (allowed[j] && sgn(tab.cost_row()[j]) < 0) {
        enter = j;
        break;
      }
    }
    if (enter == tab.cols()) return PivotOutcome::optimal;

    std::size_t leave = m;
    Rational best_ratio;
    for (std::size_t i = 0; i < m; ++i) {
      if (sgn(tab.at(i, enter)) <= 0) continue;
      Rational ratio = tab.rhs(i) / tab.at(i, enter);
      if (leave == m || ratio < best_ratio || (ratio == best_ratio && basis[i] < basis[leave])) {
        leave = i;
        best_ratio = std::move(ratio);
      }
    }
    if (leave == m) {
      *unbounded_col = enter;
      return PivotOutcome::unbounded;
    }
    tab.pivot(leave, enter);
    basis[leave] = enter;
  }
}

}  // namespace

LpResult lp_solve(const LinearProgram& lp) {
  lp.check_dimensions();
  const std::size_t n = lp.num_vars;

  // Standard form: min cᵀz, A z = b, z ≥ 0.
  std::vector<VarMap> vars(n);
  std::size_t num_struct = 0;
  std::size_t num_bound_rows = 0;
  for (std::size_t j = 0; j < n; ++j) {
    auto& v = vars[j];
    if (lp.lower[j]) {
      v.form = VarForm::shifted_lower;
      v.shift = *lp.lower[j];
      v.col = num_struct++;
      if (lp.upper[j]) {
        v.has_bound_row = true;
        v.bound_row = lp.rows.size() + num_bound_rows++;
      }
    } else if (lp.upper[j]) {
      v.form = VarForm::reflected_upper;
      v.shift = *lp.upper[j];
      v.col = num_struct++;
    } else {
      v.form = VarForm::split_free;
      v.col = num_struct++;
      v.col_neg = num_struct++;
    }
  }

  const std::size_t m = lp.rows.size() + num_bound_rows;
  std::vector<Relation> rel(m);
  std::vector<RationalVector> a(m, RationalVector(num_struct));
  RationalVector b(m);
  for (std::size_t r = 0; r < lp.rows.size(); ++r) {
    const auto& row = lp.rows[r];
    rel[r] = row.relation;
    b[r] = row.rhs;
    for (std::size_t j = 0; j < n; ++j) {
      const auto& coef = row.coeffs[j];
      if (sgn(coef) == 0) continue;
      const auto& v = vars[j];
      switch (v.form) {
        case VarForm::shifted_lower:
          a[r][v.col] = coef;
          b[r] -= coef * v.shift;
          break;
        case VarForm::reflected_upper:
          a[r][v.col] = -coef;
          b[r] -= coef * v.shift;
          break;
        case VarForm::split_free:
          a[r][v.col] = coef;
          a[r][v.col_neg] = -coef;
          break;
      }
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    const auto& v = vars[j];
    if (!v.has_bound_row) continue;
    rel[v.bound_row] = Relation::less_equal;
    a[v.bound_row][v.col] = 1;
    b[v.bound_row] = *lp.upper[j] - *lp.lower[j];
  }

  std::vector<std::size_t> slack_col(m, SIZE_MAX);
  std::size_t cols = num_struct;
  for (std::size_t i = 0; i < m; ++i) {
    if (rel[i] != Relation::equal) slack_col[i] = cols++;
  }
  const std::size_t first_art = cols;
  cols += m;

  std::vector<int> row_sign(m, 1);
  Tableau tab(m, cols);
  for (std::size_t i = 0; i < m; ++i) {
    row_sign[i] = sgn(b[i]) < 0 ? -1 : 1;
    for (std::size_t j = 0; j < num_struct; ++j) {
      if (sgn(a[i][j]) != 0) tab.at(i, j) = row_sign[i] > 0 ? a[i][j] : Rational(-a[i][j]);
    }
    if (slack_col[i] != SIZE_MAX) {
      const int s = rel[i] == Relation::less_equal ? 1 : -1;
      tab.at(i, slack_col[i]) = s * row_sign[i];
    }
    tab.at(i, first_art + i) = 1;
    tab.rhs(i) = row_sign[i] > 0 ? b[i] : Rational(-b[i]);
  }

  // Phase 1 reduced costs: 1 on artificials minus the sum of rows.
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = first_art + i;
  {
    auto& cost = tab.cost_row();
    for (std::size_t j = 0; j <= cols; ++j) {
      Rational s = 0;
      for (std::size_t i = 0; i < m; ++i) s += tab.at(i, j);
      cost[j] = -s;
    }
    for (std::size_t i = 0; i < m; ++i) cost[first_art + i] += 1;
  }
  std::vector<bool> allowed(cols, true);
  std::size_t ucol = 0;
  run_simplex(tab, basis, allowed, &ucol);

  const Rational phase1_value = -tab.cost_row()[cols];
  if (sgn(phase1_value) > 0) {
    // π_k = 1 − (reduced cost of artificial k); Aᵀπ ≤ 0 and bᵀπ > 0 in the sign-normalized system.
    FarkasCertificate cert;
    cert.row_multipliers.assign(lp.rows.size(), Rational(0));
    cert.lower_multipliers.assign(n, Rational(0));
    cert.upper_multipliers.assign(n, Rational(0));
    RationalVector pi_tilde(m);
    for (std::size_t k = 0; k < m; ++k) {
      pi_tilde[k] = (1 - tab.cost_row()[first_art + k]) * row_sign[k];
    }
    for (std::size_t r = 0; r < lp.rows.size(); ++r) cert.row_multipliers[r] = -pi_tilde[r];
    for (std::size_t j = 0; j < n; ++j) {
      Rational g = 0;
      for (std::size_t r = 0; r < lp.rows.size(); ++r) g += cert.row_multipliers[r] * lp.rows[r].coeffs[j];
      const auto& v = vars[j];
      switch (v.form) {
        case VarForm::shifted_lower: {
          Rational yu = v.has_bound_row ? Rational(-pi_tilde[v.bound_row]) : Rational(0);
          cert.lower_multipliers[j] = g + yu;
          cert.upper_multipliers[j] = yu;
          break;
        }
        case VarForm::reflected_upper: cert.upper_multipliers[j] = -g; break;
        case VarForm::split_free: break;
      }
    }
    return LpInfeasible{std::move(cert)};
  }

  // Drive zero-level artificials out of the basis; drop redundant rows.
  for (std::size_t i = 0; i < tab.rows();) {
    if (basis[i] < first_art) {
      ++i;
      continue;
    }
    std::size_t enter = first_art;
    for (std::size_t j = 0; j < first_art; ++j) {
      if (sgn(tab.at(i, j)) != 0) {
        enter = j;
        break;
      }
    }
    if (enter == first_art) {
      tab.erase_row(i);
      basis.erase(basis.begin() + static_cast<std::ptrdiff_t>(i));
      continue;
    }
    tab.pivot(i, enter);
    basis[i] = enter;
    ++i;
  }
  for (std::size_t j = first_art; j < cols; ++j) allowed[j] = false;

  // Phase 2 costs over structural columns.
  RationalVector c(cols, Rational(0));
  Rational c_offset = 0;
  const bool has_objective = !lp.objective.empty();
  if (has_objective) {
    for (std::size_t j = 0; j < n; ++j) {
      Rational coef = lp.sense == Sense::maximize ? Rational(-lp.objective[j]) : lp.objective[j];
      const auto& v = vars[j];
      switch (v.form) {
        case VarForm::shifted_lower: c[v.col] = coef; c_offset += coef * v.shift; break;
        case VarForm::reflected_upper: c[v.col] = -coef; c_offset += coef * v.shift; break;
        case VarForm::split_free: c[v.col] = coef; c[v.col_neg] = -coef; break;
      }
    }
  }
  {
    auto& cost = tab.cost_row();
    for (std::size_t j = 0; j <= cols; ++j) cost[j] = j < cols ? c[j] : Rational(0);
    for (std::size_t i = 0; i < tab.rows(); ++i) {
      const Rational cb = c[basis[i]];
      if (sgn(cb) == 0) continue;
      for (std::size_t j = 0; j <= cols; ++j) {
        if (sgn(tab.at(i, j)) != 0) cost[j] -= cb * tab.at(i, j);
      }
    }
  }

  const auto outcome = has_objective ? run_simplex(tab, basis, allowed, &ucol) : PivotOutcome::optimal;

  RationalVector z(cols, Rational(0));
  for (std::size_t i = 0; i < tab.rows(); ++i) z[basis[i]] = tab.rhs(i);
  auto to_original = [&](const RationalVector& zz, bool direction) {
    RationalVector x(n);
    for (std::size_t j = 0; j < n; ++j) {
      const auto& v = vars[j];
      switch (v.form) {
        case VarForm::shifted_lower: x[j] = direction ? zz[v.col] : Rational(v.shift + zz[v.col]); break;
        case VarForm::reflected_upper: x[j] = direction ? Rational(-zz[v.col]) : Rational(v.shift - zz[v.col]); break;
        case VarForm::split_free: x[j] = zz[v.col] - zz[v.col_neg]; break;
      }
    }
    return x;
  };
  RationalVector x = to_original(z, false);

  if (outcome == PivotOutcome::unbounded) {
    RationalVector d(cols, Rational(0));
    d[ucol] = 1;
    for (std::size_t i = 0; i < tab.rows(); ++i) d[basis[i]] = -tab.at(i, ucol);
    return LpUnbounded{std::move(x), to_original(d, true)};
  }
  Rational value = 0;
  if (has_objective) {
    for (std::size_t j = 0; j < n; ++j) value += lp.objective[j] * x[j];
  }
  (void)c_offset;
  return LpOptimal{std::move(x), std::move(value)};
}

bool verify_farkas(const LinearProgram& lp, const FarkasCertificate& cert) {
  const std::size_t n = lp.num_vars;
  if (cert.row_multipliers.size() != lp.rows.size() || cert.lower_multipliers.size() != n ||
      cert.upper_multipliers.size() != n) {
    return false;
  }
  RationalVector g(n, Rational(0));
  Rational rhs = 0;
  for (std::size_t r = 0; r < lp.rows.size(); ++r) {
    const auto& y = cert.row_multipliers[r];
    const auto rel = lp.rows[r].relation;
    if (rel == Relation::less_equal && sgn(y) < 0) return false;
    if (rel == Relation::greater_equal && sgn(y) > 0) return false;
    for (std::size_t j = 0; j < n; ++j) g[j] += y * lp.rows[r].coeffs[j];
    rhs += y * lp.rows[r].rhs;
  }
  for (std::size_t j = 0; j < n; ++j) {
    const auto& yl = cert.lower_multipliers[j];
    const auto& yu = cert.upper_multipliers[j];
    if (sgn(yl) < 0 || sgn(yu) < 0) return false;
    if (sgn(yl) > 0) {
      if (!lp.lower[j]) return false;
      rhs -= yl * *lp.lower[j];
    }
    if (sgn(yu) > 0) {
      if (!lp.upper[j]) return false;
      rhs += yu * *lp.upper[j];
    }
    if (g[j] - yl + yu != 0) return false;
  }
  return sgn(rhs) < 0;
}

bool is_feasible_point(const LinearProgram& lp, const RationalVector& x) {
  if (x.size() != lp.num_vars) return false;
  for (std::size_t j = 0; j < lp.num_vars; ++j) {
    if (lp.lower[j] && x[j] < *lp.lower[j]) return false;
    if (lp.upper[j] && x[j] > *lp.upper[j]) return false;
  }
  for (const auto& row : lp.rows) {
    const Rational lhs = dot(row.coeffs, x);
    switch (row.relation) {
      case Relation::less_equal: if (lhs > row.rhs) return false; break;
      case Relation::equal: if (lhs != row.rhs) return false; break;
      case Relation::greater_equal: if (lhs < row.rhs) return false; break;
    }
  }
  return true;
}

}  // namespace collarb
