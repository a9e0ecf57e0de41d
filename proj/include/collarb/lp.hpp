#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "collarb/rational.hpp"

namespace collarb {

enum class Sense { minimize, maximize };
enum class Relation { less_equal, equal, greater_equal };

struct LinearConstraint {
  RationalVector coeffs;
  Relation relation = Relation::equal;
  Rational rhs;
};

/// Exact-rational linear program
///
///   opt  objectiveᵀx   s.t.  rows,  lower ≤ x ≤ upper.
///
/// Variables default to x ≥ 0. An empty objective means a pure feasibility problem.
struct LinearProgram {
  explicit LinearProgram(std::size_t num_vars = 0)
      : num_vars(num_vars), lower(num_vars, Rational(0)), upper(num_vars) {}

  std::size_t num_vars;
  Sense sense = Sense::minimize;
  RationalVector objective;
  std::vector<LinearConstraint> rows;
  std::vector<std::optional<Rational>> lower;
  std::vector<std::optional<Rational>> upper;

  void set_free(std::size_t j) { lower.at(j).reset(); upper.at(j).reset(); }
  void add_row(RationalVector coeffs, Relation rel, Rational rhs) {
    rows.push_back({std::move(coeffs), rel, std::move(rhs)});
  }
  /// Throws InputError on inconsistent dimensions.
  void check_dimensions() const;
};

/// Multipliers proving infeasibility. With y_r ≥ 0 on ≤ rows, y_r ≤ 0 on ≥ rows
/// and free on = rows, and nonnegative bound multipliers:
///
///   Σ_r y_r a_r − Σ_j lower_j e_j + Σ_j upper_j e_j = 0,
///   Σ_r y_r b_r − Σ_j lower_j l_j + Σ_j upper_j u_j < 0.
struct FarkasCertificate {
  RationalVector row_multipliers;
  RationalVector lower_multipliers;
  RationalVector upper_multipliers;
};

/// Exact check of a Farkas certificate against the program it claims to refute.
bool verify_farkas(const LinearProgram& lp, const FarkasCertificate& cert);

struct LpOptimal {
  RationalVector point;
  Rational value;
};
struct LpInfeasible {
  FarkasCertificate certificate;
};
struct LpUnbounded {
  RationalVector point;  ///< a feasible point
  RationalVector ray;    ///< feasible direction along which the objective improves without bound
};

using LpResult = std::variant<LpOptimal, LpInfeasible, LpUnbounded>;

/// Two-phase dense-tableau simplex in exact arithmetic with Bland's rule.
LpResult lp_solve(const LinearProgram& lp);

bool is_feasible_point(const LinearProgram& lp, const RationalVector& x);

}  // namespace collarb
