#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "collarb/lp.hpp"
#include "collarb/rational.hpp"

namespace collarb {

enum class Positivity { strict, nonneg };

/// { q ∈ ℝⁿ : A q = b, G q ≤ h, q ≥ 0 [, Σq = 1] }.
///
/// With `on_simplex` the normalization Σq = 1 is implied and need not appear
/// among the rows. Martingale polytopes are built this way; the stacked
/// collective polytope carries one normalization row per agent instead.
struct AffineSimplexSet {
  explicit AffineSimplexSet(std::size_t dimension = 0) : dimension(dimension) {}

  std::size_t dimension;
  std::vector<RationalVector> eq_rows;
  RationalVector eq_rhs;
  std::vector<RationalVector> le_rows;
  RationalVector le_rhs;
  bool on_simplex = true;
  Positivity positivity = Positivity::strict;

  void add_equality(RationalVector row, Rational rhs) {
    eq_rows.push_back(std::move(row));
    eq_rhs.push_back(std::move(rhs));
  }
  void add_inequality(RationalVector row, Rational rhs) {
    le_rows.push_back(std::move(row));
    le_rhs.push_back(std::move(rhs));
  }

  /// All rows with the implied normalization appended.
  std::vector<RationalVector> equality_rows() const;
  RationalVector equality_rhs() const;

  bool contains(const RationalVector& q) const;
  /// Max-norm residual of the affine rows (and negative part of q) for a float point.
  double residual(const std::vector<double>& q) const;
};

/// Rows made linearly independent (exact row echelon). Returns std::nullopt when
/// the system A q = b is inconsistent.
struct ReducedRows {
  std::vector<RationalVector> rows;
  RationalVector rhs;
};
std::optional<ReducedRows> reduce_rows(const std::vector<RationalVector>& rows, const RationalVector& rhs);

struct InteriorPointYes {
  RationalVector point;   ///< strictly positive feasible point
  Rational min_coordinate;
};
struct InteriorPointNo {
  std::optional<FarkasCertificate> farkas;  ///< present when the set is empty
  Rational max_min_coordinate;              ///< the LP optimum max_q min_ω q_ω (≤ 0)
};
using InteriorPointResult = std::variant<InteriorPointYes, InteriorPointNo>;

/// Decides whether the set has a strictly positive point, via max t s.t. q_ω ≥ t.
InteriorPointResult interior_point_exists(const AffineSimplexSet& set);

/// The feasibility LP used above, exposed for certificate checks.
LinearProgram interior_point_lp(const AffineSimplexSet& set);

struct VertexOptions {
  std::size_t dimension_cap = 24;
};

/// All basic feasible solutions of the closure, deduplicated and sorted.
/// Throws InputError when the dimension (plus inequality slacks) exceeds the cap.
std::vector<RationalVector> vertex_enumerate(const AffineSimplexSet& set, const VertexOptions& opts = {});
/// Serial reference for the OpenMP kernel above; identical output.
std::vector<RationalVector> vertex_enumerate_serial(const AffineSimplexSet& set, const VertexOptions& opts = {});

}  // namespace collarb
