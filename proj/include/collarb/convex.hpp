#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "collarb/polytope.hpp"

namespace collarb {

/// Smooth convex function on the positive orthant with first and second order
/// oracles. `value` returns +inf outside the function's domain.
struct ConvexObjective {
  std::function<double(std::span<const double>)> value;
  std::function<Eigen::VectorXd(std::span<const double>)> gradient;
  std::function<Eigen::MatrixXd(std::span<const double>)> hessian;
};

/// f(q) = Σ_ω φ_ω(q_ω) built from per-coordinate value/derivative/curvature.
struct SeparableTerm {
  std::function<double(std::size_t, double)> value;
  std::function<double(std::size_t, double)> derivative;
  std::function<double(std::size_t, double)> curvature;
};
ConvexObjective separable_objective(SeparableTerm term);

struct ConvexOptions {
  double tol = 1e-10;
  int max_iterations = 100'000;
  /// Strictly positive starting point; defaults to the LP interior point.
  std::optional<std::vector<double>> start;
};

struct ConvexSolution {
  std::vector<double> point;
  double value = 0;
  /// Max-norm of primal feasibility, dual feasibility and complementarity.
  double kkt_residual = 0;
  /// xᵀs for the reported multipliers.
  double duality_gap = 0;
  /// Some coordinate of the minimizer is zero.
  bool boundary = false;
  std::vector<double> eq_multipliers;   ///< y in ∇f = Aᵀy + s (rows of reduce_rows order)
  std::vector<double> bound_multipliers;  ///< s
  int iterations = 0;
};

/// Minimizes f over { A q = b, q ≥ 0 [, Σq = 1] }. Inequality rows are not supported.
/// Throws InputError when the set has no strictly positive point and NumericError
/// when the KKT residual does not reach `tol` within the iteration cap.
ConvexSolution convex_minimize(const AffineSimplexSet& set, const ConvexObjective& f, const ConvexOptions& opts = {});

}  // namespace collarb
