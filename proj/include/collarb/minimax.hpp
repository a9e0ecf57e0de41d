#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "collarb/errors.hpp"
#include "collarb/model.hpp"

namespace collarb {

/// The agent can reach u(+∞): the indirect utility is not below the utility's supremum.
class UnboundedUtility : public InputError {
 public:
  using InputError::InputError;
};

/// U^i(X^i; Y^i) = sup_k E_{P^i}[u(X^i + k + Y^i)] over replicable payoffs k.
struct IndirectUtility {
  double value = 0;
  std::vector<double> coefficients;  ///< optimal strategy in payoff-basis coordinates
  double gradient_norm = 0;          ///< max-norm of the first-order condition at the optimum
  bool unbounded_utility = false;    ///< value reached u(+∞)
  int iterations = 0;
};

struct PrimalOptions {
  double tol = 1e-13;
  int max_iterations = 500;
};

/// `leg` is Y^i per outcome (empty means zero). Never throws for unbounded_utility;
/// throws InputError when no strategy keeps wealth inside the utility's domain.
IndirectUtility indirect_utility(const MarketModel& model, std::size_t agent, std::span<const double> leg = {},
                                 const PrimalOptions& opts = {});

struct MinimaxOptions {
  double tol = 1e-10;
  /// Optional strictly positive start in unnormalized-measure coordinates (λQ).
  std::optional<std::vector<double>> start;
};

/// Minimax pair (λ_X, Q_X) of one agent with its primal/dual certificates.
struct MinimaxSolution {
  std::size_t agent = 0;
  double lambda = 0;
  std::vector<double> measure;                 ///< Q_X
  std::optional<RationalVector> exact_measure;  ///< snapped Q_X, present only if exactly a martingale measure
  bool equivalent = false;
  bool boundary = false;
  double dual_value = 0;
  double primal_value = 0;
  double gap = 0;
  double kkt_residual = 0;
};

/// Minimizes λE_Q[X] + E_P[Φ(λ dQ/dP)] jointly over λ > 0 and martingale measures Q.
///
/// Solved in μ = λQ, where the objective Σ_ω μ_ω X_ω + p_ω Φ(μ_ω / p_ω) is jointly
/// convex over the cone {μ ≥ 0 : μ annihilates every replicable payoff}; λ = Σμ
/// and Q = μ/λ are read off afterwards. Throws UnboundedUtility when the optimum
/// collapses to μ = 0, InputError when the market admits arbitrage.
MinimaxSolution solve_minimax(const MarketModel& model, std::size_t agent, const MinimaxOptions& opts = {});

/// |U(X;0) − dual value|.
double duality_gap(const MinimaxSolution& sol);
double duality_gap(const MarketModel& model, std::size_t agent);

/// λ_X E_{Q_X}[Y]: derivative of α ↦ U(X; αY) at 0.
double directional_derivative(const MinimaxSolution& sol, std::span<const double> leg);

/// Per-agent solves, run concurrently.
std::vector<MinimaxSolution> solve_minimax_all(const MarketModel& model, const MinimaxOptions& opts = {});

}  // namespace collarb
