#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "collarb/minimax.hpp"
#include "collarb/model.hpp"

namespace collarb {

/// Σ_i E_{Q^i}[Y^i] on every generator of 𝒴.
struct PolarityReport {
  std::vector<double> values;
  std::optional<RationalVector> exact_values;  ///< when every minimax measure is exact
  double max_violation = 0;                    ///< best achievable value after sign choice
  std::optional<std::size_t> violating_index;
  int violating_sign = 1;
  std::optional<ExchangeVector> violating_Y;
  bool violated() const { return violating_index.has_value(); }
};

struct PolarityOptions {
  /// Decision threshold when exact measures are unavailable.
  double threshold = 1e-9;
  /// Tolerance of the minimax solves run by the pipeline.
  double solver_tol = 1e-10;
};

/// A generator violates polarity when its value is nonzero (vector space, either
/// sign) or positive (cone). The seed is the generator with the largest value
/// after sign choice, ties by basis order, unless the exchange carries a seed
/// hint naming a violating generator.
PolarityReport polarity_check(const MarketModel& model, const ExchangeSpace& exchange,
                              const std::vector<MinimaxSolution>& minimax, const PolarityOptions& opts = {});

struct Candidate {
  ExchangeVector y_hat;
  RationalVector shifts;             ///< Ŷ^i − Y^i (constants, summing to zero)
  std::vector<double> expectations;  ///< E_{Q^i}[Ŷ^i]
  std::optional<Rational> exact_common_value;
};

/// Ŷ^i = Y^i + (1/N) Σ_j E_{Q^j}[Y^j] − E_{Q^i}[Y^i]. Throws InputError when Ŷ ∉ 𝒴.
Candidate construct_candidate(const ExchangeSpace& exchange, const std::vector<MinimaxSolution>& minimax,
                              const ExchangeVector& y);

struct LineSearchResult {
  double alpha = 0;
  std::vector<double> before;
  std::vector<double> after;
};

/// Halves α from 1 until every agent gains more than 1e-10·(1 + |U^i(X;0)|).
/// Throws InputError if some directional derivative is not positive and
/// NumericError when α falls below 1e-12.
LineSearchResult line_search_alpha(const MarketModel& model, const std::vector<MinimaxSolution>& minimax,
                                   const ExchangeVector& y_hat);

struct BeneficialCertificate {
  std::size_t seed_index = 0;
  int seed_sign = 1;
  ExchangeVector y;
  Candidate candidate;
  double alpha = 0;
  std::vector<double> before;
  std::vector<double> after;
  std::vector<double> derivatives;  ///< λ_i E_{Q^i}[Ŷ^i]
  bool strict = false;
};

struct BeneficialOutcome {
  std::vector<MinimaxSolution> minimax;
  PolarityReport polarity;
  std::optional<BeneficialCertificate> certificate;  ///< absent exactly when polarity holds
};

/// Minimax vector → polarity → candidate → α̂. Requires ℝ^N_0 ⊆ 𝒴.
BeneficialOutcome beneficial_pipeline(const MarketModel& model, const ExchangeSpace& exchange,
                                      const PolarityOptions& opts = {});

/// Exact re-check of a certificate: Ŷ ∈ 𝒴 and strict gains at α̂.
bool verify_certificate(const MarketModel& model, const ExchangeSpace& exchange, const BeneficialCertificate& cert);

struct ZeroMarketReport {
  bool direct = false;    ///< some generator has Σ_i E_{P^i}[Y^i] > 0 after sign choice
  bool pipeline = false;  ///< the pipeline produced a certificate
  std::optional<std::size_t> direct_index;
  int direct_sign = 1;
};

/// Without traded assets the minimax measures are the P^i, so the pipeline must
/// agree with the direct test. Throws InputError when some agent can trade or
/// has a random endowment, InternalInconsistency on disagreement.
ZeroMarketReport check_corollary_zero_market(const MarketModel& model, const ExchangeSpace& exchange);

}  // namespace collarb
