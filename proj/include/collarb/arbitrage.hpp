#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "collarb/lp.hpp"
#include "collarb/model.hpp"
#include "collarb/polytope.hpp"

namespace collarb {

/// One-step increment 1_a · (S_t − S_{t−1}) of asset k on atom a of ℱ_{t−1}.
struct Increment {
  std::size_t time = 0;
  std::size_t atom = 0;
  std::size_t asset = 0;
};

/// Linearly independent terminal payoffs spanning {(H·S)_T : H predictable}.
struct PayoffSpace {
  std::size_t agent = 0;
  std::vector<RandomVariable> basis;
  std::vector<Increment> sources;  ///< the increment each basis element came from
  std::size_t dimension() const { return basis.size(); }
};

PayoffSpace payoff_space(const MarketModel& model, std::size_t agent);

/// Per-agent trading payoffs k^i plus an exchange Y with k^i + Y^i ≥ 0, not all zero.
struct ArbitrageWitness {
  std::vector<std::size_t> agents;                    ///< agent index of each entry below
  std::vector<RationalVector> strategy_coefficients;  ///< per agent, in payoff-basis order
  std::vector<RandomVariable> payoffs;                ///< k^i
  RationalVector exchange_coefficients;               ///< empty for individual arbitrage
  ExchangeVector exchange;                            ///< Y (zeros for individual arbitrage)
  std::vector<RandomVariable> totals;                 ///< k^i + Y^i
};

struct ArbitrageResult {
  bool holds = true;  ///< no (collective) arbitrage
  std::optional<ArbitrageWitness> witness;
  std::optional<FarkasCertificate> certificate;  ///< refutes the arbitrage LP when holds
};

ArbitrageResult check_NA(const MarketModel& model, std::size_t agent);
ArbitrageResult check_NCA(const MarketModel& model, const ExchangeSpace& exchange);

/// Checks the payoff relation k^i + Y^i = totals and the sign conditions exactly.
bool verify_witness(const MarketModel& model, const ExchangeSpace* exchange, const ArbitrageWitness& witness);

enum class MeasureSetKind { martingale, collective, common };

/// Affine description of a set of (stacked) martingale measures.
///
/// On a finite sample space every local martingale bounded below is a true
/// martingale, so the local-martingale variants of these sets coincide with
/// the ones built here.
struct MeasurePolytope {
  MeasureSetKind kind = MeasureSetKind::martingale;
  std::optional<std::size_t> agent;
  std::size_t num_outcomes = 0;
  std::size_t num_blocks = 1;  ///< agents stacked in the variable vector
  AffineSimplexSet set;

  std::string description() const;
  /// Block i of a stacked point.
  template <class T>
  std::vector<T> block(const std::vector<T>& point, std::size_t i) const {
    return std::vector<T>(point.begin() + static_cast<std::ptrdiff_t>(i * num_outcomes),
                          point.begin() + static_cast<std::ptrdiff_t>((i + 1) * num_outcomes));
  }
};

/// Martingale rows Σ_{ω∈a} q_ω (S_t − S_{t−1})(ω) = 0 for every t, atom a ∈ ℱ_{t−1}, asset.
MeasurePolytope martingale_polytope(const MarketModel& model, std::size_t agent);
/// Stacked (q^1,…,q^N): each agent's martingale rows and normalization, plus
/// Σ_i E_{q^i}[Y^i] ≤ 0 per exchange generator (= 0 for vector spaces).
MeasurePolytope collective_martingale_polytope(const MarketModel& model, const ExchangeSpace& exchange);
/// Single q that is a martingale measure for every agent at once.
MeasurePolytope common_martingale_polytope(const MarketModel& model);

struct FtapReport {
  bool no_arbitrage = false;
  bool equivalent_measure = false;
  std::optional<ArbitrageWitness> witness;
  std::optional<RationalVector> measure;  ///< strictly positive point when it exists
};

/// NA_i against existence of an equivalent martingale measure.
/// Throws InternalInconsistency if the two answers disagree.
FtapReport check_FTAP(const MarketModel& model, std::size_t agent);
/// NCA(𝒴) against nonemptiness of the equivalent collective martingale measures.
/// Requires ℝ^N_0 ⊆ 𝒴 (InputError otherwise).
FtapReport check_collective_FTAP(const MarketModel& model, const ExchangeSpace& exchange);

/// Every ℱ^i_T-measurable payoff is replicable from cash and trading.
/// Throws InputError when NA_i fails.
bool check_completeness(const MarketModel& model, std::size_t agent);

}  // namespace collarb
