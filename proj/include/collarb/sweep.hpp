#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "collarb/beneficial.hpp"
#include "collarb/model_io.hpp"

namespace collarb {

enum class ModelFamily {
  generic,              ///< random trees, possibly with arbitrage; zero-sum pair or cone exchanges
  deterministic_only,   ///< arbitrage-free trees, exchanges = deterministic zero-sum transfers
  twin_complete,        ///< every agent trades the same complete binomial tree
  identical_beliefs,    ///< no assets, common P, deterministic endowments
  arbitrage_free,       ///< like generic but without perturbations
};

std::string to_string(ModelFamily family);

struct RandomModelOptions {
  std::size_t max_outcomes = 8;
  std::size_t max_horizon = 2;
  std::size_t max_agents = 3;
  ModelFamily family = ModelFamily::generic;
};

/// Deterministic in (seed, options). Assets are built as martingales under a
/// random measure so that no-arbitrage holds unless the family perturbs them.
ModelDocument random_model(std::uint64_t seed, const RandomModelOptions& opts = {});

struct FtapRecord {
  std::uint64_t seed = 0;
  std::size_t agents = 0;
  std::size_t arbitrage_free_agents = 0;
  bool collective_no_arbitrage = false;
  bool agree = false;
  std::string error;
};

/// check_FTAP for every agent and check_collective_FTAP per model.
std::vector<FtapRecord> ftap_sweep(const std::vector<std::uint64_t>& seeds, const RandomModelOptions& opts);
std::vector<FtapRecord> ftap_sweep_serial(const std::vector<std::uint64_t>& seeds, const RandomModelOptions& opts);

struct SearchOptions {
  int samples = 200;
  double threshold = 1e-9;
};

/// Samples exchanges from 𝒴 (unit sphere of basis coefficients, random scale in
/// [1e-3, 1]) and reports whether any improves every agent by more than the threshold.
bool random_improvement_found(const MarketModel& model, const ExchangeSpace& exchange, std::mt19937_64& rng,
                              const SearchOptions& opts = {});

struct TheoremRecord {
  std::uint64_t seed = 0;
  ModelFamily family = ModelFamily::generic;
  bool skipped = false;  ///< arbitrage or unbounded utility: hypotheses fail
  bool violated = false;
  bool certificate = false;
  bool certificate_verified = false;
  bool search_found_improvement = false;
  double max_gap = 0;
  std::string error;
  bool consistent() const {
    return error.empty() && (skipped || (violated == certificate && (!certificate || certificate_verified) &&
                                         (violated || !search_found_improvement)));
  }
};

/// Pipeline per model plus the randomized cross-check on polarity-satisfied instances.
std::vector<TheoremRecord> theorem_sweep(const std::vector<std::uint64_t>& seeds, const RandomModelOptions& opts,
                                         const SearchOptions& search = {});
std::vector<TheoremRecord> theorem_sweep_serial(const std::vector<std::uint64_t>& seeds, const RandomModelOptions& opts,
                                                const SearchOptions& search = {});

}  // namespace collarb
