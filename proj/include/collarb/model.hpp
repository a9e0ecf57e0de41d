#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "collarb/errors.hpp"
#include "collarb/rational.hpp"
#include "collarb/utility.hpp"

namespace collarb {

/// Random variable on a finite sample space, indexed by outcome.
using RandomVariable = std::vector<Rational>;
/// Sorted outcome indices.
using Atom = std::vector<std::size_t>;
/// Ordered list of disjoint atoms covering the sample space.
using Partition = std::vector<Atom>;
/// Scalar price path: value per (time, outcome).
using AssetPath = std::vector<RandomVariable>;
/// One component per agent.
using ExchangeVector = std::vector<RandomVariable>;

struct SampleSpace {
  std::vector<std::string> outcomes;
  /// The reference probability; strictly positive, sums to one.
  std::vector<Rational> reference_measure;

  std::size_t size() const { return outcomes.size(); }
};

/// Information flow of one agent: partitions[t] for t = 0..T.
struct Filtration {
  std::vector<Partition> partitions;

  std::size_t horizon() const { return partitions.empty() ? 0 : partitions.size() - 1; }
  const Partition& at(std::size_t t) const { return partitions.at(t); }
  const Partition& terminal() const { return partitions.back(); }
};

struct AgentSpec {
  std::string name;
  /// Subjective probability P^i.
  std::vector<Rational> measure;
  Filtration filtration;
  /// Discounted risky assets; the numeraire is implicit.
  std::vector<AssetPath> assets;
  UtilityFunction utility = UtilityFunction::exponential(1);
  RandomVariable endowment;
};

struct MarketModel {
  SampleSpace space;
  std::vector<AgentSpec> agents;
  std::size_t horizon = 0;

  std::size_t num_outcomes() const { return space.size(); }
  std::size_t num_agents() const { return agents.size(); }
};

enum class ExchangeKind { vector_space, convex_cone };

/// Optional preference for the seed exchange used by the beneficial pipeline.
struct SeedHint {
  std::size_t basis_index = 0;
  int sign = 1;
};

/// Finitely generated set of allowed exchanges: the span (vector_space) or the
/// nonnegative hull (convex_cone) of `basis`.
struct ExchangeSpace {
  std::vector<ExchangeVector> basis;
  ExchangeKind kind = ExchangeKind::vector_space;
  bool zero_sum = true;
  /// Asserts that every deterministic zero-sum vector lies in the set.
  bool includes_deterministic = true;
  /// Per-agent sigma-algebra the legs must be measurable for; empty means the
  /// agent's terminal partition.
  std::vector<Partition> measurability;
  std::optional<SeedHint> seed_hint;
};

std::string to_string(ExchangeKind kind);

struct Violation {
  std::string code;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  bool has(const std::string& code) const;
};

/// Lists every broken structural invariant of the model (and of the exchange
/// space when given). Never throws on bad data.
ValidationReport validate_model(const MarketModel& model, const ExchangeSpace* exchange = nullptr);

/// Checks that `partition` is a partition of {0..n-1} into nonempty sorted atoms.
bool is_partition(const Partition& partition, std::size_t n);
/// atom index for every outcome.
std::vector<std::size_t> atom_lookup(const Partition& partition, std::size_t n);
/// True if every atom of `fine` lies inside one atom of `coarse`.
bool refines(const Partition& fine, const Partition& coarse, std::size_t n);
bool is_measurable(std::span<const Rational> x, const Partition& partition);

Partition point_partition(std::size_t n);
Partition trivial_partition(std::size_t n);

/// Sigma-algebra an exchange leg of agent i must be measurable for.
const Partition& exchange_partition(const MarketModel& model, const ExchangeSpace& exchange, std::size_t agent);

/// E_q[x | partition]: constant on each atom, the q-weighted average of x there.
/// Throws InputError when an atom carries zero q-mass.
template <class T>
std::vector<T> conditional_expectation(std::span<const T> x, const Partition& partition, std::span<const T> q) {
  if (x.size() != q.size()) throw InputError("conditional_expectation: size mismatch");
  std::vector<T> out(x.size());
  for (const auto& atom : partition) {
    T mass = 0, weighted = 0;
    for (const auto w : atom) {
      mass += q[w];
      weighted += q[w] * x[w];
    }
    if (mass == 0) throw InputError("conditional_expectation: degenerate conditioning on a zero-mass atom");
    const T value = weighted / mass;
    for (const auto w : atom) out[w] = value;
  }
  return out;
}

/// Per-atom total masses of q, in atom order.
template <class T>
std::vector<T> restrict_measure(std::span<const T> q, const Partition& partition) {
  std::vector<T> out;
  out.reserve(partition.size());
  for (const auto& atom : partition) {
    T mass = 0;
    for (const auto w : atom) {
      if (w >= q.size()) throw InputError("restrict_measure: atom outside sample space");
      mass += q[w];
    }
    out.push_back(mass);
  }
  return out;
}

/// Indicator of an atom.
RandomVariable indicator(const Atom& atom, std::size_t n);
RandomVariable constant_rv(const Rational& c, std::size_t n);

/// Deterministic zero-sum exchange e_j - e_N.
ExchangeVector deterministic_exchange(std::size_t agent, std::size_t num_agents, std::size_t num_outcomes);


/// Coefficients c with Σ_l c_l basis_l = target (c ≥ 0 for cones), if any.
std::optional<RationalVector> exchange_coefficients(const ExchangeSpace& exchange, const ExchangeVector& target);
inline bool exchange_contains(const ExchangeSpace& exchange, const ExchangeVector& target) {
  return exchange_coefficients(exchange, target).has_value();
}
/// Checks ℝ^N_0 ⊆ 𝒴 by membership of every e_j − e_N.
bool contains_deterministic(const ExchangeSpace& exchange, std::size_t num_agents, std::size_t num_outcomes);

/// Σ_l c_l basis_l.
ExchangeVector combine(const ExchangeSpace& exchange, std::span<const Rational> coeffs, std::size_t num_agents,
                       std::size_t num_outcomes);

}  // namespace collarb
