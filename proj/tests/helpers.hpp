#pragma once

#include <doctest.h>

#include <initializer_list>
#include <random>

#include "collarb/fixtures.hpp"
#include "collarb/model.hpp"

namespace testing {

using namespace collarb;

inline Rational q(const char* s) { return parse_rational(s); }

inline RationalVector qs(std::initializer_list<const char*> values) {
  RationalVector out;
  for (const char* v : values) out.push_back(parse_rational(v));
  return out;
}

/// One-period market on n outcomes with the given terminal prices of one asset.
inline MarketModel one_period(const Rational& s0, const RationalVector& s1, RationalVector measure = {}) {
  const std::size_t n = s1.size();
  MarketModel m;
  for (std::size_t w = 0; w < n; ++w) m.space.outcomes.push_back("w" + std::to_string(w + 1));
  m.space.reference_measure.assign(n, Rational(1, static_cast<long>(n)));
  m.horizon = 1;
  AgentSpec a;
  a.name = "agent";
  a.measure = measure.empty() ? m.space.reference_measure : measure;
  a.filtration.partitions = {trivial_partition(n), point_partition(n)};
  a.assets.push_back({constant_rv(s0, n), s1});
  a.utility = UtilityFunction::exponential(1);
  a.endowment = constant_rv(0, n);
  m.agents.push_back(a);
  return m;
}

/// Agent with no traded assets.
inline AgentSpec idle_agent(const RationalVector& measure, UtilityFunction u, RandomVariable endowment) {
  const std::size_t n = measure.size();
  AgentSpec a;
  a.measure = measure;
  a.filtration.partitions = {trivial_partition(n), point_partition(n)};
  a.utility = std::move(u);
  a.endowment = std::move(endowment);
  return a;
}

inline MarketModel idle_market(const std::vector<AgentSpec>& agents) {
  MarketModel m;
  const std::size_t n = agents.front().measure.size();
  for (std::size_t w = 0; w < n; ++w) m.space.outcomes.push_back("w" + std::to_string(w + 1));
  m.space.reference_measure.assign(n, Rational(1, static_cast<long>(n)));
  m.horizon = 1;
  m.agents = agents;
  return m;
}

inline RationalVector random_probability(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<long> d(1, 9);
  std::vector<long> w(n);
  long total = 0;
  for (auto& x : w) total += (x = d(rng));
  RationalVector p;
  for (const auto x : w) {
    p.emplace_back(x, total);
    p.back().canonicalize();
  }
  return p;
}

inline std::vector<double> doubles(const RationalVector& v) { return to_double(v); }

}  // namespace testing
