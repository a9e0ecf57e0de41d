#include "collarb/model.hpp"

#include <algorithm>

#include "collarb/lp.hpp"

namespace collarb {

std::string to_string(ExchangeKind kind) {
  return kind == ExchangeKind::vector_space ? "vector_space" : "convex_cone";
}

bool ValidationReport::has(const std::string& code) const {
  return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.code == code; });
}

bool is_partition(const Partition& partition, std::size_t n) {
  std::vector<int> seen(n, 0);
  for (const auto& atom : partition) {
    if (atom.empty()) return false;
    for (std::size_t k = 0; k < atom.size(); ++k) {
      if (atom[k] >= n) return false;
      if (k > 0 && atom[k] <= atom[k - 1]) return false;
      ++seen[atom[k]];
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; });
}

std::vector<std::size_t> atom_lookup(const Partition& partition, std::size_t n) {
  std::vector<std::size_t> out(n, SIZE_MAX);
  for (std::size_t a = 0; a < partition.size(); ++a) {
    for (const auto w : partition[a]) {
      if (w < n) out[w] = a;
    }
  }
  return out;
}

bool refines(const Partition& fine, const Partition& coarse, std::size_t n) {
  const auto coarse_of = atom_lookup(coarse, n);
  for (const auto& atom : fine) {
    for (const auto w : atom) {
      if (coarse_of[w] != coarse_of[atom.front()]) return false;
    }
  }
  return true;
}

bool is_measurable(std::span<const Rational> x, const Partition& partition) {
  for (const auto& atom : partition) {
    for (const auto w : atom) {
      if (w >= x.size() || x[w] != x[atom.front()]) return false;
    }
  }
  return true;
}

Partition point_partition(std::size_t n) {
  Partition p;
  for (std::size_t w = 0; w < n; ++w) p.push_back({w});
  return p;
}

Partition trivial_partition(std::size_t n) {
  Atom all(n);
  for (std::size_t w = 0; w < n; ++w) all[w] = w;
  return {all};
}

RandomVariable indicator(const Atom& atom, std::size_t n) {
  RandomVariable x(n, Rational(0));
  for (const auto w : atom) x.at(w) = 1;
  return x;
}

RandomVariable constant_rv(const Rational& c, std::size_t n) { return RandomVariable(n, c); }

ExchangeVector deterministic_exchange(std::size_t agent, std::size_t num_agents, std::size_t num_outcomes) {
  ExchangeVector y(num_agents, RandomVariable(num_outcomes, Rational(0)));
  if (agent + 1 == num_agents) return y;
  y[agent] = constant_rv(1, num_outcomes);
  y[num_agents - 1] = constant_rv(-1, num_outcomes);
  return y;
}

const Partition& exchange_partition(const MarketModel& model, const ExchangeSpace& exchange, std::size_t agent) {
  if (agent < exchange.measurability.size() && !exchange.measurability[agent].empty()) {
    return exchange.measurability[agent];
  }
  return model.agents.at(agent).filtration.terminal();
}

namespace {

void check_probability(const std::vector<Rational>& p, std::size_t n, const std::string& who, ValidationReport& report) {
  if (p.size() != n) {
    report.violations.push_back({"wrong_size", who + ": measure has " + std::to_string(p.size()) + " entries, expected " + std::to_string(n)});
    return;
  }
  Rational total = 0;
  bool positive = true;
  for (const auto& v : p) {
    total += v;
    if (sgn(v) <= 0) positive = false;
  }
  if (total != 1) report.violations.push_back({"measure_not_normalized", who + ": measure sums to " + to_string(total)});
  if (!positive) report.violations.push_back({"measure_not_equivalent", who + ": measure not equivalent (zero or negative mass)"});
}

}  // namespace

ValidationReport validate_model(const MarketModel& model, const ExchangeSpace* exchange) {
  ValidationReport report;
  const std::size_t n = model.num_outcomes();
  if (n == 0) report.violations.push_back({"empty_sample_space", "sample space has no outcomes"});
  check_probability(model.space.reference_measure, n, "reference measure", report);
  if (model.agents.empty()) report.violations.push_back({"no_agents", "model has no agents"});

  for (std::size_t i = 0; i < model.agents.size(); ++i) {
    const auto& agent = model.agents[i];
    const std::string who = "agent " + std::to_string(i + 1) + (agent.name.empty() ? "" : " (" + agent.name + ")");
    check_probability(agent.measure, n, who, report);

    const auto& parts = agent.filtration.partitions;
    if (parts.size() != model.horizon + 1) {
      report.violations.push_back({"wrong_horizon", who + ": filtration has " + std::to_string(parts.size()) +
                                                         " partitions, expected " + std::to_string(model.horizon + 1)});
      continue;
    }
    bool partitions_ok = true;
    for (std::size_t t = 0; t < parts.size(); ++t) {
      if (!is_partition(parts[t], n)) {
        report.violations.push_back({"not_partition", who + ": time " + std::to_string(t) + " is not a partition of the outcomes"});
        partitions_ok = false;
      }
    }
    if (!partitions_ok) continue;
    if (parts.front().size() != 1) {
      report.violations.push_back({"initial_not_trivial", who + ": time-0 information is not trivial"});
    }
    for (std::size_t t = 1; t < parts.size(); ++t) {
      if (!refines(parts[t], parts[t - 1], n)) {
        report.violations.push_back({"not_refining", who + ": partition at time " + std::to_string(t) + " does not refine time " + std::to_string(t - 1)});
      }
    }
    for (std::size_t k = 0; k < agent.assets.size(); ++k) {
      const auto& path = agent.assets[k];
      if (path.size() != parts.size()) {
        report.violations.push_back({"wrong_size", who + ": asset " + std::to_string(k + 1) + " has wrong number of dates"});
        continue;
      }
      for (std::size_t t = 0; t < path.size(); ++t) {
        if (path[t].size() != n) {
          report.violations.push_back({"wrong_size", who + ": asset " + std::to_string(k + 1) + " has wrong number of outcomes"});
        } else if (!is_measurable(path[t], parts[t])) {
          report.violations.push_back({"not_adapted", who + ": asset " + std::to_string(k + 1) + " not adapted at time " + std::to_string(t)});
        }
      }
    }
    if (agent.endowment.size() != n) {
      report.violations.push_back({"wrong_size", who + ": endowment has wrong number of outcomes"});
    } else if (!is_measurable(agent.endowment, parts.back())) {
      report.violations.push_back({"endowment_not_measurable", who + ": endowment not measurable at the horizon"});
    }
  }

  if (exchange != nullptr && report.ok()) {
    const std::size_t num_agents = model.num_agents();
    for (std::size_t i = 0; i < exchange->measurability.size(); ++i) {
      if (!exchange->measurability[i].empty() && !is_partition(exchange->measurability[i], n)) {
        report.violations.push_back({"not_partition", "exchange measurability of agent " + std::to_string(i + 1) + " is not a partition"});
        return report;
      }
    }
    for (std::size_t l = 0; l < exchange->basis.size(); ++l) {
      const auto& y = exchange->basis[l];
      const std::string who = "exchange basis element " + std::to_string(l + 1);
      if (y.size() != num_agents || std::any_of(y.begin(), y.end(), [&](const RandomVariable& c) { return c.size() != n; })) {
        report.violations.push_back({"wrong_size", who + ": wrong shape"});
        continue;
      }
      for (std::size_t i = 0; i < num_agents; ++i) {
        if (!is_measurable(y[i], exchange_partition(model, *exchange, i))) {
          report.violations.push_back({"exchange_not_measurable", who + ": leg of agent " + std::to_string(i + 1) + " not measurable"});
        }
      }
      if (exchange->zero_sum) {
        for (std::size_t w = 0; w < n; ++w) {
          Rational s = 0;
          for (std::size_t i = 0; i < num_agents; ++i) s += y[i][w];
          if (s != 0) {
            report.violations.push_back({"exchange_not_zero_sum", who + ": legs do not sum to zero"});
            break;
          }
        }
      }
    }
    if (report.ok() && exchange->includes_deterministic && !contains_deterministic(*exchange, num_agents, n)) {
      report.violations.push_back({"deterministic_not_in_exchange", "deterministic zero-sum exchanges are not in the exchange set"});
    }
    if (exchange->seed_hint && exchange->seed_hint->basis_index >= exchange->basis.size()) {
      report.violations.push_back({"bad_seed_hint", "seed hint refers to a missing basis element"});
    }
  }
  return report;
}

std::optional<RationalVector> exchange_coefficients(const ExchangeSpace& exchange, const ExchangeVector& target) {
  const std::size_t dim = exchange.basis.size();
  LinearProgram lp(dim);
  if (exchange.kind == ExchangeKind::vector_space) {
    for (std::size_t l = 0; l < dim; ++l) lp.set_free(l);
  }
  for (std::size_t i = 0; i < target.size(); ++i) {
    for (std::size_t w = 0; w < target[i].size(); ++w) {
      RationalVector row(dim);
      for (std::size_t l = 0; l < dim; ++l) row[l] = exchange.basis[l].at(i).at(w);
      lp.add_row(std::move(row), Relation::equal, target[i][w]);
    }
  }
  const auto result = lp_solve(lp);
  if (const auto* opt = std::get_if<LpOptimal>(&result)) return opt->point;
  return std::nullopt;
}

bool contains_deterministic(const ExchangeSpace& exchange, std::size_t num_agents, std::size_t num_outcomes) {
  for (std::size_t j = 0; j + 1 < num_agents; ++j) {
    auto e = deterministic_exchange(j, num_agents, num_outcomes);
    if (!exchange_contains(exchange, e)) return false;
    if (exchange.kind == ExchangeKind::convex_cone) {
      for (auto& leg : e) {
        for (auto& v : leg) v = -v;
      }
      if (!exchange_contains(exchange, e)) return false;
    }
  }
  return true;
}

ExchangeVector combine(const ExchangeSpace& exchange, std::span<const Rational> coeffs, std::size_t num_agents,
                       std::size_t num_outcomes) {
  ExchangeVector y(num_agents, RandomVariable(num_outcomes, Rational(0)));
  for (std::size_t l = 0; l < exchange.basis.size(); ++l) {
    if (sgn(coeffs[l]) == 0) continue;
    for (std::size_t i = 0; i < num_agents; ++i) {
      for (std::size_t w = 0; w < num_outcomes; ++w) y[i][w] += coeffs[l] * exchange.basis[l][i][w];
    }
  }
  return y;
}

}  // namespace collarb
