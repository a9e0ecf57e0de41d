#include "collarb/arbitrage.hpp"

#include <algorithm>

namespace collarb {

namespace {

/// Greedy exact rank test: keeps rows that are independent of those kept so far.
class IndependenceFilter {
 public:
  bool try_add(RationalVector row) {
    for (const auto& [pivot, r] : echelon_) {
      if (sgn(row[pivot]) == 0) continue;
      const Rational f = row[pivot] / r[pivot];
      for (std::size_t j = 0; j < row.size(); ++j) row[j] -= f * r[j];
    }
    const auto it = std::find_if(row.begin(), row.end(), [](const Rational& v) { return sgn(v) != 0; });
    if (it == row.end()) return false;
    echelon_.emplace_back(static_cast<std::size_t>(it - row.begin()), std::move(row));
    return true;
  }

 private:
  std::vector<std::pair<std::size_t, RationalVector>> echelon_;
};

RandomVariable increment(const AgentSpec& agent, const Increment& inc, std::size_t n) {
  const auto& path = agent.assets[inc.asset];
  RandomVariable x(n, Rational(0));
  for (const auto w : agent.filtration.at(inc.time - 1)[inc.atom]) {
    x[w] = path[inc.time][w] - path[inc.time - 1][w];
  }
  return x;
}

/// Appends, for each agent block, rows Σ_ω q^i_ω K(ω) = 0 for the payoff basis.
void add_martingale_rows(AffineSimplexSet& set, const PayoffSpace& payoffs, std::size_t offset, std::size_t n) {
  for (const auto& k : payoffs.basis) {
    RationalVector row(set.dimension, Rational(0));
    for (std::size_t w = 0; w < n; ++w) row[offset + w] = k[w];
    set.add_equality(std::move(row), 0);
  }
}

ArbitrageWitness assemble_witness(const MarketModel& model, const std::vector<PayoffSpace>& spaces,
                                  const ExchangeSpace* exchange, const RationalVector& x) {
  const std::size_t n = model.num_outcomes();
  const std::size_t agents = spaces.size();
  ArbitrageWitness wit;
  std::size_t col = 0;
  for (std::size_t i = 0; i < agents; ++i) {
    RationalVector c(x.begin() + static_cast<std::ptrdiff_t>(col),
                     x.begin() + static_cast<std::ptrdiff_t>(col + spaces[i].dimension()));
    col += spaces[i].dimension();
    RandomVariable k(n, Rational(0));
    for (std::size_t j = 0; j < c.size(); ++j) {
      for (std::size_t w = 0; w < n; ++w) k[w] += c[j] * spaces[i].basis[j][w];
    }
    wit.agents.push_back(spaces[i].agent);
    wit.strategy_coefficients.push_back(std::move(c));
    wit.payoffs.push_back(std::move(k));
  }
  if (exchange != nullptr) {
    wit.exchange_coefficients.assign(x.begin() + static_cast<std::ptrdiff_t>(col), x.end());
    wit.exchange = combine(*exchange, wit.exchange_coefficients, model.num_agents(), n);
  } else {
    wit.exchange.assign(agents, RandomVariable(n, Rational(0)));
  }
  for (std::size_t i = 0; i < agents; ++i) {
    RandomVariable t(n);
    for (std::size_t w = 0; w < n; ++w) t[w] = wit.payoffs[i][w] + wit.exchange[i][w];
    wit.totals.push_back(std::move(t));
  }
  return wit;
}

/// Finds payoffs k^i (+ exchange) with totals ≥ 0 and total mass 1.
ArbitrageResult arbitrage_search(const MarketModel& model, const std::vector<PayoffSpace>& spaces,
                                 const ExchangeSpace* exchange) {
  const std::size_t n = model.num_outcomes();
  std::size_t num_vars = 0;
  for (const auto& s : spaces) num_vars += s.dimension();
  const std::size_t first_exchange = num_vars;
  if (exchange != nullptr) num_vars += exchange->basis.size();

  LinearProgram lp(num_vars);
  for (std::size_t j = 0; j < first_exchange; ++j) lp.set_free(j);
  if (exchange != nullptr && exchange->kind == ExchangeKind::vector_space) {
    for (std::size_t j = first_exchange; j < num_vars; ++j) lp.set_free(j);
  }
  RationalVector mass(num_vars, Rational(0));
  std::size_t col = 0;
  for (std::size_t i = 0; i < spaces.size(); ++i) {
    const std::size_t agent = spaces[i].agent;
    for (std::size_t w = 0; w < n; ++w) {
      RationalVector row(num_vars, Rational(0));
      for (std::size_t j = 0; j < spaces[i].dimension(); ++j) row[col + j] = spaces[i].basis[j][w];
      if (exchange != nullptr) {
        for (std::size_t l = 0; l < exchange->basis.size(); ++l) row[first_exchange + l] = exchange->basis[l][agent][w];
      }
      for (std::size_t j = 0; j < num_vars; ++j) mass[j] += row[j];
      lp.add_row(std::move(row), Relation::greater_equal, 0);
    }
    col += spaces[i].dimension();
  }
  lp.add_row(std::move(mass), Relation::equal, 1);

  ArbitrageResult out;
  const auto result = lp_solve(lp);
  if (const auto* inf = std::get_if<LpInfeasible>(&result)) {
    out.holds = true;
    out.certificate = inf->certificate;
    return out;
  }
  const RationalVector& x = std::holds_alternative<LpOptimal>(result) ? std::get<LpOptimal>(result).point
                                                                      : std::get<LpUnbounded>(result).point;
  out.holds = false;
  out.witness = assemble_witness(model, spaces, exchange, x);
  return out;
}

}  // namespace

PayoffSpace payoff_space(const MarketModel& model, std::size_t agent_index) {
  const auto& agent = model.agents.at(agent_index);
  const std::size_t n = model.num_outcomes();
  PayoffSpace space;
  space.agent = agent_index;
  IndependenceFilter filter;
  for (std::size_t t = 1; t <= agent.filtration.horizon(); ++t) {
    for (std::size_t a = 0; a < agent.filtration.at(t - 1).size(); ++a) {
      for (std::size_t k = 0; k < agent.assets.size(); ++k) {
        const Increment inc{t, a, k};
        auto x = increment(agent, inc, n);
        if (filter.try_add(x)) {
          space.basis.push_back(std::move(x));
          space.sources.push_back(inc);
        }
      }
    }
  }
  return space;
}

ArbitrageResult check_NA(const MarketModel& model, std::size_t agent) {
  return arbitrage_search(model, {payoff_space(model, agent)}, nullptr);
}

ArbitrageResult check_NCA(const MarketModel& model, const ExchangeSpace& exchange) {
  std::vector<PayoffSpace> spaces;
  for (std::size_t i = 0; i < model.num_agents(); ++i) spaces.push_back(payoff_space(model, i));
  return arbitrage_search(model, spaces, &exchange);
}

bool verify_witness(const MarketModel& model, const ExchangeSpace* exchange, const ArbitrageWitness& wit) {
  const std::size_t n = model.num_outcomes();
  if (wit.totals.size() != wit.payoffs.size()) return false;
  bool somewhere_positive = false;
  for (std::size_t i = 0; i < wit.payoffs.size(); ++i) {
    const auto space = payoff_space(model, wit.agents.at(i));
    if (wit.strategy_coefficients[i].size() != space.dimension()) return false;
    for (std::size_t w = 0; w < n; ++w) {
      Rational k = 0;
      for (std::size_t j = 0; j < space.dimension(); ++j) k += wit.strategy_coefficients[i][j] * space.basis[j][w];
      if (k != wit.payoffs[i][w]) return false;
      if (wit.totals[i][w] != k + wit.exchange[i][w]) return false;
      if (sgn(wit.totals[i][w]) < 0) return false;
      if (sgn(wit.totals[i][w]) > 0) somewhere_positive = true;
    }
  }
  if (exchange != nullptr) {
    if (exchange->kind == ExchangeKind::convex_cone &&
        std::any_of(wit.exchange_coefficients.begin(), wit.exchange_coefficients.end(),
                    [](const Rational& c) { return sgn(c) < 0; })) {
      return false;
    }
    if (combine(*exchange, wit.exchange_coefficients, model.num_agents(), n) != wit.exchange) return false;
  }
  return somewhere_positive;
}

std::string MeasurePolytope::description() const {
  switch (kind) {
    case MeasureSetKind::martingale: return "M(S^" + std::to_string(agent.value_or(0) + 1) + ")";
    case MeasureSetKind::collective: return "M(Y)";
    case MeasureSetKind::common: return "intersection of M(S^i)";
  }
  return "";
}

MeasurePolytope martingale_polytope(const MarketModel& model, std::size_t agent) {
  const std::size_t n = model.num_outcomes();
  MeasurePolytope poly;
  poly.kind = MeasureSetKind::martingale;
  poly.agent = agent;
  poly.num_outcomes = n;
  poly.set = AffineSimplexSet(n);
  add_martingale_rows(poly.set, payoff_space(model, agent), 0, n);
  return poly;
}

MeasurePolytope common_martingale_polytope(const MarketModel& model) {
  const std::size_t n = model.num_outcomes();
  MeasurePolytope poly;
  poly.kind = MeasureSetKind::common;
  poly.num_outcomes = n;
  poly.set = AffineSimplexSet(n);
  for (std::size_t i = 0; i < model.num_agents(); ++i) add_martingale_rows(poly.set, payoff_space(model, i), 0, n);
  return poly;
}

MeasurePolytope collective_martingale_polytope(const MarketModel& model, const ExchangeSpace& exchange) {
  const std::size_t n = model.num_outcomes();
  const std::size_t agents = model.num_agents();
  MeasurePolytope poly;
  poly.kind = MeasureSetKind::collective;
  poly.num_outcomes = n;
  poly.num_blocks = agents;
  poly.set = AffineSimplexSet(n * agents);
  poly.set.on_simplex = false;
  for (std::size_t i = 0; i < agents; ++i) {
    RationalVector norm(n * agents, Rational(0));
    for (std::size_t w = 0; w < n; ++w) norm[i * n + w] = 1;
    poly.set.add_equality(std::move(norm), 1);
    add_martingale_rows(poly.set, payoff_space(model, i), i * n, n);
  }
  for (const auto& y : exchange.basis) {
    RationalVector row(n * agents, Rational(0));
    for (std::size_t i = 0; i < agents; ++i) {
      for (std::size_t w = 0; w < n; ++w) row[i * n + w] = y[i][w];
    }
    if (exchange.kind == ExchangeKind::vector_space) {
      poly.set.add_equality(std::move(row), 0);
    } else {
      poly.set.add_inequality(std::move(row), 0);
    }
  }
  return poly;
}

namespace {

FtapReport compare(const ArbitrageResult& arb, const InteriorPointResult& interior, const std::string& what) {
  FtapReport report;
  report.no_arbitrage = arb.holds;
  report.witness = arb.witness;
  if (const auto* yes = std::get_if<InteriorPointYes>(&interior)) {
    report.equivalent_measure = true;
    report.measure = yes->point;
  }
  if (report.no_arbitrage != report.equivalent_measure) {
    throw InternalInconsistency(what + ": arbitrage LP and measure polytope disagree");
  }
  return report;
}

}  // namespace

FtapReport check_FTAP(const MarketModel& model, std::size_t agent) {
  return compare(check_NA(model, agent), interior_point_exists(martingale_polytope(model, agent).set), "check_FTAP");
}

FtapReport check_collective_FTAP(const MarketModel& model, const ExchangeSpace& exchange) {
  if (!contains_deterministic(exchange, model.num_agents(), model.num_outcomes())) {
    throw InputError("check_collective_FTAP: deterministic zero-sum exchanges are not in the exchange set");
  }
  return compare(check_NCA(model, exchange),
                 interior_point_exists(collective_martingale_polytope(model, exchange).set), "check_collective_FTAP");
}

bool check_completeness(const MarketModel& model, std::size_t agent) {
  if (!check_NA(model, agent).holds) throw InputError("check_completeness: agent market admits arbitrage");
  const auto& terminal = model.agents.at(agent).filtration.terminal();
  return payoff_space(model, agent).dimension() + 1 == terminal.size();
}

}  // namespace collarb
