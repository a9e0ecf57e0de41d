#include "collarb/beneficial.hpp"

#include <cmath>

#include "collarb/arbitrage.hpp"

namespace collarb {

namespace {

double expectation(const std::vector<double>& q, const RandomVariable& y) {
  double s = 0;
  for (std::size_t w = 0; w < q.size(); ++w) s += q[w] * y[w].get_d();
  return s;
}

bool all_exact(const std::vector<MinimaxSolution>& minimax) {
  for (const auto& s : minimax) {
    if (!s.exact_measure) return false;
  }
  return true;
}

std::vector<double> leg_values(const RandomVariable& leg, double scale) {
  std::vector<double> out(leg.size());
  for (std::size_t w = 0; w < leg.size(); ++w) out[w] = scale * leg[w].get_d();
  return out;
}

ExchangeVector signed_copy(const ExchangeVector& y, int sign) {
  ExchangeVector out = y;
  if (sign < 0) {
    for (auto& leg : out) {
      for (auto& v : leg) v = -v;
    }
  }
  return out;
}

void require_deterministic(const MarketModel& model, const ExchangeSpace& exchange) {
  if (!contains_deterministic(exchange, model.num_agents(), model.num_outcomes())) {
    throw InputError("deterministic zero-sum exchanges are not in the exchange set");
  }
}

}  // namespace

PolarityReport polarity_check(const MarketModel& model, const ExchangeSpace& exchange,
                              const std::vector<MinimaxSolution>& minimax, const PolarityOptions& opts) {
  if (minimax.size() != model.num_agents()) throw InputError("polarity_check: one minimax solution per agent required");
  const bool exact = all_exact(minimax);
  const bool cone = exchange.kind == ExchangeKind::convex_cone;
  PolarityReport rep;
  if (exact) rep.exact_values.emplace();

  // Candidate value after sign choice, and whether it counts as a violation.
  std::vector<double> best(exchange.basis.size());
  std::vector<int> sign(exchange.basis.size(), 1);
  std::vector<bool> violates(exchange.basis.size(), false);
  for (std::size_t l = 0; l < exchange.basis.size(); ++l) {
    const auto& y = exchange.basis[l];
    double v = 0;
    for (std::size_t i = 0; i < minimax.size(); ++i) v += expectation(minimax[i].measure, y[i]);
    if (exact) {
      Rational r = 0;
      for (std::size_t i = 0; i < minimax.size(); ++i) r += dot(*minimax[i].exact_measure, y[i]);
      rep.exact_values->push_back(r);
      v = r.get_d();
      violates[l] = cone ? sgn(r) > 0 : sgn(r) != 0;
    } else {
      violates[l] = cone ? v > opts.threshold : std::abs(v) > opts.threshold;
    }
    rep.values.push_back(v);
    if (!cone && v < 0) sign[l] = -1;
    best[l] = cone ? v : std::abs(v);
  }

  for (std::size_t l = 0; l < best.size(); ++l) {
    if (!violates[l]) continue;
    if (!rep.violating_index || best[l] > rep.max_violation) {
      rep.violating_index = l;
      rep.max_violation = best[l];
    }
  }
  if (exchange.seed_hint && exchange.seed_hint->basis_index < best.size()) {
    const auto l = exchange.seed_hint->basis_index;
    if (violates[l] && sign[l] == exchange.seed_hint->sign) rep.violating_index = l;
  }
  if (rep.violating_index) {
    const auto l = *rep.violating_index;
    rep.violating_sign = sign[l];
    rep.violating_Y = signed_copy(exchange.basis[l], sign[l]);
  } else {
    for (const double b : best) rep.max_violation = std::max(rep.max_violation, b);
  }
  return rep;
}

Candidate construct_candidate(const ExchangeSpace& exchange, const std::vector<MinimaxSolution>& minimax,
                              const ExchangeVector& y) {
  const std::size_t agents = minimax.size();
  if (y.size() != agents) throw InputError("construct_candidate: exchange has wrong number of legs");
  const bool exact = all_exact(minimax);
  RationalVector e(agents);
  for (std::size_t i = 0; i < agents; ++i) {
    e[i] = exact ? dot(*minimax[i].exact_measure, y[i]) : exact_from_double(expectation(minimax[i].measure, y[i]));
  }
  const Rational common = sum(e) / Rational(static_cast<long>(agents));
  if (sgn(common) <= 0) throw InputError("construct_candidate: seed exchange has nonpositive aggregate value");

  Candidate c;
  c.y_hat = y;
  for (std::size_t i = 0; i < agents; ++i) {
    const Rational shift = common - e[i];
    c.shifts.push_back(shift);
    for (auto& v : c.y_hat[i]) v += shift;
    c.expectations.push_back(expectation(minimax[i].measure, c.y_hat[i]));
  }
  if (exact) c.exact_common_value = common;
  if (!exchange_contains(exchange, c.y_hat)) {
    throw InputError("construct_candidate: rebalanced exchange is not in the exchange set (deterministic transfers missing)");
  }
  return c;
}

LineSearchResult line_search_alpha(const MarketModel& model, const std::vector<MinimaxSolution>& minimax,
                                   const ExchangeVector& y_hat) {
  const std::size_t agents = model.num_agents();
  LineSearchResult out;
  for (std::size_t i = 0; i < agents; ++i) {
    const auto leg = leg_values(y_hat[i], 1.0);
    if (!(directional_derivative(minimax[i], leg) > 0)) {
      throw InputError("line_search_alpha: directional derivative of agent " + std::to_string(i + 1) + " is not positive");
    }
    out.before.push_back(minimax[i].primal_value);
  }
  for (double alpha = 1; alpha >= 1e-12; alpha *= 0.5) {
    std::vector<double> after(agents);
    bool all = true;
    for (std::size_t i = 0; i < agents && all; ++i) {
      try {
        after[i] = indirect_utility(model, i, leg_values(y_hat[i], alpha)).value;
      } catch (const InputError&) {
        all = false;  // wealth left the domain; shrink
        break;
      }
      all = after[i] > out.before[i] + 1e-10 * (1 + std::abs(out.before[i]));
    }
    if (all) {
      out.alpha = alpha;
      out.after = std::move(after);
      return out;
    }
  }
  throw NumericError("line_search_alpha: step fell below 1e-12 without improving every agent");
}

BeneficialOutcome beneficial_pipeline(const MarketModel& model, const ExchangeSpace& exchange,
                                      const PolarityOptions& opts) {
  require_deterministic(model, exchange);
  BeneficialOutcome out;
  MinimaxOptions mopts;
  mopts.tol = opts.solver_tol;
  out.minimax = solve_minimax_all(model, mopts);
  out.polarity = polarity_check(model, exchange, out.minimax, opts);
  if (!out.polarity.violated()) return out;

  BeneficialCertificate cert;
  cert.seed_index = *out.polarity.violating_index;
  cert.seed_sign = out.polarity.violating_sign;
  cert.y = *out.polarity.violating_Y;
  cert.candidate = construct_candidate(exchange, out.minimax, cert.y);
  auto ls = line_search_alpha(model, out.minimax, cert.candidate.y_hat);
  cert.alpha = ls.alpha;
  cert.before = std::move(ls.before);
  cert.after = std::move(ls.after);
  for (std::size_t i = 0; i < model.num_agents(); ++i) {
    cert.derivatives.push_back(directional_derivative(out.minimax[i], leg_values(cert.candidate.y_hat[i], 1.0)));
  }
  cert.strict = true;
  for (std::size_t i = 0; i < model.num_agents(); ++i) cert.strict = cert.strict && cert.after[i] > cert.before[i];
  if (!cert.strict) throw InternalInconsistency("beneficial_pipeline: certificate is not strict");
  out.certificate = std::move(cert);
  return out;
}

bool verify_certificate(const MarketModel& model, const ExchangeSpace& exchange, const BeneficialCertificate& cert) {
  if (!exchange_contains(exchange, cert.candidate.y_hat)) return false;
  for (std::size_t i = 0; i < model.num_agents(); ++i) {
    const double before = indirect_utility(model, i).value;
    const double after = indirect_utility(model, i, leg_values(cert.candidate.y_hat[i], cert.alpha)).value;
    if (!(after > before)) return false;
  }
  return true;
}

ZeroMarketReport check_corollary_zero_market(const MarketModel& model, const ExchangeSpace& exchange) {
  const std::size_t n = model.num_outcomes();
  for (std::size_t i = 0; i < model.num_agents(); ++i) {
    if (payoff_space(model, i).dimension() != 0) {
      throw InputError("check_corollary_zero_market: agent " + std::to_string(i + 1) + " has a nontrivial market");
    }
    if (!is_measurable(model.agents[i].endowment, trivial_partition(n))) {
      throw InputError("check_corollary_zero_market: agent " + std::to_string(i + 1) + " has a random endowment");
    }
  }
  ZeroMarketReport rep;
  Rational best = 0;
  for (std::size_t l = 0; l < exchange.basis.size(); ++l) {
    Rational v = 0;
    for (std::size_t i = 0; i < model.num_agents(); ++i) v += dot(model.agents[i].measure, exchange.basis[l][i]);
    int s = 1;
    if (exchange.kind == ExchangeKind::vector_space && sgn(v) < 0) {
      v = -v;
      s = -1;
    }
    if (sgn(v) > 0 && v > best) {
      best = v;
      rep.direct = true;
      rep.direct_index = l;
      rep.direct_sign = s;
    }
  }
  rep.pipeline = beneficial_pipeline(model, exchange).certificate.has_value();
  if (rep.direct != rep.pipeline) {
    throw InternalInconsistency("check_corollary_zero_market: pipeline disagrees with the direct criterion");
  }
  return rep;
}

}  // namespace collarb
