#include "collarb/minimax.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include "collarb/arbitrage.hpp"
#include "collarb/convex.hpp"
#include "collarb/lp.hpp"

namespace collarb {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kInf = std::numeric_limits<double>::infinity();

struct PrimalData {
  MatrixXd k;  ///< outcomes × payoff basis
  VectorXd p;
  VectorXd base;  ///< X + Y
};

PrimalData primal_data(const MarketModel& model, std::size_t agent, std::span<const double> leg) {
  const std::size_t n = model.num_outcomes();
  const auto& spec = model.agents.at(agent);
  const auto space = payoff_space(model, agent);
  PrimalData d;
  d.k.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(space.dimension()));
  d.p.resize(static_cast<Eigen::Index>(n));
  d.base.resize(static_cast<Eigen::Index>(n));
  if (!leg.empty() && leg.size() != n) throw InputError("indirect_utility: exchange leg has wrong size");
  for (std::size_t w = 0; w < n; ++w) {
    const auto wi = static_cast<Eigen::Index>(w);
    d.p[wi] = spec.measure[w].get_d();
    d.base[wi] = spec.endowment[w].get_d() + (leg.empty() ? 0.0 : leg[w]);
    for (std::size_t j = 0; j < space.dimension(); ++j) d.k(wi, static_cast<Eigen::Index>(j)) = space.basis[j][w].get_d();
  }
  return d;
}

double expected_utility(const UtilityFunction& u, const PrimalData& d, const VectorXd& c) {
  const VectorXd wealth = d.base + d.k * c;
  double s = 0;
  for (Eigen::Index w = 0; w < wealth.size(); ++w) {
    if (!u.in_domain(wealth[w])) return -kInf;
    s += d.p[w] * eval_u(u, wealth[w]);
  }
  return s;
}

/// Strategy keeping wealth strictly inside the domain, via an exact LP.
VectorXd domain_start(const UtilityFunction& u, const PrimalData& d) {
  const auto n = d.k.rows();
  const auto m = d.k.cols();
  LinearProgram lp(static_cast<std::size_t>(m) + 1);
  for (Eigen::Index j = 0; j < m; ++j) lp.set_free(static_cast<std::size_t>(j));
  lp.upper[static_cast<std::size_t>(m)] = Rational(1);
  lp.lower[static_cast<std::size_t>(m)].reset();
  lp.sense = Sense::maximize;
  lp.objective.assign(static_cast<std::size_t>(m) + 1, Rational(0));
  lp.objective[static_cast<std::size_t>(m)] = 1;
  const Rational lower = exact_from_double(u.domain_lower());
  for (Eigen::Index w = 0; w < n; ++w) {
    RationalVector row(static_cast<std::size_t>(m) + 1);
    for (Eigen::Index j = 0; j < m; ++j) row[static_cast<std::size_t>(j)] = exact_from_double(d.k(w, j));
    row[static_cast<std::size_t>(m)] = -1;
    lp.add_row(std::move(row), Relation::greater_equal, lower - exact_from_double(d.base[w]));
  }
  const auto result = lp_solve(lp);
  const auto* opt = std::get_if<LpOptimal>(&result);
  if (opt == nullptr || sgn(opt->value) <= 0) {
    throw InputError("indirect_utility: no strategy keeps wealth inside the utility's domain");
  }
  VectorXd c(m);
  for (Eigen::Index j = 0; j < m; ++j) c[j] = opt->point[static_cast<std::size_t>(j)].get_d();
  return c;
}

}  // namespace

IndirectUtility indirect_utility(const MarketModel& model, std::size_t agent, std::span<const double> leg,
                                 const PrimalOptions& opts) {
  const auto& u = model.agents.at(agent).utility;
  const auto d = primal_data(model, agent, leg);
  const auto m = d.k.cols();
  VectorXd c = VectorXd::Zero(m);
  if (!std::isfinite(expected_utility(u, d, c))) c = domain_start(u, d);

  IndirectUtility out;
  double value = expected_utility(u, d, c);
  const double sup = u.sup_value();
  auto gradient = [&](const VectorXd& x, VectorXd& g, MatrixXd& h) {
    const VectorXd wealth = d.base + d.k * x;
    VectorXd du(wealth.size()), d2(wealth.size());
    for (Eigen::Index w = 0; w < wealth.size(); ++w) {
      du[w] = d.p[w] * eval_du(u, wealth[w]);
      d2[w] = d.p[w] * eval_d2u(u, wealth[w]);
    }
    g = d.k.transpose() * du;
    h = d.k.transpose() * d2.asDiagonal() * d.k;
  };

  VectorXd g(m);
  MatrixXd h(m, m);
  for (out.iterations = 0; out.iterations < opts.max_iterations; ++out.iterations) {
    if (m == 0) break;
    gradient(c, g, h);
    const double scale = std::max(1.0, std::abs(value));
    if (g.lpNorm<Eigen::Infinity>() <= opts.tol * scale) break;
    // Levenberg-regularized Newton ascent; the flat part of truncated utilities
    // makes -h singular, so the shift never drops to zero.
    const MatrixXd neg = -h;
    double shift = 1e-14 * std::max(1.0, neg.diagonal().cwiseAbs().maxCoeff());
    bool moved = false;
    for (int attempt = 0; attempt < 60 && !moved; ++attempt, shift *= 10) {
      const VectorXd dir = (neg + shift * MatrixXd::Identity(m, m)).ldlt().solve(g);
      if (!dir.allFinite()) continue;
      const double slope = g.dot(dir);
      for (double step = 1; step > 1e-20; step *= 0.5) {
        const VectorXd trial = c + step * dir;
        const double v = expected_utility(u, d, trial);
        if (std::isfinite(v) && v >= value + 1e-4 * step * slope) {
          moved = v > value || (trial - c).lpNorm<Eigen::Infinity>() > 0;
          c = trial;
          value = std::max(value, v);
          break;
        }
      }
    }
    if (!moved) break;
    if (value >= sup) break;
  }
  if (m > 0) gradient(c, g, h);
  out.value = value;
  out.gradient_norm = m > 0 ? g.lpNorm<Eigen::Infinity>() : 0.0;
  out.coefficients.assign(c.data(), c.data() + m);
  out.unbounded_utility = std::isfinite(sup) && value >= sup - 1e-14 * std::max(1.0, std::abs(sup));
  return out;
}

MinimaxSolution solve_minimax(const MarketModel& model, std::size_t agent, const MinimaxOptions& opts) {
  const std::size_t n = model.num_outcomes();
  const auto& spec = model.agents.at(agent);
  const auto& u = spec.utility;
  const auto poly = martingale_polytope(model, agent);
  if (!std::holds_alternative<InteriorPointYes>(interior_point_exists(poly.set))) {
    throw InputError("solve_minimax: agent " + std::to_string(agent + 1) + " has no equivalent martingale measure");
  }

  AffineSimplexSet cone = poly.set;
  cone.on_simplex = false;
  std::vector<double> x(n), p(n);
  for (std::size_t w = 0; w < n; ++w) {
    x[w] = spec.endowment[w].get_d();
    p[w] = spec.measure[w].get_d();
  }
  SeparableTerm term;
  term.value = [&u, x, p](std::size_t w, double mu) {
    if (mu < 0) return kInf;
    return mu * x[w] + p[w] * eval_phi(u, mu / p[w]);
  };
  term.derivative = [&u, x, p](std::size_t w, double mu) { return x[w] + eval_dphi(u, mu / p[w]); };
  term.curvature = [&u, p](std::size_t w, double mu) { return eval_d2phi(u, mu / p[w]) / p[w]; };

  ConvexOptions copts;
  copts.tol = opts.tol;
  copts.start = opts.start;
  const auto sol = convex_minimize(cone, separable_objective(term), copts);

  MinimaxSolution out;
  out.agent = agent;
  out.lambda = 0;
  for (const double v : sol.point) out.lambda += v;
  const double sup = u.sup_value();
  if (out.lambda <= 1e-8 || (std::isfinite(sup) && sol.value >= sup - 1e-12 * std::max(1.0, std::abs(sup)))) {
    throw UnboundedUtility("agent " + std::to_string(agent + 1) + ": indirect utility reaches u(+inf)");
  }
  out.measure.resize(n);
  for (std::size_t w = 0; w < n; ++w) out.measure[w] = sol.point[w] / out.lambda;
  out.dual_value = sol.value;
  out.kkt_residual = sol.kkt_residual;
  out.boundary = sol.boundary;

  RationalVector snapped;
  for (std::size_t w = 0; w < n && snapped.size() == w; ++w) {
    if (out.measure[w] < 1e-9) {
      snapped.emplace_back(0);
    } else if (auto r = snap_within(out.measure[w], 1e-10)) {
      // A random float has convergents with error about 1/k²; insist on much
      // better so that irrational optima are not mistaken for fractions.
      const double k = r->get_den().get_d();
      if (std::abs(r->get_d() - out.measure[w]) * k * k <= 1e-3) snapped.push_back(*r);
    }
  }
  if (snapped.size() == n) {
    AffineSimplexSet closure = poly.set;
    closure.positivity = Positivity::nonneg;
    if (closure.contains(snapped)) out.exact_measure = snapped;
  }
  if (out.exact_measure) {
    out.equivalent = std::all_of(out.exact_measure->begin(), out.exact_measure->end(),
                                 [](const Rational& r) { return sgn(r) > 0; });
  } else {
    out.equivalent = !out.boundary;
  }

  const auto primal = indirect_utility(model, agent);
  out.primal_value = primal.value;
  out.gap = std::abs(out.primal_value - out.dual_value);
  return out;
}

double duality_gap(const MinimaxSolution& sol) { return std::abs(sol.primal_value - sol.dual_value); }

double duality_gap(const MarketModel& model, std::size_t agent) { return duality_gap(solve_minimax(model, agent)); }

double directional_derivative(const MinimaxSolution& sol, std::span<const double> leg) {
  if (leg.size() != sol.measure.size()) throw InputError("directional_derivative: leg has wrong size");
  double s = 0;
  for (std::size_t w = 0; w < leg.size(); ++w) s += sol.measure[w] * leg[w];
  return sol.lambda * s;
}

std::vector<MinimaxSolution> solve_minimax_all(const MarketModel& model, const MinimaxOptions& opts) {
  const std::size_t agents = model.num_agents();
  std::vector<MinimaxSolution> out(agents);
  std::vector<std::exception_ptr> errors(agents);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < agents; ++i) {
    try {
      out[i] = solve_minimax(model, i, opts);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace collarb
