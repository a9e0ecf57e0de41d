#include "collarb/convex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "collarb/errors.hpp"

namespace collarb {

ConvexObjective separable_objective(SeparableTerm term) {
  ConvexObjective f;
  f.value = [term](std::span<const double> x) {
    double s = 0;
    for (std::size_t j = 0; j < x.size(); ++j) s += term.value(j, x[j]);
    return std::isnan(s) ? std::numeric_limits<double>::infinity() : s;
  };
  f.gradient = [term](std::span<const double> x) {
    Eigen::VectorXd g(static_cast<Eigen::Index>(x.size()));
    for (std::size_t j = 0; j < x.size(); ++j) g[static_cast<Eigen::Index>(j)] = term.derivative(j, x[j]);
    return g;
  };
  f.hessian = [term](std::span<const double> x) {
    const auto n = static_cast<Eigen::Index>(x.size());
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) h(j, j) = term.curvature(static_cast<std::size_t>(j), x[static_cast<std::size_t>(j)]);
    return h;
  };
  return f;
}

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kInf = std::numeric_limits<double>::infinity();

std::span<const double> as_span(const VectorXd& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

struct Problem {
  MatrixXd a;
  VectorXd b;
  Index n = 0;
  Index m = 0;
};

Problem build_problem(const AffineSimplexSet& set) {
  if (!set.le_rows.empty()) throw InputError("convex_minimize: inequality rows are not supported");
  auto reduced = reduce_rows(set.equality_rows(), set.equality_rhs());
  if (!reduced) throw InputError("convex_minimize: affine rows are inconsistent");
  Problem p;
  p.n = static_cast<Index>(set.dimension);
  p.m = static_cast<Index>(reduced->rows.size());
  p.a.resize(p.m, p.n);
  p.b.resize(p.m);
  for (Index i = 0; i < p.m; ++i) {
    for (Index j = 0; j < p.n; ++j) p.a(i, j) = reduced->rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].get_d();
    p.b[i] = reduced->rhs[static_cast<std::size_t>(i)].get_d();
  }
  return p;
}

/// Solves [H Aᵀ; A 0][dx; w] = [r1; r2] after symmetric diagonal equilibration
/// (unit diagonal on H, unit rows on A), which keeps the rank test meaningful when
/// the barrier terms span many orders of magnitude.
bool solve_kkt(const MatrixXd& h, const MatrixXd& a, const VectorXd& r1, const VectorXd& r2, VectorXd& dx, VectorXd& w) {
  const Index n = h.rows(), m = a.rows();
  VectorXd d(n);
  for (Index j = 0; j < n; ++j) {
    const double hj = std::abs(h(j, j));
    d[j] = hj > 0 && std::isfinite(hj) ? 1 / std::sqrt(hj) : 1.0;
  }
  MatrixXd ad = a * d.asDiagonal();
  VectorXd r(m);
  for (Index i = 0; i < m; ++i) {
    const double norm = ad.row(i).norm();
    r[i] = norm > 0 ? 1 / norm : 1.0;
  }
  ad = r.asDiagonal() * ad;
  MatrixXd k = MatrixXd::Zero(n + m, n + m);
  k.topLeftCorner(n, n) = d.asDiagonal() * h * d.asDiagonal();
  k.topRightCorner(n, m) = ad.transpose();
  k.bottomLeftCorner(m, n) = ad;
  VectorXd rhs(n + m);
  rhs << d.cwiseProduct(r1), r.cwiseProduct(r2);
  Eigen::FullPivLU<MatrixXd> lu(k);
  if (lu.rank() < n + m) return false;
  VectorXd sol = lu.solve(rhs);
  if (!sol.allFinite()) return false;
  dx = d.cwiseProduct(sol.head(n));
  w = r.cwiseProduct(sol.tail(m));
  return true;
}

struct Multipliers {
  VectorXd y;
  VectorXd s;
};

/// Least-squares y with Aᵀy ≈ ∇f on the free coordinates; s = ∇f − Aᵀy.
Multipliers fit_multipliers(const Problem& p, const VectorXd& g, const std::vector<bool>& free) {
  Index nf = 0;
  for (const bool f : free) nf += f ? 1 : 0;
  Multipliers out;
  if (p.m == 0) {
    out.y = VectorXd::Zero(0);
    out.s = g;
    return out;
  }
  MatrixXd at(nf, p.m);
  VectorXd gf(nf);
  Index r = 0;
  for (Index j = 0; j < p.n; ++j) {
    if (!free[static_cast<std::size_t>(j)]) continue;
    at.row(r) = p.a.col(j).transpose();
    gf[r] = g[j];
    ++r;
  }
  out.y = nf > 0 ? VectorXd(at.completeOrthogonalDecomposition().solve(gf)) : VectorXd::Zero(p.m);
  out.s = g - p.a.transpose() * out.y;
  return out;
}

double kkt_residual(const Problem& p, const VectorXd& x, const VectorXd& s) {
  double r = (p.m > 0) ? (p.a * x - p.b).lpNorm<Eigen::Infinity>() : 0.0;
  for (Index j = 0; j < p.n; ++j) {
    r = std::max(r, -x[j]);
    r = std::max(r, -s[j]);
    r = std::max(r, std::abs(x[j] * s[j]));
  }
  return r;
}

}  // namespace

ConvexSolution convex_minimize(const AffineSimplexSet& set, const ConvexObjective& f, const ConvexOptions& opts) {
  const Problem p = build_problem(set);
  const Index n = p.n;

  VectorXd x(n);
  if (opts.start) {
    if (opts.start->size() != static_cast<std::size_t>(n)) throw InputError("convex_minimize: start has wrong dimension");
    for (Index j = 0; j < n; ++j) x[j] = (*opts.start)[static_cast<std::size_t>(j)];
    if ((x.array() <= 0).any()) throw InputError("convex_minimize: start point must be strictly positive");
  } else {
    const auto interior = interior_point_exists(set);
    const auto* yes = std::get_if<InteriorPointYes>(&interior);
    if (!yes) throw InputError("convex_minimize: feasible set has no strictly positive point");
    for (Index j = 0; j < n; ++j) x[j] = yes->point[static_cast<std::size_t>(j)].get_d();
  }
  if (!std::isfinite(f.value(as_span(x)))) throw InputError("convex_minimize: objective not finite at the start point");

  int iterations = 0;
  auto barrier_value = [&](const VectorXd& z, double mu) {
    if ((z.array() <= 0).any()) return kInf;
    const double fv = f.value(as_span(z));
    if (!std::isfinite(fv)) return kInf;
    return fv - mu * z.array().log().sum();
  };

  // Barrier path following.
  VectorXd g0 = f.gradient(as_span(x));
  double mu = std::max(1e-1, (g0.array() * x.array()).abs().mean());
  const double mu_final = std::max(1e-16, 1e-3 * opts.tol / std::max<double>(1, static_cast<double>(n)));
  VectorXd w = VectorXd::Zero(p.m);
  for (;;) {
    for (int inner = 0; inner < 500; ++inner) {
      if (++iterations > opts.max_iterations) throw NumericError("convex_minimize: iteration cap reached");
      const VectorXd g = f.gradient(as_span(x));
      MatrixXd h = f.hessian(as_span(x));
      h.diagonal().array() += mu / x.array().square();
      const VectorXd rg = -(g.array() - mu / x.array()).matrix();
      const VectorXd rp = p.m > 0 ? VectorXd(p.b - p.a * x) : VectorXd::Zero(0);
      // Solved in the scaled variable dx = diag(x) d so that the barrier block stays O(μ)
      // as coordinates approach zero.
      const VectorXd& sc = x;
      const MatrixXd hs = sc.asDiagonal() * h * sc.asDiagonal();
      const MatrixXd as = p.a * sc.asDiagonal();
      VectorXd ds, wn;
      if (!solve_kkt(hs, as, sc.cwiseProduct(rg), rp, ds, wn)) throw NumericError("convex_minimize: singular Newton system");
      const VectorXd dx = sc.cwiseProduct(ds);
      w = wn;
      const double decrement = rg.dot(dx);
      const bool feasible = rp.size() == 0 || rp.lpNorm<Eigen::Infinity>() < 1e-13;
      if (feasible && decrement < 1e-20 + 1e-14 * std::abs(barrier_value(x, mu))) break;

      double step = 1.0;
      for (Index j = 0; j < n; ++j) {
        if (dx[j] < 0) step = std::min(step, -0.99 * x[j] / dx[j]);
      }
      const double phi0 = barrier_value(x, mu);
      const double slope = -rg.dot(dx);
      bool accepted = false;
      while (step > 1e-16) {
        const VectorXd trial = x + step * dx;
        const double phi = barrier_value(trial, mu);
        if (std::isfinite(phi) && (phi <= phi0 + 1e-4 * step * slope || !feasible)) {
          x = trial;
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) break;
      if (step * dx.lpNorm<Eigen::Infinity>() < 1e-17 * (1 + x.lpNorm<Eigen::Infinity>())) break;
    }
    if (mu <= mu_final) break;
    mu = std::max(mu_final, mu * 0.1);
  }

  ConvexSolution sol;
  sol.iterations = iterations;

  // Active-set polish: fix coordinates the barrier pushed to zero, Newton on the rest.
  VectorXd g = f.gradient(as_span(x));
  std::vector<bool> free(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) free[static_cast<std::size_t>(j)] = x[j] * x[j] > mu || x[j] > 1e-7;

  VectorXd best_x = x;
  Multipliers best_m = fit_multipliers(p, g, free);
  for (Index j = 0; j < n; ++j) {
    if (!free[static_cast<std::size_t>(j)]) best_m.s[j] = std::max(best_m.s[j], 0.0);
  }
  double best_res = kkt_residual(p, best_x, best_m.s);

  {
    VectorXd z = x;
    for (Index j = 0; j < n; ++j) {
      if (!free[static_cast<std::size_t>(j)]) z[j] = 0;
    }
    std::vector<Index> fidx;
    for (Index j = 0; j < n; ++j) {
      if (free[static_cast<std::size_t>(j)]) fidx.push_back(j);
    }
    const Index nf = static_cast<Index>(fidx.size());
    MatrixXd af(p.m, nf);
    for (Index k = 0; k < nf; ++k) af.col(k) = p.a.col(fidx[static_cast<std::size_t>(k)]);
    bool ok = nf > 0;
    for (int it = 0; ok && it < 50; ++it) {
      ++iterations;
      const VectorXd gz = f.gradient(as_span(z));
      const MatrixXd hz = f.hessian(as_span(z));
      MatrixXd hf(nf, nf);
      VectorXd gf(nf);
      for (Index a = 0; a < nf; ++a) {
        gf[a] = gz[fidx[static_cast<std::size_t>(a)]];
        for (Index c = 0; c < nf; ++c) hf(a, c) = hz(fidx[static_cast<std::size_t>(a)], fidx[static_cast<std::size_t>(c)]);
      }
      const VectorXd rp = p.m > 0 ? VectorXd(p.b - p.a * z) : VectorXd::Zero(0);
      VectorXd dxf, wf;
      if (!solve_kkt(hf, af, -gf, rp, dxf, wf)) {
        ok = false;
        break;
      }
      double step = 1.0;
      for (Index k = 0; k < nf; ++k) {
        const double xv = z[fidx[static_cast<std::size_t>(k)]];
        if (dxf[k] < 0) step = std::min(step, -0.999 * xv / dxf[k]);
      }
      VectorXd trial = z;
      for (Index k = 0; k < nf; ++k) trial[fidx[static_cast<std::size_t>(k)]] += step * dxf[k];
      if (!std::isfinite(f.value(as_span(trial)))) {
        ok = false;
        break;
      }
      z = trial;
      if (dxf.lpNorm<Eigen::Infinity>() * step < 1e-16 * (1 + z.lpNorm<Eigen::Infinity>())) break;
    }
    if (ok) {
      const VectorXd gz = f.gradient(as_span(z));
      Multipliers m = fit_multipliers(p, gz, free);
      const double res = kkt_residual(p, z, m.s);
      if (res <= best_res && f.value(as_span(z)) <= f.value(as_span(best_x)) + 1e-12 * (1 + std::abs(f.value(as_span(best_x))))) {
        best_x = z;
        best_m = m;
        best_res = res;
      }
    }
  }

  sol.point.assign(best_x.data(), best_x.data() + n);
  sol.value = f.value(as_span(best_x));
  sol.kkt_residual = best_res;
  sol.duality_gap = std::abs(best_x.dot(best_m.s));
  sol.boundary = std::any_of(free.begin(), free.end(), [](bool fr) { return !fr; });
  sol.eq_multipliers.assign(best_m.y.data(), best_m.y.data() + best_m.y.size());
  sol.bound_multipliers.assign(best_m.s.data(), best_m.s.data() + n);
  sol.iterations = iterations;
  if (!(sol.kkt_residual <= opts.tol)) {
    throw NumericError("convex_minimize: KKT residual " + std::to_string(sol.kkt_residual) + " above tolerance");
  }
  return sol;
}

}  // namespace collarb
