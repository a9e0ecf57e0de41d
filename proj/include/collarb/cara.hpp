#pragma once

#include <utility>

#include "collarb/model_io.hpp"

namespace collarb {

/// Two CARA agents whose minimax measures give an event A masses q1 > q2.
struct CaraRegionSpec {
  double q1 = 0;
  double q2 = 0;
  double gamma1 = 1;
  double gamma2 = 1;
};

/// Throws InputError unless 0 < q2 < q1 < 1 and both γ > 0.
void check_spec(const CaraRegionSpec& spec);

/// U(α) = −(1/γ1) ln(q1 e^{−γ1 α} + 1 − q1): largest fee agent 1 accepts for α·1_A.
double curve_U(const CaraRegionSpec& spec, double alpha);
/// L(α) = (1/γ2) ln(q2 e^{γ2 α} + 1 − q2): smallest fee agent 2 accepts for giving α·1_A.
double curve_L(const CaraRegionSpec& spec, double alpha);

/// Unique positive root of U − L, by bracketing and bisection.
/// Throws NumericError when no bracket is found within 60 doublings.
double alpha_star(const CaraRegionSpec& spec, double tol = 1e-12);

struct RegionMembership {
  bool member = false;
  double expectation1 = 0;  ///< E[exp(−γ1(α1_A − β))] under Bernoulli(q1)
  double expectation2 = 0;  ///< E[exp(−γ2(−α1_A + β))] under Bernoulli(q2)
};

/// 0 < α < α* and L(α) < β < U(α); on membership both expectations are below one.
RegionMembership region_membership(const CaraRegionSpec& spec, double alpha, double beta);

/// Legs (α1_A − β, −α1_A + β) on the outcomes (A, Aᶜ). Throws InputError outside the region.
std::pair<std::pair<double, double>, std::pair<double, double>> emit_exchange(const CaraRegionSpec& spec, double alpha,
                                                                           double beta);

/// Two-outcome model without traded assets, P^i(A) = q_i, exponential utilities,
/// zero endowments; the exchange set is spanned by the emitted exchange plus the
/// deterministic transfers. Rational inputs are snapped exactly from the doubles.
ModelDocument trivial_market_model(const CaraRegionSpec& spec, double alpha, double beta);

}  // namespace collarb
