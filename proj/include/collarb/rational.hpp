#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace collarb {

using Rational = mpq_class;
using RationalVector = std::vector<Rational>;

/// Parses "p/q", "p", or a plain decimal such as "-0.25". Throws InputError otherwise.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" rendering; integers render without a denominator.
std::string to_string(const Rational& r);

inline double to_double(const Rational& r) { return r.get_d(); }

std::vector<double> to_double(std::span<const Rational> v);

/// Exact binary value of a finite double.
Rational exact_from_double(double x);

/// Best rational approximation with denominator at most `max_denominator`
/// (continued-fraction convergents and semiconvergents).
Rational snap_rational(double x, std::int64_t max_denominator = 1'000'000);

/// First continued-fraction convergent within `tol` of x, if its denominator
/// stays under the cap. Prefers the simplest fraction, unlike snap_rational.
std::optional<Rational> snap_within(double x, double tol, std::int64_t max_denominator = 1'000'000);

Rational sum(std::span<const Rational> v);
Rational dot(std::span<const Rational> a, std::span<const Rational> b);

}  // namespace collarb
