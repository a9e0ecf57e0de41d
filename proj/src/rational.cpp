#include "collarb/rational.hpp"

#include <cmath>

#include "collarb/errors.hpp"

namespace collarb {

namespace {

bool is_integer_text(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  return true;
}

Rational parse_integer(std::string_view s) {
  if (!s.empty() && s[0] == '+') s.remove_prefix(1);
  return Rational(mpz_class(std::string(s)));
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const auto num = text.substr(0, slash);
    const auto den = text.substr(slash + 1);
    if (!is_integer_text(num) || !is_integer_text(den) || den[0] == '-') {
      throw InputError("malformed rational '" + std::string(text) + "'");
    }
    mpz_class d(std::string(den[0] == '+' ? den.substr(1) : den));
    if (d == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
    Rational r(parse_integer(num).get_num(), d);
    r.canonicalize();
    return r;
  }
  if (const auto dot = text.find('.'); dot != std::string_view::npos) {
    const auto whole = text.substr(0, dot);
    const auto frac = text.substr(dot + 1);
    const bool negative = !whole.empty() && whole[0] == '-';
    const auto digits = (whole.empty() || whole == "-" || whole == "+") ? std::string_view("0")
                        : (whole[0] == '-' || whole[0] == '+')          ? whole.substr(1)
                                                                          : whole;
    if (!is_integer_text(digits) || (!frac.empty() && !is_integer_text(frac)) ||
        (!frac.empty() && (frac[0] == '-' || frac[0] == '+'))) {
      throw InputError("malformed decimal '" + std::string(text) + "'");
    }
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    mpz_class num = mpz_class(std::string(digits)) * scale;
    if (!frac.empty()) num += mpz_class(std::string(frac));
    Rational r(negative ? mpz_class(-num) : num, scale);
    r.canonicalize();
    return r;
  }
  if (!is_integer_text(text)) throw InputError("malformed rational '" + std::string(text) + "'");
  return parse_integer(text);
}

std::string to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::vector<double> to_double(std::span<const Rational> v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& r : v) out.push_back(r.get_d());
  return out;
}

Rational exact_from_double(double x) {
  if (!std::isfinite(x)) throw InputError("cannot represent non-finite value exactly");
  Rational r(x);  // mpq_set_d is exact
  return r;
}

Rational snap_rational(double x, std::int64_t max_denominator) {
  if (!std::isfinite(x)) throw InputError("cannot snap non-finite value");
  const Rational target = exact_from_double(x);
  // Convergents h/k of the continued fraction of the exact binary value.
  mpz_class h_prev = 0, h = 1, k_prev = 1, k = 0;
  mpz_class num = target.get_num(), den = target.get_den();
  const mpz_class cap = max_denominator;
  Rational best(0);
  bool have_best = false;
  while (den != 0) {
    mpz_class a;
    mpz_fdiv_q(a.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    const mpz_class h_next = a * h + h_prev;
    const mpz_class k_next = a * k + k_prev;
    if (k_next > cap) {
      // Best semiconvergent within the cap.
      if (k != 0) {
        const mpz_class t = (cap - k_prev) / k;
        const Rational semi(mpz_class(t * h + h_prev), mpz_class(t * k + k_prev));
        const Rational conv(h, k);
        Rational s = semi, c = conv;
        s.canonicalize();
        c.canonicalize();
        best = (abs(s - target) < abs(c - target) && t > 0) ? s : c;
        have_best = true;
      }
      break;
    }
    h_prev = h;
    k_prev = k;
    h = h_next;
    k = k_next;
    const mpz_class rem = num - a * den;
    num = den;
    den = rem;
  }
  if (!have_best) {
    best = Rational(h, k);
    best.canonicalize();
  }
  return best;
}

std::optional<Rational> snap_within(double x, double tol, std::int64_t max_denominator) {
  if (!std::isfinite(x)) throw InputError("cannot snap non-finite value");
  const Rational target = exact_from_double(x);
  mpz_class h_prev = 0, h = 1, k_prev = 1, k = 0;
  mpz_class num = target.get_num(), den = target.get_den();
  while (den != 0) {
    mpz_class a;
    mpz_fdiv_q(a.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    const mpz_class h_next = a * h + h_prev;
    const mpz_class k_next = a * k + k_prev;
    if (k_next > max_denominator) break;
    h_prev = h;
    k_prev = k;
    h = h_next;
    k = k_next;
    Rational conv(h, k);
    conv.canonicalize();
    if (std::abs(Rational(conv - target).get_d()) <= tol) return conv;
    const mpz_class rem = num - a * den;
    num = den;
    den = rem;
  }
  return std::nullopt;
}

Rational sum(std::span<const Rational> v) {
  Rational s = 0;
  for (const auto& x : v) s += x;
  return s;
}

Rational dot(std::span<const Rational> a, std::span<const Rational> b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace collarb
