#include "mertens/rational.hpp"

#include <cmath>
#include <stdexcept>

#include "mertens/errors.hpp"

namespace mertens {

namespace {

mpz_class parse_integer(const std::string& s) {
  if (s.empty()) throw DomainError("parse_rational: empty number");
  mpz_class z;
  if (mpz_set_str(z.get_mpz_t(), s.c_str(), 10) != 0)
    throw DomainError("parse_rational: malformed number '" + s + "'");
  return z;
}

mpz_class pow10z(unsigned long k) {
  mpz_class z;
  mpz_ui_pow_ui(z.get_mpz_t(), 10, k);
  return z;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  std::string s = text;
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.pop_back();
  if (s.empty()) throw DomainError("parse_rational: empty input");

  const auto slash = s.find('/');
  if (slash != std::string::npos) {
    const mpz_class num = parse_integer(s.substr(0, slash));
    const mpz_class den = parse_integer(s.substr(slash + 1));
    if (den <= 0) throw DomainError("parse_rational: denominator must be positive");
    Rational r(num, den);
    r.canonicalize();
    return r;
  }

  const auto dot = s.find('.');
  if (dot != std::string::npos) {
    std::string head = s.substr(0, dot);
    std::string tail = s.substr(dot + 1);
    if (tail.empty() || tail.find_first_not_of("0123456789") != std::string::npos)
      throw DomainError("parse_rational: malformed decimal '" + s + "'");
    bool negative = false;
    if (!head.empty() && (head[0] == '+' || head[0] == '-')) {
      negative = head[0] == '-';
      head.erase(head.begin());
    }
    if (head.empty()) head = "0";
    const mpz_class whole = parse_integer(head);
    const mpz_class frac = parse_integer(tail);
    mpz_class num = whole * pow10z(tail.size()) + frac;
    if (negative) num = -num;
    Rational r(num, pow10z(tail.size()));
    r.canonicalize();
    return r;
  }

  Rational r(parse_integer(s), 1);
  r.canonicalize();
  return r;
}

DecimalString to_decimal(const Rational& value, int sig_digits) {
  if (sig_digits < 1) throw DomainError("to_decimal: sig_digits must be >= 1");
  if (value == 0) return {"0", true};

  const bool negative = value < 0;
  const mpz_class num = abs(value.get_num());
  const mpz_class den = value.get_den();

  // Decimal exponent e with 10^e <= num/den < 10^(e+1).
  long e = static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 10)) -
           static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 10));
  auto cmp_pow = [&](long k) {
    // compares num/den against 10^k
    mpz_class lhs = num, rhs = den;
    if (k >= 0) rhs *= pow10z(k);
    else lhs *= pow10z(-k);
    return cmp(lhs, rhs);
  };
  while (cmp_pow(e) < 0) --e;
  while (cmp_pow(e + 1) >= 0) ++e;

  // First sig_digits digits: D = floor(|v| * 10^(sig_digits-1-e)).
  const long shift = sig_digits - 1 - e;
  mpz_class n2 = num, d2 = den;
  if (shift >= 0) n2 *= pow10z(shift);
  else d2 *= pow10z(-shift);
  mpz_class digits_z, rem;
  mpz_tdiv_qr(digits_z.get_mpz_t(), rem.get_mpz_t(), n2.get_mpz_t(), d2.get_mpz_t());
  const bool exact = rem == 0;

  // Trailing fractional zeros are dropped only when nothing was truncated,
  // so an inexact rendering always shows its full significant width.
  std::string digits = digits_z.get_str();
  std::string out;
  if (e >= sig_digits) {
    digits.append(static_cast<size_t>(e + 1 - sig_digits), '0');
    out = digits;
  } else if (e >= 0) {
    out = digits.substr(0, e + 1);
    std::string frac = digits.substr(e + 1);
    if (exact) {
      while (!frac.empty() && frac.back() == '0') frac.pop_back();
    }
    if (!frac.empty()) out += "." + frac;
  } else {
    if (exact) {
      while (!digits.empty() && digits.back() == '0') digits.pop_back();
    }
    out = "0.";
    out.append(static_cast<size_t>(-e - 1), '0');
    out += digits;
  }
  if (negative) out.insert(out.begin(), '-');
  return {out, exact};
}

DecimalString to_decimal(double value, int sig_digits) {
  if (!std::isfinite(value)) {
    if (std::isnan(value)) return {"nan", false};
    return {value > 0 ? "inf" : "-inf", false};
  }
  if (value == 0.0) return {"0", true};
  Rational r;
  mpq_set_d(r.get_mpq_t(), value);
  return to_decimal(r, sig_digits);
}

Rational pow_rational(const Rational& base, unsigned long exponent) {
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num().get_mpz_t(), exponent);
  mpz_pow_ui(den.get_mpz_t(), base.get_den().get_mpz_t(), exponent);
  Rational r(num, den);
  r.canonicalize();
  return r;
}

}  // namespace mertens
