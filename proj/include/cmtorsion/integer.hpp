#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include "cmtorsion/errors.hpp"

namespace cmt {

using Integer = mpz_class;
using Rational = mpq_class;

inline std::string to_string(const Integer& z) { return z.get_str(); }

inline std::string to_string(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return c.get_str();
}

inline Integer abs(const Integer& z) { return z < 0 ? Integer(-z) : z; }

/// Floor division rounding toward negative infinity.
inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

/// Non-negative residue of a modulo m (m > 0).
inline Integer mod(const Integer& a, const Integer& m) {
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

inline Integer gcd(const Integer& a, const Integer& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Integer lcm(const Integer& a, const Integer& b) {
  Integer l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

inline Integer pow(const Integer& base, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline Rational pow(const Rational& base, unsigned long e) {
  Integer n = pow(Integer(base.get_num()), e);
  Integer d = pow(Integer(base.get_den()), e);
  Rational r(n, d);
  r.canonicalize();
  return r;
}

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

/// Parses an integer ("-12"), a fraction ("3/4") or a finite decimal ("0.125").
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.pop_back();
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
  if (s.empty()) throw ParseError("empty rational");
  auto valid_int = [](const std::string& t) {
    if (t.empty()) return false;
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  auto make_int = [](std::string t) {
    if (!t.empty() && t[0] == '+') t.erase(t.begin());
    return Integer(t);
  };
  if (auto slash = s.find('/'); slash != std::string::npos) {
    std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    if (!valid_int(num) || !valid_int(den)) throw ParseError("malformed rational '" + s + "'");
    Integer d = make_int(den);
    if (d == 0) throw ParseError("zero denominator in '" + s + "'");
    Rational q(make_int(num), d);
    q.canonicalize();
    return q;
  }
  if (auto dot = s.find('.'); dot != std::string::npos) {
    std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
    bool neg = !ip.empty() && ip[0] == '-';
    if (ip.empty() || ip == "-" || ip == "+") ip += "0";
    if (!valid_int(ip) || (!fp.empty() && !valid_int(fp)) || (!fp.empty() && (fp[0] == '-' || fp[0] == '+')))
      throw ParseError("malformed decimal '" + s + "'");
    Integer scale = pow(Integer(10), fp.size());
    Integer whole = make_int(ip);
    Integer frac = fp.empty() ? Integer(0) : Integer(fp);
    Integer num = abs(whole) * scale + frac;
    if (neg) num = -num;
    Rational q(num, scale);
    q.canonicalize();
    return q;
  }
  if (!valid_int(s)) throw ParseError("malformed integer '" + s + "'");
  return Rational(make_int(s));
}

/// Decimal logarithm of a positive integer, accurate for huge values.
inline long double log10_of(const Integer& z) {
  if (z <= 0) throw DomainError("log10 of a non-positive integer");
  long e = 0;
  double m = mpz_get_d_2exp(&e, z.get_mpz_t());
  return std::log10(static_cast<long double>(m)) + static_cast<long double>(e) * std::log10(2.0L);
}

inline long double log10_of(const Rational& q) {
  return log10_of(Integer(q.get_num())) - log10_of(Integer(q.get_den()));
}

inline long double to_long_double(const Rational& q) {
  return static_cast<long double>(q.get_num().get_d()) / static_cast<long double>(q.get_den().get_d());
}

/// Exact comparison of a^(p/q) against b^(r/s) for positive rationals a, b and
/// non-negative rational exponents.
inline int compare_rational_powers(const Rational& a, const Rational& pa, const Rational& b,
                                   const Rational& pb) {
  // a^(n1/d1) vs b^(n2/d2): raise both sides to d1*d2.
  Integer n1 = pa.get_num(), d1 = pa.get_den(), n2 = pb.get_num(), d2 = pb.get_den();
  if (n1 < 0 || n2 < 0) throw DomainError("compare_rational_powers: negative exponent");
  Rational lhs = pow(a, Integer(n1 * d2).get_ui());
  Rational rhs = pow(b, Integer(n2 * d1).get_ui());
  return cmp(lhs, rhs) < 0 ? -1 : (cmp(lhs, rhs) > 0 ? 1 : 0);
}

}  // namespace cmt
