#pragma once

// Exact arithmetic in the maximal order O = Z[w] of an imaginary quadratic
// field with norm-Euclidean ring of integers.

#include <algorithm>
#include <array>
#include <compare>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cmtorsion/errors.hpp"
#include "cmtorsion/integer.hpp"

namespace cmt {

/// One of the five fundamental discriminants -3, -4, -7, -8, -11.
class Discriminant {
 public:
  explicit Discriminant(int value) : value_(value) {
    if (!is_supported(value))
      throw DomainError("unsupported discriminant " + std::to_string(value) +
                        " (expected -3, -4, -7, -8 or -11)");
  }

  static bool is_supported(int value) {
    return value == -3 || value == -4 || value == -7 || value == -8 || value == -11;
  }

  [[nodiscard]] int value() const noexcept { return value_; }

  // w^2 = trace_w * w - norm_w.
  [[nodiscard]] int trace_w() const noexcept { return value_ % 4 == 0 ? 0 : 1; }
  [[nodiscard]] int norm_w() const noexcept { return value_ % 4 == 0 ? -value_ / 4 : (1 - value_) / 4; }

  [[nodiscard]] std::size_t unit_count() const noexcept {
    return value_ == -3 ? 6 : (value_ == -4 ? 4 : 2);
  }

  friend bool operator==(Discriminant, Discriminant) = default;

 private:
  int value_;
};

class OrderElement {
 public:
  OrderElement(Integer a, Integer b, Discriminant disc)
      : a_(std::move(a)), b_(std::move(b)), disc_(disc) {}
  OrderElement(long a, Discriminant disc) : a_(a), b_(0), disc_(disc) {}

  static OrderElement zero(Discriminant d) { return {0, d}; }
  static OrderElement one(Discriminant d) { return {1, d}; }
  static OrderElement w(Discriminant d) { return {Integer(0), Integer(1), d}; }

  [[nodiscard]] const Integer& a() const noexcept { return a_; }
  [[nodiscard]] const Integer& b() const noexcept { return b_; }
  [[nodiscard]] Discriminant disc() const noexcept { return disc_; }

  [[nodiscard]] bool is_zero() const { return a_ == 0 && b_ == 0; }

  [[nodiscard]] Integer norm() const {
    return a_ * a_ + disc_.trace_w() * a_ * b_ + disc_.norm_w() * b_ * b_;
  }
  [[nodiscard]] Integer trace() const { return 2 * a_ + disc_.trace_w() * b_; }
  [[nodiscard]] OrderElement conj() const {
    return {a_ + disc_.trace_w() * b_, -b_, disc_};
  }

  OrderElement operator-() const { return {-a_, -b_, disc_}; }

  friend OrderElement operator+(const OrderElement& x, const OrderElement& y) {
    check_same(x, y);
    return {x.a_ + y.a_, x.b_ + y.b_, x.disc_};
  }
  friend OrderElement operator-(const OrderElement& x, const OrderElement& y) {
    check_same(x, y);
    return {x.a_ - y.a_, x.b_ - y.b_, x.disc_};
  }
  friend OrderElement operator*(const OrderElement& x, const OrderElement& y) {
    check_same(x, y);
    const int t = x.disc_.trace_w(), n = x.disc_.norm_w();
    Integer bd = x.b_ * y.b_;
    return {x.a_ * y.a_ - n * bd, x.a_ * y.b_ + x.b_ * y.a_ + t * bd, x.disc_};
  }
  friend OrderElement operator*(long k, const OrderElement& x) {
    return {k * x.a_, k * x.b_, x.disc_};
  }
  friend OrderElement operator*(const Integer& k, const OrderElement& x) {
    return {k * x.a_, k * x.b_, x.disc_};
  }
  OrderElement& operator+=(const OrderElement& y) { return *this = *this + y; }
  OrderElement& operator-=(const OrderElement& y) { return *this = *this - y; }
  OrderElement& operator*=(const OrderElement& y) { return *this = *this * y; }

  friend bool operator==(const OrderElement& x, const OrderElement& y) {
    return x.disc_ == y.disc_ && x.a_ == y.a_ && x.b_ == y.b_;
  }
  /// Lexicographic on (a, b); only meaningful within one order.
  friend std::strong_ordering operator<=>(const OrderElement& x, const OrderElement& y) {
    if (auto c = cmp(x.a_, y.a_); c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    if (auto c = cmp(x.b_, y.b_); c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  /// Residue with coordinates in [0, n) in the basis (1, w).
  [[nodiscard]] OrderElement reduced_mod(const Integer& n) const {
    return {mod(a_, n), mod(b_, n), disc_};
  }

  static void check_same(const OrderElement& x, const OrderElement& y) {
    if (!(x.disc_ == y.disc_))
      throw DomainError("order elements over different discriminants (" +
                        std::to_string(x.disc_.value()) + " vs " + std::to_string(y.disc_.value()) + ")");
  }

 private:
  Integer a_, b_;
  Discriminant disc_;
};

/// All units of the order: +-1, plus +-w (disc -4) or +-w, +-(w-1) (disc -3).
inline std::vector<OrderElement> units(Discriminant d) {
  std::vector<OrderElement> u{OrderElement::one(d), -OrderElement::one(d)};
  if (d.value() == -4) {
    u.push_back(OrderElement::w(d));
    u.push_back(-OrderElement::w(d));
  } else if (d.value() == -3) {
    auto w = OrderElement::w(d);
    u.push_back(w);
    u.push_back(-w);
    u.push_back(w - OrderElement::one(d));
    u.push_back(OrderElement::one(d) - w);
  }
  return u;
}

inline bool is_unit(const OrderElement& x) { return x.norm() == 1; }

/// The unit multiple u*x with a > 0 (or a = 0, b > 0) and lexicographically
/// largest (a, b). Zero maps to zero.
inline OrderElement canonical_associate(const OrderElement& x) {
  if (x.is_zero()) return x;
  std::optional<OrderElement> best;
  for (const auto& u : units(x.disc())) {
    OrderElement y = u * x;
    if (!(y.a() > 0 || (y.a() == 0 && y.b() > 0))) continue;
    if (!best || y > *best) best = y;
  }
  return *best;
}

/// The unit u with u*x == canonical_associate(x); one for x == 0.
inline OrderElement canonical_unit(const OrderElement& x) {
  if (x.is_zero()) return OrderElement::one(x.disc());
  OrderElement c = canonical_associate(x);
  for (const auto& u : units(x.disc()))
    if (u * x == c) return u;
  return OrderElement::one(x.disc());  // unreachable
}

struct DivResult {
  OrderElement quotient;
  OrderElement remainder;
};

/// Division with remainder: x = q*y + r with norm(r) < norm(y). The quotient
/// is the lattice point nearest to x/y, ties broken toward smaller (a, b).
inline DivResult euclid_div(const OrderElement& x, const OrderElement& y) {
  OrderElement::check_same(x, y);
  if (y.is_zero()) throw DivisionByZero("euclid_div: division by zero");
  const Discriminant d = x.disc();
  OrderElement num = x * y.conj();
  Integer ny = y.norm();
  Integer a0 = floor_div(num.a(), ny), b0 = floor_div(num.b(), ny);
  std::optional<OrderElement> best_q;
  Integer best_norm;
  for (int da = -1; da <= 2; ++da) {
    for (int db = -1; db <= 2; ++db) {
      OrderElement q(a0 + da, b0 + db, d);
      Integer nr = (x - q * y).norm();
      if (!best_q || nr < best_norm || (nr == best_norm && q < *best_q)) {
        best_q = q;
        best_norm = nr;
      }
    }
  }
  return {*best_q, x - *best_q * y};
}

/// True when y divides x in O.
inline bool divides(const OrderElement& y, const OrderElement& x) {
  OrderElement::check_same(x, y);
  if (y.is_zero()) return x.is_zero();
  OrderElement num = x * y.conj();
  Integer ny = y.norm();
  return mod(num.a(), ny) == 0 && mod(num.b(), ny) == 0;
}

/// x / y, requiring y | x.
inline OrderElement exact_div(const OrderElement& x, const OrderElement& y) {
  if (y.is_zero()) throw DivisionByZero("exact_div: division by zero");
  if (!divides(y, x)) throw DomainError("exact_div: divisor does not divide dividend");
  OrderElement num = x * y.conj();
  Integer ny = y.norm();
  return {Integer(num.a() / ny), Integer(num.b() / ny), x.disc()};
}

/// Greatest common divisor normalized to its canonical associate.
inline OrderElement gcd(OrderElement x, OrderElement y) {
  OrderElement::check_same(x, y);
  if (x.is_zero() && y.is_zero()) throw DomainError("gcd(0, 0) is undefined");
  while (!y.is_zero()) {
    OrderElement r = euclid_div(x, y).remainder;
    x = std::move(y);
    y = std::move(r);
  }
  return canonical_associate(x);
}

struct Bezout {
  OrderElement g, s, t;  // g = s*x + t*y
};

/// Extended Euclid; g is not normalized.
inline Bezout extended_gcd(const OrderElement& x, const OrderElement& y) {
  OrderElement::check_same(x, y);
  const Discriminant d = x.disc();
  OrderElement r0 = x, r1 = y;
  OrderElement s0 = OrderElement::one(d), s1 = OrderElement::zero(d);
  OrderElement t0 = OrderElement::zero(d), t1 = OrderElement::one(d);
  while (!r1.is_zero()) {
    auto [q, r] = euclid_div(r0, r1);
    r0 = std::exchange(r1, r);
    s0 = std::exchange(s1, s0 - q * s1);
    t0 = std::exchange(t1, t0 - q * t1);
  }
  return {r0, s0, t0};
}

/// Text encoding "a+b*w" with zero terms elided ("0", "3", "-2*w", "1-1*w").
inline std::string to_string(const OrderElement& x) {
  if (x.b() == 0) return x.a().get_str();
  std::string bw = x.b().get_str() + "*w";
  if (x.a() == 0) return bw;
  return x.a().get_str() + (x.b() > 0 ? "+" : "") + bw;
}

inline std::ostream& operator<<(std::ostream& os, const OrderElement& x) { return os << to_string(x); }

/// Parses "a", "b*w", "w", "-w", "a+b*w", "a-w", ...
inline OrderElement parse_order_element(std::string_view text, Discriminant d) {
  std::string s;
  for (char c : text)
    if (c != ' ' && c != '\t') s += c;
  if (s.empty()) throw ParseError("empty order element");
  auto bad = [&] { return ParseError("malformed order element '" + std::string(text) + "'"); };
  auto parse_int = [&](const std::string& t) {
    if (t.empty()) throw bad();
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) throw bad();
    for (std::size_t j = i; j < t.size(); ++j)
      if (t[j] < '0' || t[j] > '9') throw bad();
    return Integer(t[0] == '+' ? t.substr(1) : t);
  };
  if (s.back() != 'w') return {parse_int(s), Integer(0), d};
  // Split off the w-term: find the last sign not at position 0.
  std::size_t split = std::string::npos;
  for (std::size_t i = s.size() - 1; i > 0; --i)
    if (s[i] == '+' || s[i] == '-') {
      split = i;
      break;
    }
  std::string a_part = split == std::string::npos ? "" : s.substr(0, split);
  std::string w_part = split == std::string::npos ? s : s.substr(split);
  w_part.pop_back();  // drop 'w'
  if (!w_part.empty() && w_part.back() == '*') {
    w_part.pop_back();
    if (w_part.empty() || w_part.back() < '0' || w_part.back() > '9') throw bad();
  }
  Integer b;
  if (w_part.empty() || w_part == "+") b = 1;
  else if (w_part == "-") b = -1;
  else b = parse_int(w_part);
  Integer a = a_part.empty() ? Integer(0) : parse_int(a_part);
  return {a, b, d};
}

}  // namespace cmt
