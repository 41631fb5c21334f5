#pragma once

// Elements of the fraction field L = Q(w), stored as p + q*w with rational p, q.

#include <string>

#include "cmtorsion/errors.hpp"
#include "cmtorsion/integer.hpp"
#include "cmtorsion/order.hpp"

namespace cmt {

class FieldElement {
 public:
  FieldElement(Rational p, Rational q, Discriminant disc) : p_(std::move(p)), q_(std::move(q)), disc_(disc) {
    p_.canonicalize();
    q_.canonicalize();
  }
  FieldElement(const OrderElement& x) : p_(x.a()), q_(x.b()), disc_(x.disc()) {}  // NOLINT

  static FieldElement zero(Discriminant d) { return {Rational(0), Rational(0), d}; }
  static FieldElement one(Discriminant d) { return {Rational(1), Rational(0), d}; }

  [[nodiscard]] const Rational& p() const noexcept { return p_; }
  [[nodiscard]] const Rational& q() const noexcept { return q_; }
  [[nodiscard]] Discriminant disc() const noexcept { return disc_; }
  [[nodiscard]] bool is_zero() const { return p_ == 0 && q_ == 0; }
  /// Fixed by conjugation, i.e. lies in Q.
  [[nodiscard]] bool is_rational() const { return q_ == 0; }

  [[nodiscard]] Rational norm() const {
    return p_ * p_ + disc_.trace_w() * p_ * q_ + disc_.norm_w() * q_ * q_;
  }
  [[nodiscard]] Rational trace() const { return 2 * p_ + disc_.trace_w() * q_; }
  /// Real part under the complex embedding: trace / 2.
  [[nodiscard]] Rational real_part() const { return trace() / 2; }
  [[nodiscard]] FieldElement conj() const { return {p_ + disc_.trace_w() * q_, -q_, disc_}; }

  [[nodiscard]] bool is_integral() const { return is_integer(p_) && is_integer(q_); }
  [[nodiscard]] OrderElement to_order() const {
    if (!is_integral()) throw DomainError("field element is not integral");
    return {Integer(p_.get_num()), Integer(q_.get_num()), disc_};
  }

  FieldElement operator-() const { return {-p_, -q_, disc_}; }
  friend FieldElement operator+(const FieldElement& x, const FieldElement& y) {
    check(x, y);
    return {x.p_ + y.p_, x.q_ + y.q_, x.disc_};
  }
  friend FieldElement operator-(const FieldElement& x, const FieldElement& y) {
    check(x, y);
    return {x.p_ - y.p_, x.q_ - y.q_, x.disc_};
  }
  friend FieldElement operator*(const FieldElement& x, const FieldElement& y) {
    check(x, y);
    const int t = x.disc_.trace_w(), n = x.disc_.norm_w();
    Rational qq = x.q_ * y.q_;
    return {x.p_ * y.p_ - n * qq, x.p_ * y.q_ + x.q_ * y.p_ + t * qq, x.disc_};
  }
  friend FieldElement operator/(const FieldElement& x, const FieldElement& y) {
    check(x, y);
    if (y.is_zero()) throw DivisionByZero("field division by zero");
    FieldElement num = x * y.conj();
    Rational n = y.norm();
    return {num.p_ / n, num.q_ / n, x.disc_};
  }
  FieldElement& operator+=(const FieldElement& y) { return *this = *this + y; }
  FieldElement& operator-=(const FieldElement& y) { return *this = *this - y; }

  friend bool operator==(const FieldElement& x, const FieldElement& y) {
    return x.disc_ == y.disc_ && x.p_ == y.p_ && x.q_ == y.q_;
  }

 private:
  static void check(const FieldElement& x, const FieldElement& y) {
    if (!(x.disc_ == y.disc_)) throw DomainError("field elements over different discriminants");
  }
  Rational p_, q_;
  Discriminant disc_;
};

inline std::string to_string(const FieldElement& x) {
  if (x.q() == 0) return to_string(x.p());
  std::string qw = to_string(x.q()) + "*w";
  if (x.p() == 0) return qw;
  return to_string(x.p()) + (x.q() > 0 ? "+" : "") + qw;
}

}  // namespace cmt
