#pragma once

// Finite-rank model of a Mordell-Weil group: points are O-combinations of
// abstract generators g_1..g_t plus a multiple of a torsion generator T of
// order R, with a hermitian Neron-Tate pairing given by a Gram matrix.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "cmtorsion/errors.hpp"
#include "cmtorsion/field.hpp"
#include "cmtorsion/matrix.hpp"
#include "cmtorsion/subgroup.hpp"

namespace cmt {

using Gram = std::vector<std::vector<FieldElement>>;

class ModuleSpec {
 public:
  ModuleSpec(Discriminant d, Gram gram, Integer torsion_order)
      : disc_(d), gram_(std::move(gram)), torsion_order_(std::move(torsion_order)) {
    if (torsion_order_ < 1) throw DomainError("torsion_order must be >= 1");
    const std::size_t t = gram_.size();
    for (std::size_t j = 0; j < t; ++j) {
      if (gram_[j].size() != t) throw DomainError("gram must be square");
      for (std::size_t k = 0; k < t; ++k)
        if (!(gram_[j][k].disc() == d)) throw DomainError("gram entry over a different discriminant");
    }
    for (std::size_t j = 0; j < t; ++j)
      for (std::size_t k = 0; k < t; ++k)
        if (!(gram_[j][k] == gram_[k][j].conj()))
          throw DomainError("gram is not hermitian at (" + std::to_string(j) + ", " + std::to_string(k) + ")");
    // Hermitian Gaussian elimination; all pivots must be positive rationals.
    Gram a = gram_;
    for (std::size_t k = 0; k < t; ++k) {
      const FieldElement piv = a[k][k];
      if (!piv.is_rational() || piv.p() <= 0) throw DomainError("gram is not positive definite");
      for (std::size_t i = k + 1; i < t; ++i) {
        FieldElement f = a[i][k] / piv;
        for (std::size_t j = k; j < t; ++j) a[i][j] -= f * a[k][j];
      }
    }
  }

  /// Identity Gram matrix of rank t.
  static ModuleSpec standard(Discriminant d, std::size_t t, Integer torsion_order = 1) {
    Gram g(t);
    for (std::size_t j = 0; j < t; ++j)
      for (std::size_t k = 0; k < t; ++k) g[j].push_back(j == k ? FieldElement::one(d) : FieldElement::zero(d));
    return {d, std::move(g), std::move(torsion_order)};
  }

  [[nodiscard]] Discriminant disc() const noexcept { return disc_; }
  [[nodiscard]] std::size_t rank() const noexcept { return gram_.size(); }
  [[nodiscard]] const Gram& gram() const noexcept { return gram_; }
  [[nodiscard]] const Integer& torsion_order() const noexcept { return torsion_order_; }

 private:
  Discriminant disc_;
  Gram gram_;
  Integer torsion_order_;
};

struct ModulePoint {
  std::vector<OrderElement> free;  // coefficients on g_1..g_t
  OrderElement torsion;            // multiple of T, reduced mod R

  static ModulePoint zero(const ModuleSpec& s) {
    return {std::vector<OrderElement>(s.rank(), OrderElement::zero(s.disc())), OrderElement::zero(s.disc())};
  }
  static ModulePoint generator(const ModuleSpec& s, std::size_t j) {
    ModulePoint p = zero(s);
    p.free.at(j) = OrderElement::one(s.disc());
    return p;
  }
  static ModulePoint torsion_point(const ModuleSpec& s, const OrderElement& beta) {
    ModulePoint p = zero(s);
    p.torsion = beta.reduced_mod(s.torsion_order());
    return p;
  }
  [[nodiscard]] bool is_torsion() const {
    for (const auto& a : free)
      if (!a.is_zero()) return false;
    return true;
  }
  friend bool operator==(const ModulePoint&, const ModulePoint&) = default;
};

struct PointInEN {
  std::vector<ModulePoint> coords;

  [[nodiscard]] std::size_t N() const noexcept { return coords.size(); }
  [[nodiscard]] bool is_torsion() const {
    for (const auto& c : coords)
      if (!c.is_torsion()) return false;
    return true;
  }
  friend bool operator==(const PointInEN&, const PointInEN&) = default;
};

inline ModulePoint validated(const ModuleSpec& s, ModulePoint p) {
  if (p.free.size() != s.rank())
    throw DomainError("point has " + std::to_string(p.free.size()) + " free coefficients, module rank is " +
                      std::to_string(s.rank()));
  for (const auto& a : p.free) OrderElement::check_same(a, OrderElement::zero(s.disc()));
  OrderElement::check_same(p.torsion, OrderElement::zero(s.disc()));
  p.torsion = p.torsion.reduced_mod(s.torsion_order());
  return p;
}

inline PointInEN validated(const ModuleSpec& s, PointInEN x) {
  for (auto& c : x.coords) c = validated(s, std::move(c));
  return x;
}

inline ModulePoint add(const ModuleSpec& s, const ModulePoint& p, const ModulePoint& q) {
  ModulePoint r = p;
  for (std::size_t j = 0; j < r.free.size(); ++j) r.free[j] += q.free.at(j);
  r.torsion = (p.torsion + q.torsion).reduced_mod(s.torsion_order());
  return r;
}

inline ModulePoint scale(const ModuleSpec& s, const OrderElement& tau, const ModulePoint& p) {
  ModulePoint r = p;
  for (auto& a : r.free) a = tau * a;
  r.torsion = (tau * p.torsion).reduced_mod(s.torsion_order());
  return r;
}

inline PointInEN add(const ModuleSpec& s, const PointInEN& x, const PointInEN& y) {
  if (x.N() != y.N()) throw DomainError("points of different length");
  PointInEN r;
  for (std::size_t i = 0; i < x.N(); ++i) r.coords.push_back(add(s, x.coords[i], y.coords[i]));
  return r;
}

inline PointInEN scale(const ModuleSpec& s, const OrderElement& tau, const PointInEN& x) {
  PointInEN r;
  for (const auto& c : x.coords) r.coords.push_back(scale(s, tau, c));
  return r;
}

inline PointInEN negate(const ModuleSpec& s, const PointInEN& x) { return scale(s, -OrderElement::one(s.disc()), x); }

/// Multiplication by tau, acting coordinatewise.
inline PointInEN isogeny_action(const ModuleSpec& s, const OrderElement& tau, const PointInEN& x) {
  return scale(s, tau, x);
}
inline ModulePoint isogeny_action(const ModuleSpec& s, const OrderElement& tau, const ModulePoint& p) {
  return scale(s, tau, p);
}

/// <p, q> = sum_jk alpha_j conj(beta_k) G_jk; linear in p, conjugate-linear in q.
inline FieldElement nt_pairing(const ModuleSpec& s, const ModulePoint& p, const ModulePoint& q) {
  FieldElement z = FieldElement::zero(s.disc());
  for (std::size_t j = 0; j < s.rank(); ++j) {
    if (p.free.at(j).is_zero()) continue;
    for (std::size_t k = 0; k < s.rank(); ++k) {
      if (q.free.at(k).is_zero()) continue;
      z += FieldElement(p.free[j] * q.free[k].conj()) * s.gram()[j][k];
    }
  }
  return z;
}

inline FieldElement nt_pairing(const ModuleSpec& s, const PointInEN& x, const PointInEN& y) {
  if (x.N() != y.N()) throw DomainError("points of different length");
  FieldElement z = FieldElement::zero(s.disc());
  for (std::size_t i = 0; i < x.N(); ++i) z += nt_pairing(s, x.coords[i], y.coords[i]);
  return z;
}

inline Rational nt_height(const ModuleSpec& s, const ModulePoint& p) { return nt_pairing(s, p, p).real_part(); }
inline Rational nt_height(const ModuleSpec& s, const PointInEN& x) { return nt_pairing(s, x, x).real_part(); }

/// The N x t matrix of free coefficients.
inline OMatrix coefficient_matrix(const ModuleSpec& s, const PointInEN& x) {
  OMatrix a(s.disc(), x.N(), s.rank());
  for (std::size_t i = 0; i < x.N(); ++i)
    for (std::size_t j = 0; j < s.rank(); ++j) a(i, j) = x.coords[i].free.at(j);
  return a;
}

/// The torsion parts of x as a point of E^N at level R.
inline TorsionPoint torsion_part(const ModuleSpec& s, const PointInEN& x) {
  std::vector<OrderElement> c;
  for (const auto& m : x.coords) c.push_back(m.torsion);
  return {s.disc(), s.torsion_order(), std::move(c)};
}

struct MinimalCoset {
  TorsionCoset coset;       // saturated hnf matrix K with K*x = K*zeta
  std::size_t dim_b;        // rank of the coefficient matrix
  TorsionPoint relations;   // K*zeta
};

/// Smallest torsion coset B + zeta containing x. B is cut out by the
/// saturated left kernel of the coefficient matrix.
inline MinimalCoset minimal_coset(const ModuleSpec& s, const PointInEN& x) {
  OMatrix a = coefficient_matrix(s, x);
  SubgroupMatrix k(hermite_form(left_kernel(a)));
  TorsionPoint zeta = torsion_part(s, x);
  TorsionPoint rel = apply(k.matrix(), zeta);
  std::size_t dim_b = k.dim();
  return {{std::move(k), std::move(zeta)}, dim_b, std::move(rel)};
}

/// Whether x lies in ker(phi_K) + zeta: K kills the free part and K*(torsion(x) - zeta) = 0.
inline bool coset_contains(const ModuleSpec& s, const TorsionCoset& c, const PointInEN& x) {
  const OMatrix& k = c.subgroup.matrix();
  if (k.cols() != x.N()) return false;
  if (!(k * coefficient_matrix(s, x)).is_zero()) return false;
  return apply(k, torsion_part(s, x) - c.zeta).is_zero();
}

/// Points of H generated by the parametrization columns times each generator.
inline std::vector<PointInEN> subgroup_generator_images(const ModuleSpec& s, const OMatrix& param) {
  std::vector<PointInEN> out;
  for (std::size_t c = 0; c < param.cols(); ++c)
    for (std::size_t j = 0; j < s.rank(); ++j) {
      PointInEN q;
      for (std::size_t i = 0; i < param.rows(); ++i) {
        ModulePoint m = ModulePoint::zero(s);
        m.free[j] = param(i, c);
        q.coords.push_back(std::move(m));
      }
      out.push_back(std::move(q));
    }
  return out;
}

/// Essential minimum of the translate H + y0 for y0 orthogonal to H: equals h(y0).
inline Rational essential_minimum_translate(const ModuleSpec& s, const SubgroupMatrix& h, const PointInEN& y0) {
  if (y0.N() != h.N()) throw DomainError("point and subgroup live in different powers");
  for (const auto& q : subgroup_generator_images(s, parametrization(h)))
    if (!nt_pairing(s, y0, q).is_zero()) throw PreconditionError("y0 is not orthogonal to H");
  return nt_height(s, y0);
}

}  // namespace cmt
