#pragma once

// Algebraic subgroups of E^N as matrices over O, torsion points modeled in
// (O/nO)^N, and the dimension and degree bookkeeping around them.

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "cmtorsion/errors.hpp"
#include "cmtorsion/intlattice.hpp"
#include "cmtorsion/matrix.hpp"

namespace cmt {

/// An r x N matrix of full row rank r. Its kernel is a subgroup of E^N whose
/// connected component has dimension N - r. r = 0 is allowed (E^N itself).
class SubgroupMatrix {
 public:
  explicit SubgroupMatrix(OMatrix m) : m_(std::move(m)) {
    if (rank(m_) != m_.rows())
      throw RankError("subgroup matrix must have full row rank (rank " + std::to_string(rank(m_)) + " < " +
                      std::to_string(m_.rows()) + " rows)");
  }

  static SubgroupMatrix whole_space(Discriminant d, std::size_t n) { return SubgroupMatrix(OMatrix(d, 0, n)); }
  static SubgroupMatrix trivial(Discriminant d, std::size_t n) { return SubgroupMatrix(OMatrix::identity(d, n)); }

  [[nodiscard]] const OMatrix& matrix() const noexcept { return m_; }
  [[nodiscard]] Discriminant disc() const noexcept { return m_.disc(); }
  [[nodiscard]] std::size_t N() const noexcept { return m_.cols(); }
  [[nodiscard]] std::size_t codim() const noexcept { return m_.rows(); }
  [[nodiscard]] std::size_t dim() const noexcept { return m_.cols() - m_.rows(); }

  friend bool operator==(const SubgroupMatrix& x, const SubgroupMatrix& y) { return x.m_ == y.m_; }
  friend bool operator<(const SubgroupMatrix& x, const SubgroupMatrix& y) { return x.m_ < y.m_; }

 private:
  OMatrix m_;
};

/// A point of (1/n)O^N / O^N, stored as numerators reduced mod n.
class TorsionPoint {
 public:
  TorsionPoint(Discriminant d, Integer level, std::vector<OrderElement> coords)
      : disc_(d), level_(std::move(level)), coords_(std::move(coords)) {
    if (level_ < 1) throw DomainError("torsion level must be positive");
    for (auto& c : coords_) {
      OrderElement::check_same(c, OrderElement::zero(d));
      c = c.reduced_mod(level_);
    }
  }

  static TorsionPoint zero(Discriminant d, std::size_t n) {
    return {d, Integer(1), std::vector<OrderElement>(n, OrderElement::zero(d))};
  }

  [[nodiscard]] Discriminant disc() const noexcept { return disc_; }
  [[nodiscard]] const Integer& level() const noexcept { return level_; }
  [[nodiscard]] const std::vector<OrderElement>& coords() const noexcept { return coords_; }
  [[nodiscard]] std::size_t N() const noexcept { return coords_.size(); }

  /// Exact order: level / gcd(level, all coordinate components).
  [[nodiscard]] Integer order() const {
    Integer g = level_;
    for (const auto& c : coords_) g = cmt::gcd(cmt::gcd(g, c.a()), c.b());
    return level_ / g;
  }
  [[nodiscard]] bool is_zero() const { return order() == 1; }

  /// The same point written at a multiple of its level.
  [[nodiscard]] TorsionPoint at_level(const Integer& m) const {
    if (mod(m, level_) != 0) throw DomainError("at_level: new level must be a multiple of the current one");
    Integer f = m / level_;
    std::vector<OrderElement> c;
    for (const auto& x : coords_) c.push_back(f * x);
    return {disc_, m, std::move(c)};
  }
  /// Canonical representative at level equal to the order.
  [[nodiscard]] TorsionPoint reduced() const {
    Integer o = order();
    Integer f = level_ / o;
    std::vector<OrderElement> c;
    for (const auto& x : coords_) c.emplace_back(Integer(x.a() / f), Integer(x.b() / f), disc_);
    return {disc_, o, std::move(c)};
  }

  friend TorsionPoint operator+(const TorsionPoint& x, const TorsionPoint& y) {
    if (x.N() != y.N()) throw DomainError("torsion points of different length");
    Integer l = lcm(x.level_, y.level_);
    TorsionPoint xx = x.at_level(l), yy = y.at_level(l);
    std::vector<OrderElement> c;
    for (std::size_t i = 0; i < x.N(); ++i) c.push_back(xx.coords_[i] + yy.coords_[i]);
    return {x.disc_, l, std::move(c)};
  }
  TorsionPoint operator-() const {
    std::vector<OrderElement> c;
    for (const auto& x : coords_) c.push_back(-x);
    return {disc_, level_, std::move(c)};
  }
  friend TorsionPoint operator-(const TorsionPoint& x, const TorsionPoint& y) { return x + (-y); }

  /// Equality as points of E^N.
  friend bool operator==(const TorsionPoint& x, const TorsionPoint& y) {
    if (x.N() != y.N() || !(x.disc_ == y.disc_)) return false;
    TorsionPoint rx = x.reduced(), ry = y.reduced();
    return rx.level_ == ry.level_ && rx.coords_ == ry.coords_;
  }

 private:
  Discriminant disc_;
  Integer level_;
  std::vector<OrderElement> coords_;
};

/// M applied to a torsion point, at the point's level.
inline TorsionPoint apply(const OMatrix& m, const TorsionPoint& z) {
  return {z.disc(), z.level(), mul(m, z.coords())};
}

/// The torsion variety ker(phi_M) + zeta. For a saturated matrix this is the
/// connected coset B + zeta.
struct TorsionCoset {
  SubgroupMatrix subgroup;
  TorsionPoint zeta;

  [[nodiscard]] bool contains(const TorsionPoint& y) const { return apply(subgroup.matrix(), y - zeta).is_zero(); }
};

struct DegreeSurrogate {
  Integer minor_sum;    // sum over r x r minors of norm(det)
  Integer row_product;  // product over rows of sum of entry norms
};

inline SubgroupMatrix hnf(const SubgroupMatrix& m) { return SubgroupMatrix(hermite_form(m.matrix())); }

/// Saturated matrix cutting out the connected component B of ker(phi_M).
inline SubgroupMatrix connected_component(const SubgroupMatrix& m) {
  return SubgroupMatrix(hermite_form(saturate(m.matrix())));
}

inline std::vector<std::vector<std::size_t>> combinations(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  if (k > n) return out;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    out.push_back(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

inline Integer row_size(const OMatrix& m, std::size_t i) {
  Integer s = 0;
  for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j).norm();
  return s;
}

inline DegreeSurrogate degree_surrogate(const SubgroupMatrix& sm) {
  const OMatrix& m = sm.matrix();
  DegreeSurrogate d{Integer(0), Integer(1)};
  for (const auto& cols : combinations(m.cols(), m.rows())) d.minor_sum += det(m.select_cols(cols)).norm();
  for (std::size_t i = 0; i < m.rows(); ++i) d.row_product *= row_size(m, i);
  return d;
}

inline Integer binomial(std::size_t n, std::size_t k) {
  Integer b;
  mpz_bin_uiui(b.get_mpz_t(), n, k);
  return b;
}

/// All zeta in (O/nO)^N with M*zeta = 0 mod n, sorted lexicographically.
inline std::vector<TorsionPoint> kernel_at_level(const OMatrix& m, const Integer& n) {
  if (n < 1) throw DomainError("kernel_at_level: level must be positive");
  const std::size_t dim = 2 * m.cols();
  SmithForm s = smith_form(integer_model(m), dim);
  std::vector<Integer> step(dim), count(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    Integer di = i < s.diagonal.size() ? s.diagonal[i] : Integer(0);
    Integer g = cmt::gcd(n, di);
    count[i] = g;
    step[i] = n / g;
  }
  std::vector<IntVector> sols;
  IntVector y(dim, Integer(0));
  std::vector<Integer> ctr(dim, Integer(0));
  for (;;) {
    IntVector x = mat_vec(s.right, y);
    for (auto& c : x) c = mod(c, n);
    sols.push_back(std::move(x));
    std::size_t i = 0;
    while (i < dim) {
      ctr[i] += 1;
      if (ctr[i] < count[i]) {
        y[i] = ctr[i] * step[i];
        break;
      }
      ctr[i] = 0;
      y[i] = 0;
      ++i;
    }
    if (i == dim) break;
  }
  std::sort(sols.begin(), sols.end());
  std::vector<TorsionPoint> out;
  out.reserve(sols.size());
  for (const auto& x : sols) out.emplace_back(m.disc(), n, from_int_coords(x, m.disc()));
  return out;
}

inline std::vector<TorsionPoint> kernel_at_level(const SubgroupMatrix& m, const Integer& n) {
  return kernel_at_level(m.matrix(), n);
}

/// |{zeta in (O/nO)^N : M*zeta = 0}| without listing.
inline Integer kernel_size_at_level(const OMatrix& m, const Integer& n) {
  const std::size_t dim = 2 * m.cols();
  SmithForm s = smith_form(integer_model(m), dim);
  Integer total = 1;
  for (std::size_t i = 0; i < dim; ++i) total *= cmt::gcd(n, i < s.diagonal.size() ? s.diagonal[i] : Integer(0));
  return total;
}

/// Generators of the level-n kernel as a Z/n-module.
inline std::vector<TorsionPoint> kernel_generators_at_level(const OMatrix& m, const Integer& n) {
  const std::size_t dim = 2 * m.cols();
  SmithForm s = smith_form(integer_model(m), dim);
  std::vector<TorsionPoint> gens;
  for (std::size_t i = 0; i < dim; ++i) {
    Integer g = cmt::gcd(n, i < s.diagonal.size() ? s.diagonal[i] : Integer(0));
    if (g == 1) continue;
    IntVector x(dim);
    for (std::size_t r = 0; r < dim; ++r) x[r] = mod(s.right[r][i] * (n / g), n);
    gens.emplace_back(m.disc(), n, from_int_coords(x, m.disc()));
  }
  return gens;
}

/// Columns span the tangent space of the connected kernel of M (an N x d matrix).
inline OMatrix parametrization(const OMatrix& m) { return right_kernel(m).transpose(); }
inline OMatrix parametrization(const SubgroupMatrix& m) { return parametrization(m.matrix()); }

struct SumIntersection {
  std::size_t dim_sum;
  std::size_t dim_int;
  SubgroupMatrix sum_matrix;           // saturated, cuts out B1 + B2
  SubgroupMatrix intersection_matrix;  // saturated, cuts out (B1 cap B2)^0
};

inline void check_compatible(const SubgroupMatrix& h, const SubgroupMatrix& h2) {
  if (!(h.disc() == h2.disc()) || h.N() != h2.N())
    throw DomainError("subgroups live in different ambient spaces (N = " + std::to_string(h.N()) + " vs " +
                      std::to_string(h2.N()) + ")");
}

inline SumIntersection sum_and_intersection(const SubgroupMatrix& h, const SubgroupMatrix& h2) {
  check_compatible(h, h2);
  OMatrix st = saturate(h.matrix()).stack(saturate(h2.matrix()));
  OMatrix inter = hermite_form(saturate(st));
  OMatrix params = parametrization(h).hconcat(parametrization(h2));
  OMatrix sum = hermite_form(left_kernel(params));
  SubgroupMatrix sm(sum), im(inter);
  return {sm.dim(), im.dim(), std::move(sm), std::move(im)};
}

/// Smith invariants of the stacked saturated matrices; the kernel on E^N is
/// the product of the cyclic groups Z/d_i.
inline IntVector intersection_invariants(const SubgroupMatrix& h, const SubgroupMatrix& h2) {
  check_compatible(h, h2);
  OMatrix st = saturate(h.matrix()).stack(saturate(h2.matrix()));
  if (rank(st) < h.N())
    throw DimensionError("intersection is positive-dimensional (rank " + std::to_string(rank(st)) + " < N = " +
                         std::to_string(h.N()) + ")");
  return smith_form(integer_model(st), 2 * h.N()).diagonal;
}

/// |B1 cap B2| for connected subgroups with finite intersection.
inline Integer intersection_cardinality(const SubgroupMatrix& h, const SubgroupMatrix& h2) {
  Integer c = 1;
  for (const auto& d : intersection_invariants(h, h2)) c *= d;
  return c;
}

/// Smallest level n with B1 cap B2 contained in E[n]^N.
inline Integer intersection_exponent(const SubgroupMatrix& h, const SubgroupMatrix& h2) {
  Integer e = 1;
  for (const auto& d : intersection_invariants(h, h2)) e = lcm(e, d);
  return e;
}

/// True iff sum_i a_ij * conj(b_ik) = 0 for all columns j of A and k of B.
inline bool tangent_orthogonal(const OMatrix& a, const OMatrix& b) {
  if (a.rows() != b.rows() || !(a.disc() == b.disc()))
    throw DomainError("tangent_orthogonal: parametrizations of different ambient spaces");
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t k = 0; k < b.cols(); ++k) {
      OrderElement s = OrderElement::zero(a.disc());
      for (std::size_t i = 0; i < a.rows(); ++i) s += a(i, j) * b(i, k).conj();
      if (!s.is_zero()) return false;
    }
  return true;
}

struct OrthogonalComplement {
  SubgroupMatrix complement;  // saturated, hnf
  OMatrix parametrization;    // N x (N - dim B)
  Integer intersection;       // |B cap B_perp|
  Integer minor_sum;          // minor_sum of the saturated matrix of B
  Rational ratio;             // intersection / minor_sum^2
};

inline OrthogonalComplement orthogonal_complement(const SubgroupMatrix& m) {
  SubgroupMatrix b = connected_component(m);
  OMatrix p = parametrization(b);
  SubgroupMatrix perp(hermite_form(saturate(p.conj_transpose())));
  Integer inter = intersection_cardinality(b, perp);
  Integer ms = degree_surrogate(b).minor_sum;
  return {perp, parametrization(perp), inter, ms, Rational(inter, ms * ms)};
}

inline bool is_anomalous(int dim_y, int dim_v, int dim_b, int n) {
  if (n < 1 || dim_y < 0 || dim_y > dim_v || dim_v >= n || dim_y > dim_b || dim_b > n)
    throw DomainError("is_anomalous requires 0 <= dim_Y <= dim_V < N and dim_Y <= dim_B <= N (got dim_Y=" +
                      std::to_string(dim_y) + ", dim_V=" + std::to_string(dim_v) + ", dim_B=" +
                      std::to_string(dim_b) + ", N=" + std::to_string(n) + ")");
  return n - dim_y < (n - dim_v) + (n - dim_b);
}

struct TranslateCertificate {
  bool no_anomalous = true;
  bool dimension_anomalous = false;  // would a component of this dimension be anomalous
  bool proper_sum = false;           // dim(H + B) < N
  std::size_t dim_sum = 0;
  std::size_t dim_int = 0;
  SubgroupMatrix sum_matrix;
  std::string reason;
};

/// Dimension argument for a weak-transverse translate H + p against B + zeta:
/// an anomalous component of dimension dim_Y would force H + p inside the
/// proper torsion variety H + B + zeta.
inline TranslateCertificate translate_has_no_anomalous(const SubgroupMatrix& h, const SubgroupMatrix& b, int dim_y) {
  SumIntersection si = sum_and_intersection(h, b);
  const int n = static_cast<int>(h.N());
  if (dim_y < 0 || dim_y > static_cast<int>(si.dim_int))
    throw DomainError("dim_Y = " + std::to_string(dim_y) + " must lie in [0, dim(H cap B) = " +
                      std::to_string(si.dim_int) + "]");
  TranslateCertificate c{true, false, si.dim_sum < h.N(), si.dim_sum, si.dim_int, si.sum_matrix, ""};
  const int dh = static_cast<int>(h.dim()), db = static_cast<int>(b.dim());
  c.dimension_anomalous = n - dim_y < (n - dh) + (n - db);
  if (!c.dimension_anomalous) {
    c.reason = "not anomalous: codim Y >= codim H + codim B";
  } else {
    c.reason = "anomalous dimension forces dim(H+B) < N, so H+p lies in the proper torsion variety H+B+zeta, "
               "contradicting weak-transversality";
  }
  return c;
}

}  // namespace cmt
