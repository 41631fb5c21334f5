#pragma once

// Brute-force reference implementations and random generators for tests.
// Nothing here calls the elimination or Smith code it is used to check.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <random>
#include <vector>

#include "cmtorsion/cmtorsion.hpp"

namespace oracle {

using namespace cmt;

const std::vector<int> kDiscs{-3, -4, -7, -8, -11};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(gen_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(gen_); }

  /// Uniform over elements with norm <= max_norm (possibly zero).
  OrderElement element(Discriminant d, long max_norm) {
    long s = 0;
    while ((s + 1) * (s + 1) <= max_norm) ++s;
    const long b = 2 * s + 1;
    for (;;) {
      OrderElement x(Integer(uniform(-b, b)), Integer(uniform(-b, b)), d);
      if (x.norm() <= max_norm) return x;
    }
  }
  OrderElement nonzero(Discriminant d, long max_norm) {
    for (;;) {
      OrderElement x = element(d, max_norm);
      if (!x.is_zero()) return x;
    }
  }
  OMatrix matrix(Discriminant d, std::size_t r, std::size_t c, long max_norm, double zero_p = 0.0) {
    OMatrix m(d, r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) m(i, j) = coin(zero_p) ? OrderElement::zero(d) : element(d, max_norm);
    return m;
  }
  /// Random full-row-rank matrix.
  OMatrix full_rank(Discriminant d, std::size_t r, std::size_t c, long max_norm, double zero_p = 0.0) {
    for (;;) {
      OMatrix m = matrix(d, r, c, max_norm, zero_p);
      if (rank(m) == r) return m;
    }
  }
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

/// Leibniz expansion of the determinant.
inline OrderElement leibniz_det(const OMatrix& m) {
  const std::size_t n = m.rows();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  OrderElement total = OrderElement::zero(m.disc());
  do {
    int sign = 1;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) sign = -sign;
    OrderElement term = OrderElement::one(m.disc());
    for (std::size_t i = 0; i < n; ++i) term = term * m(i, perm[i]);
    total += sign > 0 ? term : -term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

/// Sum over all r x r minors of norm(det), by Leibniz.
inline Integer minor_sum(const OMatrix& m) {
  Integer s = 0;
  for (const auto& cols : combinations(m.cols(), m.rows())) s += leibniz_det(m.select_cols(cols)).norm();
  return s;
}

/// All residues a + b w with 0 <= a, b < n.
inline std::vector<OrderElement> residues(Discriminant d, long n) {
  std::vector<OrderElement> out;
  for (long a = 0; a < n; ++a)
    for (long b = 0; b < n; ++b) out.emplace_back(Integer(a), Integer(b), d);
  return out;
}

inline bool divisible_by(const OrderElement& x, const Integer& n) {
  return mod(x.a(), n) == 0 && mod(x.b(), n) == 0;
}

/// Calls fn(v) for every v in (O/nO)^len.
template <class Fn>
void for_each_vector(Discriminant d, std::size_t len, long n, Fn&& fn) {
  const auto res = residues(d, n);
  std::vector<std::size_t> idx(len, 0);
  std::vector<OrderElement> v(len, OrderElement::zero(d));
  for (;;) {
    for (std::size_t i = 0; i < len; ++i) v[i] = res[idx[i]];
    fn(v);
    std::size_t i = 0;
    while (i < len && idx[i] + 1 == res.size()) idx[i++] = 0;
    if (i == len) break;
    ++idx[i];
  }
}

/// |{z in (O/nO)^N : M z = 0 mod n}| by exhaustive listing.
inline Integer brute_kernel_size(const OMatrix& m, long n) {
  Integer count = 0;
  const Integer nn(n);
  for_each_vector(m.disc(), m.cols(), n, [&](const std::vector<OrderElement>& v) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
      OrderElement s = OrderElement::zero(m.disc());
      for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j) * v[j];
      if (!divisible_by(s, nn)) return;
    }
    count += 1;
  });
  return count;
}

/// Sorted numerator vectors of the level-n kernel, by exhaustive listing.
inline std::vector<std::vector<OrderElement>> brute_kernel(const OMatrix& m, long n) {
  std::vector<std::vector<OrderElement>> out;
  const Integer nn(n);
  for_each_vector(m.disc(), m.cols(), n, [&](const std::vector<OrderElement>& v) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
      OrderElement s = OrderElement::zero(m.disc());
      for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j) * v[j];
      if (!divisible_by(s, nn)) return;
    }
    out.push_back(v);
  });
  std::sort(out.begin(), out.end());
  return out;
}

/// Smallest remainder norm over a wide window of quotients.
inline Integer best_remainder_norm(const OrderElement& x, const OrderElement& y) {
  FieldElement q = FieldElement(x) / FieldElement(y);
  const long a0 = mpz_class(floor_div(q.p().get_num(), q.p().get_den())).get_si();
  const long b0 = mpz_class(floor_div(q.q().get_num(), q.q().get_den())).get_si();
  std::optional<Integer> best;
  for (long a = a0 - 3; a <= a0 + 4; ++a)
    for (long b = b0 - 3; b <= b0 + 4; ++b) {
      Integer n = (x - OrderElement(Integer(a), Integer(b), x.disc()) * y).norm();
      if (!best || n < *best) best = n;
    }
  return *best;
}

/// Whether the rows of a are in the O-span of the rows of b (b full row rank),
/// by solving over L and checking integrality.
inline bool rows_in_span(const OMatrix& a, const OMatrix& b) {
  if (rank(b.stack(a)) != rank(b)) return false;
  // Coordinates c with c * b = row: solve using a left inverse over L.
  const std::size_t r = b.rows(), n = b.cols();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    // Gaussian elimination on the augmented system b^T c = a_i^T over L.
    std::vector<std::vector<FieldElement>> m(n, std::vector<FieldElement>(r + 1, FieldElement::zero(a.disc())));
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < r; ++k) m[j][k] = b(k, j);
      m[j][r] = a(i, j);
    }
    std::size_t row = 0;
    std::vector<std::size_t> piv;
    for (std::size_t c = 0; c < r && row < n; ++c) {
      std::size_t p = row;
      while (p < n && m[p][c].is_zero()) ++p;
      if (p == n) continue;
      std::swap(m[p], m[row]);
      FieldElement inv = FieldElement::one(a.disc()) / m[row][c];
      for (auto& e : m[row]) e = e * inv;
      for (std::size_t q = 0; q < n; ++q)
        if (q != row && !m[q][c].is_zero()) {
          FieldElement f = m[q][c];
          for (std::size_t k = 0; k <= r; ++k) m[q][k] = m[q][k] - f * m[row][k];
        }
      piv.push_back(c);
      ++row;
    }
    for (std::size_t k = 0; k < row; ++k)
      if (!m[k][r].is_integral()) return false;
  }
  return true;
}

/// Random hermitian positive-definite Gram matrix: conj(M)^T M + I.
inline Gram random_gram(Rng& rng, Discriminant d, std::size_t t, long max_norm = 4) {
  OMatrix m = rng.matrix(d, t, t, max_norm);
  Gram g(t, std::vector<FieldElement>(t, FieldElement::zero(d)));
  for (std::size_t j = 0; j < t; ++j)
    for (std::size_t k = 0; k < t; ++k) {
      OrderElement s = j == k ? OrderElement::one(d) : OrderElement::zero(d);
      for (std::size_t i = 0; i < t; ++i) s += m(i, j).conj() * m(i, k);
      g[j][k] = FieldElement(s);
    }
  return g;
}

inline ModulePoint random_module_point(Rng& rng, const ModuleSpec& s, long max_norm) {
  ModulePoint p = ModulePoint::zero(s);
  for (auto& a : p.free) a = rng.element(s.disc(), max_norm);
  p.torsion = rng.element(s.disc(), 4 * s.torsion_order().get_si() * s.torsion_order().get_si())
                  .reduced_mod(s.torsion_order());
  return p;
}

/// A point whose coefficient matrix is a random combination A = U W with U of
/// size N x rank.
inline PointInEN random_point_of_rank(Rng& rng, const ModuleSpec& s, std::size_t n, std::size_t rk, long max_norm) {
  const Discriminant d = s.disc();
  OMatrix u = rng.matrix(d, n, rk, max_norm, 0.3);
  OMatrix w = rng.matrix(d, rk, s.rank(), max_norm);
  OMatrix a = u * w;
  PointInEN x;
  for (std::size_t i = 0; i < n; ++i) {
    ModulePoint m = ModulePoint::zero(s);
    for (std::size_t j = 0; j < s.rank(); ++j) m.free[j] = a(i, j);
    m.torsion = rng.element(d, 50).reduced_mod(s.torsion_order());
    x.coords.push_back(std::move(m));
  }
  return x;
}

}  // namespace oracle
