#pragma once

// Small solutions of underdetermined linear systems over O: LLL on the
// Z-lattice of the kernel, a short box search, and a size certificate.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cmtorsion/errors.hpp"
#include "cmtorsion/intlattice.hpp"
#include "cmtorsion/matrix.hpp"
#include "cmtorsion/subgroup.hpp"

namespace cmt {

/// 2^(2n) * |disc|^n.
inline Rational default_siegel_constant(Discriminant d, std::size_t n) {
  return Rational(pow(Integer(2), 2 * n) * pow(Integer(-d.value()), n));
}

struct SiegelCertificate {
  std::size_t m = 0, n = 0, k = 0;
  Integer size_term;   // T = product over independent rows of the sum of entry norms
  Rational exponent;   // m/(n-m) for k = 1, max(m/(n-m), 2) otherwise
  Rational constant;   // c_S
  Integer max_norm;    // largest coordinate norm over all returned solutions
  bool holds = false;  // max_norm <= c_S * T^exponent, checked exactly
  long double log10_achieved = 0;  // log10(max_norm / T^exponent)
};

struct SiegelResult {
  std::vector<std::vector<OrderElement>> solutions;
  std::vector<std::size_t> used_rows;
  SiegelCertificate certificate;
};

inline Integer max_coordinate_norm(const std::vector<OrderElement>& v) {
  Integer m = 0;
  for (const auto& x : v) m = std::max(m, x.norm());
  return m;
}

/// k solutions of S v = 0, independent over L, normalized so that the first
/// nonzero entry is a canonical associate.
inline SiegelResult small_solution(const OMatrix& s, std::size_t k, std::optional<Rational> c_s = std::nullopt) {
  const Discriminant d = s.disc();
  const std::size_t n = s.cols();
  if (k == 0) throw DomainError("small_solution: requested count must be >= 1");
  std::vector<std::size_t> used;
  for (std::size_t i = 0; i < s.rows(); ++i) {
    std::vector<std::size_t> trial = used;
    trial.push_back(i);
    if (rank(s.select_rows(trial)) == trial.size()) used = std::move(trial);
  }
  const std::size_t m = used.size();
  if (k > n - m)
    throw DomainError("small_solution: requested " + std::to_string(k) + " solutions but the kernel has rank " +
                      std::to_string(n - m));
  OMatrix sys = s.select_rows(used);

  OMatrix kernel = right_kernel(sys);
  std::vector<IntVector> zbasis;
  const OrderElement w = OrderElement::w(d);
  for (std::size_t i = 0; i < kernel.rows(); ++i) {
    std::vector<OrderElement> v = kernel.row(i), wv;
    for (const auto& x : v) wv.push_back(w * x);
    zbasis.push_back(to_int_coords(v));
    zbasis.push_back(to_int_coords(wv));
  }
  std::vector<IntVector> red = lll_reduce(zbasis, norm_form_gram(d, n));

  std::set<std::vector<OrderElement>> seen;
  std::vector<std::vector<OrderElement>> cands;
  auto offer = [&](const IntVector& c) {
    std::vector<OrderElement> v = normalize_vector(from_int_coords(c, d));
    bool nonzero = std::any_of(v.begin(), v.end(), [](const OrderElement& x) { return !x.is_zero(); });
    if (nonzero && seen.insert(v).second) cands.push_back(std::move(v));
  };
  for (const auto& b : red) offer(b);
  const std::size_t dim = red.size();
  if (dim > 0 && dim <= 8) {
    std::vector<int> coef(dim, -1);
    for (;;) {
      IntVector c(2 * n, Integer(0));
      for (std::size_t i = 0; i < dim; ++i)
        if (coef[i] != 0)
          for (std::size_t r = 0; r < 2 * n; ++r) c[r] += coef[i] * red[i][r];
      offer(c);
      std::size_t i = 0;
      while (i < dim && coef[i] == 1) coef[i++] = -1;
      if (i == dim) break;
      ++coef[i];
    }
  }
  auto total = [](const std::vector<OrderElement>& v) {
    Integer t = 0;
    for (const auto& x : v) t += x.norm();
    return t;
  };
  std::stable_sort(cands.begin(), cands.end(), [&](const auto& x, const auto& y) {
    Integer mx = max_coordinate_norm(x), my = max_coordinate_norm(y);
    if (mx != my) return mx < my;
    Integer tx = total(x), ty = total(y);
    if (tx != ty) return tx < ty;
    return x < y;
  });

  SiegelResult res;
  res.used_rows = used;
  for (const auto& v : cands) {
    if (res.solutions.size() == k) break;
    std::vector<std::vector<OrderElement>> trial = res.solutions;
    trial.push_back(v);
    if (rank(OMatrix::from_rows(d, n, trial)) == trial.size()) res.solutions = std::move(trial);
  }
  if (res.solutions.size() < k) throw DomainError("small_solution: kernel basis exhausted");  // unreachable

  SiegelCertificate& c = res.certificate;
  c.m = m;
  c.n = n;
  c.k = k;
  c.size_term = 1;
  for (std::size_t i = 0; i < m; ++i) c.size_term *= row_size(sys, i);
  c.exponent = Rational(static_cast<long>(m), static_cast<long>(n - m));
  c.exponent.canonicalize();
  if (k >= 2 && c.exponent < 2) c.exponent = 2;
  c.constant = c_s.value_or(default_siegel_constant(d, n));
  if (c.constant <= 0) throw DomainError("Siegel constant must be positive");
  c.max_norm = 0;
  for (const auto& v : res.solutions) c.max_norm = std::max(c.max_norm, max_coordinate_norm(v));
  Rational lhs(c.max_norm);
  lhs /= c.constant;
  c.holds = compare_rational_powers(lhs, Rational(1), Rational(c.size_term), c.exponent) <= 0;
  c.log10_achieved = log10_of(c.max_norm) - to_long_double(c.exponent) * log10_of(c.size_term);
  return res;
}

struct SquareCompletion {
  OMatrix square;  // M on top, N - r small rows below
  OrderElement determinant;
  std::optional<SiegelResult> siegel;
};

/// Completes M with small solutions v of conj(M) v = 0; the added rows are
/// hermitian-orthogonal to the rows of M, so the square matrix is invertible
/// over L.
inline SquareCompletion complete_to_square(const SubgroupMatrix& m, std::optional<Rational> c_s = std::nullopt) {
  const std::size_t n = m.N(), r = m.codim();
  if (r == n) return {m.matrix(), det(m.matrix()), std::nullopt};
  SiegelResult sr = small_solution(m.matrix().conj(), n - r, c_s);
  OMatrix sq = m.matrix().stack(OMatrix::from_rows(m.disc(), n, sr.solutions));
  OrderElement dt = det(sq);
  if (dt.is_zero()) throw RankError("complete_to_square: completion is singular");  // unreachable
  return {std::move(sq), std::move(dt), std::move(sr)};
}

}  // namespace cmt
