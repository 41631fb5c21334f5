#pragma once

// Integer matrices: the Z-model of O-matrices, Bareiss determinants, Smith
// normal form with transforms and exact LLL reduction.

#include <algorithm>
#include <cstddef>
#include <vector>

#include "cmtorsion/integer.hpp"
#include "cmtorsion/matrix.hpp"

namespace cmt {

using IntVector = std::vector<Integer>;
using IntMatrix = std::vector<IntVector>;

inline IntMatrix int_identity(std::size_t n) {
  IntMatrix m(n, IntVector(n, Integer(0)));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

/// 2x2 integer block of multiplication by x on the basis (1, w), acting on
/// column coordinates.
inline IntMatrix multiplication_block(const OrderElement& x) {
  const int t = x.disc().trace_w(), n = x.disc().norm_w();
  return {{x.a(), -n * x.b()}, {x.b(), x.a() + t * x.b()}};
}

/// The 2r x 2N integer matrix of the map O^N -> O^r given by A.
inline IntMatrix integer_model(const OMatrix& a) {
  IntMatrix m(2 * a.rows(), IntVector(2 * a.cols(), Integer(0)));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      IntMatrix blk = multiplication_block(a(i, j));
      for (int u = 0; u < 2; ++u)
        for (int v = 0; v < 2; ++v) m[2 * i + u][2 * j + v] = blk[u][v];
    }
  return m;
}

/// Fraction-free Gaussian elimination.
inline Integer bareiss_det(IntMatrix m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  Integer sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && m[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(m[p], m[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

struct SmithForm {
  IntVector diagonal;  // min(rows, cols) entries, non-negative, each dividing the next
  IntMatrix left;      // U, unimodular, rows x rows
  IntMatrix right;     // V, unimodular, cols x cols; U*A*V = diag
};

inline SmithForm smith_form(const IntMatrix& a, std::size_t cols_hint = 0) {
  const std::size_t m = a.size();
  const std::size_t n = m == 0 ? cols_hint : a[0].size();
  IntMatrix d = a;
  IntMatrix u = int_identity(m), v = int_identity(n);
  auto row_sub = [](IntMatrix& x, std::size_t i, std::size_t k, const Integer& q) {
    for (std::size_t j = 0; j < x[i].size(); ++j) x[i][j] -= q * x[k][j];
  };
  auto col_sub = [](IntMatrix& x, std::size_t j, std::size_t k, const Integer& q) {
    for (auto& row : x) row[j] -= q * row[k];
  };
  auto col_swap = [](IntMatrix& x, std::size_t j, std::size_t k) {
    for (auto& row : x) std::swap(row[j], row[k]);
  };
  const std::size_t lim = std::min(m, n);
  for (std::size_t t = 0; t < lim; ++t) {
    for (;;) {
      std::size_t bi = m, bj = n;
      Integer best;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j)
          if (d[i][j] != 0 && (bi == m || abs(d[i][j]) < best)) {
            bi = i;
            bj = j;
            best = abs(d[i][j]);
          }
      if (bi == m) break;
      std::swap(d[bi], d[t]);
      std::swap(u[bi], u[t]);
      col_swap(d, bj, t);
      col_swap(v, bj, t);
      bool dirty = false;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (d[i][t] == 0) continue;
        Integer q = d[i][t] / d[t][t];
        row_sub(d, i, t, q);
        row_sub(u, i, t, q);
        if (d[i][t] != 0) dirty = true;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (d[t][j] == 0) continue;
        Integer q = d[t][j] / d[t][t];
        col_sub(d, j, t, q);
        col_sub(v, j, t, q);
        if (d[t][j] != 0) dirty = true;
      }
      if (dirty) continue;
      bool fixed = false;
      for (std::size_t i = t + 1; i < m && !fixed; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (mod(d[i][j], abs(d[t][t])) != 0) {
            for (std::size_t c = 0; c < n; ++c) d[t][c] += d[i][c];
            for (std::size_t c = 0; c < m; ++c) u[t][c] += u[i][c];
            fixed = true;
            break;
          }
      if (!fixed) break;
    }
    if (d[t][t] < 0) {
      for (auto& x : d[t]) x = -x;
      for (auto& x : u[t]) x = -x;
    }
  }
  SmithForm s{{}, std::move(u), std::move(v)};
  for (std::size_t t = 0; t < lim; ++t) s.diagonal.push_back(d[t][t]);
  return s;
}

inline IntVector mat_vec(const IntMatrix& a, const IntVector& x) {
  IntVector y(a.size(), Integer(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
  return y;
}

inline Integer bilinear(const IntVector& x, const IntMatrix& g, const IntVector& y) {
  Integer s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < y.size(); ++j) s += x[i] * g[i][j] * y[j];
  }
  return s;
}

/// Exact LLL reduction (delta = 3/4) of linearly independent integer vectors
/// with respect to the positive definite form g.
inline std::vector<IntVector> lll_reduce(std::vector<IntVector> b, const IntMatrix& g) {
  const std::size_t n = b.size();
  if (n < 2) return b;
  std::vector<std::vector<Rational>> mu(n, std::vector<Rational>(n));
  std::vector<Rational> bstar_norm(n);
  std::vector<std::vector<Rational>> bstar(n);
  auto gram_schmidt = [&]() {
    const std::size_t dim = b[0].size();
    for (std::size_t i = 0; i < n; ++i) {
      bstar[i].assign(dim, Rational(0));
      for (std::size_t c = 0; c < dim; ++c) bstar[i][c] = b[i][c];
      for (std::size_t j = 0; j < i; ++j) {
        Rational ip = 0;
        for (std::size_t r = 0; r < dim; ++r)
          for (std::size_t c = 0; c < dim; ++c)
            if (g[r][c] != 0) ip += Rational(b[i][r]) * g[r][c] * bstar[j][c];
        mu[i][j] = ip / bstar_norm[j];
        for (std::size_t c = 0; c < dim; ++c) bstar[i][c] -= mu[i][j] * bstar[j][c];
      }
      Rational nn = 0;
      for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c)
          if (g[r][c] != 0) nn += bstar[i][r] * g[r][c] * bstar[i][c];
      bstar_norm[i] = nn;
    }
  };
  auto round_nearest = [](const Rational& q) {
    Rational h = q + Rational(1, 2);
    return floor_div(Integer(h.get_num()), Integer(h.get_den()));
  };
  gram_schmidt();
  const Rational delta(3, 4);
  std::size_t k = 1;
  while (k < n) {
    for (std::size_t jj = k; jj-- > 0;) {
      Integer q = round_nearest(mu[k][jj]);
      if (q == 0) continue;
      for (std::size_t c = 0; c < b[k].size(); ++c) b[k][c] -= q * b[jj][c];
      for (std::size_t i = 0; i < jj; ++i) mu[k][i] -= q * mu[jj][i];
      mu[k][jj] -= q;
    }
    if (bstar_norm[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * bstar_norm[k - 1]) {
      ++k;
    } else {
      std::swap(b[k], b[k - 1]);
      gram_schmidt();
      k = std::max<std::size_t>(k - 1, 1);
    }
  }
  return b;
}

/// Doubled norm form on O^n in coordinates (a_1, b_1, ..., a_n, b_n):
/// x^T G x = 2 * sum norm(x_i).
inline IntMatrix norm_form_gram(Discriminant d, std::size_t n) {
  IntMatrix g(2 * n, IntVector(2 * n, Integer(0)));
  for (std::size_t i = 0; i < n; ++i) {
    g[2 * i][2 * i] = 2;
    g[2 * i][2 * i + 1] = d.trace_w();
    g[2 * i + 1][2 * i] = d.trace_w();
    g[2 * i + 1][2 * i + 1] = 2 * d.norm_w();
  }
  return g;
}

inline IntVector to_int_coords(const std::vector<OrderElement>& v) {
  IntVector out;
  for (const auto& x : v) {
    out.push_back(x.a());
    out.push_back(x.b());
  }
  return out;
}

inline std::vector<OrderElement> from_int_coords(const IntVector& c, Discriminant d) {
  std::vector<OrderElement> out;
  for (std::size_t i = 0; i + 1 < c.size(); i += 2) out.emplace_back(c[i], c[i + 1], d);
  return out;
}

}  // namespace cmt
