#pragma once

// Dense matrices over O with unimodular row reduction, kernels, saturation
// and Hermite normal form.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "cmtorsion/errors.hpp"
#include "cmtorsion/field.hpp"
#include "cmtorsion/order.hpp"

namespace cmt {

class OMatrix {
 public:
  OMatrix(Discriminant d, std::size_t rows, std::size_t cols) : disc_(d), rows_(rows), cols_(cols) {
    data_.reserve(rows * cols);
    for (std::size_t i = 0; i < rows * cols; ++i) data_.push_back(OrderElement::zero(d));
  }

  static OMatrix identity(Discriminant d, std::size_t n) {
    OMatrix m(d, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = OrderElement::one(d);
    return m;
  }

  static OMatrix from_rows(Discriminant d, std::size_t cols, const std::vector<std::vector<OrderElement>>& rows) {
    OMatrix m(d, rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols)
        throw DomainError("row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                          " entries, expected " + std::to_string(cols));
      for (std::size_t j = 0; j < cols; ++j) {
        OrderElement::check_same(rows[i][j], OrderElement::zero(d));
        m(i, j) = rows[i][j];
      }
    }
    return m;
  }

  /// Integer-coefficient convenience constructor.
  static OMatrix from_ints(Discriminant d, const std::vector<std::vector<long>>& rows) {
    std::size_t cols = rows.empty() ? 0 : rows.front().size();
    OMatrix m(d, rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = OrderElement(rows[i].at(j), d);
    return m;
  }

  [[nodiscard]] Discriminant disc() const noexcept { return disc_; }
  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }

  OrderElement& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const OrderElement& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  [[nodiscard]] std::vector<OrderElement> row(std::size_t i) const {
    return {data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
            data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_)};
  }
  [[nodiscard]] std::vector<OrderElement> col(std::size_t j) const {
    std::vector<OrderElement> c;
    for (std::size_t i = 0; i < rows_; ++i) c.push_back((*this)(i, j));
    return c;
  }

  [[nodiscard]] bool is_zero() const {
    for (const auto& x : data_)
      if (!x.is_zero()) return false;
    return true;
  }
  [[nodiscard]] bool row_is_zero(std::size_t i) const {
    for (std::size_t j = 0; j < cols_; ++j)
      if (!(*this)(i, j).is_zero()) return false;
    return true;
  }

  [[nodiscard]] OMatrix transpose() const {
    OMatrix t(disc_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }
  [[nodiscard]] OMatrix conj() const {
    OMatrix c = *this;
    for (auto& x : c.data_) x = x.conj();
    return c;
  }
  [[nodiscard]] OMatrix conj_transpose() const { return conj().transpose(); }

  /// Rows of *this followed by rows of below.
  [[nodiscard]] OMatrix stack(const OMatrix& below) const {
    if (below.cols_ != cols_ || !(below.disc_ == disc_)) throw DomainError("stack: incompatible matrices");
    OMatrix s(disc_, rows_ + below.rows_, cols_);
    std::copy(data_.begin(), data_.end(), s.data_.begin());
    std::copy(below.data_.begin(), below.data_.end(), s.data_.begin() + static_cast<std::ptrdiff_t>(data_.size()));
    return s;
  }
  /// Columns of *this followed by columns of right.
  [[nodiscard]] OMatrix hconcat(const OMatrix& right) const {
    if (right.rows_ != rows_ || !(right.disc_ == disc_)) throw DomainError("hconcat: incompatible matrices");
    OMatrix s(disc_, rows_, cols_ + right.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) s(i, j) = (*this)(i, j);
      for (std::size_t j = 0; j < right.cols_; ++j) s(i, cols_ + j) = right(i, j);
    }
    return s;
  }
  [[nodiscard]] OMatrix select_rows(const std::vector<std::size_t>& idx) const {
    OMatrix s(disc_, idx.size(), cols_);
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < cols_; ++j) s(i, j) = (*this)(idx[i], j);
    return s;
  }
  [[nodiscard]] OMatrix select_cols(const std::vector<std::size_t>& idx) const {
    OMatrix s(disc_, rows_, idx.size());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < idx.size(); ++j) s(i, j) = (*this)(i, idx[j]);
    return s;
  }

  void swap_rows(std::size_t i, std::size_t k) {
    if (i == k) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(i, j), (*this)(k, j));
  }
  /// row_i -= q * row_k
  void sub_row_multiple(std::size_t i, std::size_t k, const OrderElement& q) {
    if (q.is_zero()) return;
    for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) -= q * (*this)(k, j);
  }
  void scale_row(std::size_t i, const OrderElement& u) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = u * (*this)(i, j);
  }

  friend OMatrix operator*(const OMatrix& x, const OMatrix& y) {
    if (x.cols_ != y.rows_ || !(x.disc_ == y.disc_))
      throw DomainError("matrix product: incompatible shapes " + std::to_string(x.rows_) + "x" +
                        std::to_string(x.cols_) + " and " + std::to_string(y.rows_) + "x" + std::to_string(y.cols_));
    OMatrix p(x.disc_, x.rows_, y.cols_);
    for (std::size_t i = 0; i < x.rows_; ++i)
      for (std::size_t k = 0; k < x.cols_; ++k) {
        if (x(i, k).is_zero()) continue;
        for (std::size_t j = 0; j < y.cols_; ++j) p(i, j) += x(i, k) * y(k, j);
      }
    return p;
  }

  friend bool operator==(const OMatrix& x, const OMatrix& y) {
    return x.disc_ == y.disc_ && x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.data_ == y.data_;
  }

  /// Lexicographic comparison of shape then entries.
  friend bool operator<(const OMatrix& x, const OMatrix& y) {
    if (x.rows_ != y.rows_) return x.rows_ < y.rows_;
    if (x.cols_ != y.cols_) return x.cols_ < y.cols_;
    return std::lexicographical_compare(x.data_.begin(), x.data_.end(), y.data_.begin(), y.data_.end());
  }

 private:
  Discriminant disc_;
  std::size_t rows_, cols_;
  std::vector<OrderElement> data_;
};

struct Echelon {
  OMatrix form;       // transform * A
  OMatrix transform;  // unimodular
  std::size_t rank;
  std::vector<std::size_t> pivot_cols;
};

/// Row echelon form by unimodular row operations. The pivot at each column is
/// chosen as the entry of smallest norm (lowest row on ties).
inline Echelon row_echelon(const OMatrix& a) {
  OMatrix e = a;
  OMatrix u = OMatrix::identity(a.disc(), a.rows());
  std::size_t k = 0;
  std::vector<std::size_t> pivots;
  for (std::size_t c = 0; c < a.cols() && k < a.rows(); ++c) {
    for (;;) {
      std::size_t best = a.rows();
      Integer best_norm;
      for (std::size_t i = k; i < a.rows(); ++i) {
        if (e(i, c).is_zero()) continue;
        Integer n = e(i, c).norm();
        if (best == a.rows() || n < best_norm) {
          best = i;
          best_norm = n;
        }
      }
      if (best == a.rows()) break;
      e.swap_rows(k, best);
      u.swap_rows(k, best);
      bool clean = true;
      for (std::size_t i = k + 1; i < a.rows(); ++i) {
        if (e(i, c).is_zero()) continue;
        OrderElement q = euclid_div(e(i, c), e(k, c)).quotient;
        e.sub_row_multiple(i, k, q);
        u.sub_row_multiple(i, k, q);
        if (!e(i, c).is_zero()) clean = false;
      }
      if (clean) {
        pivots.push_back(c);
        ++k;
        break;
      }
    }
  }
  return {std::move(e), std::move(u), k, std::move(pivots)};
}

inline std::size_t rank(const OMatrix& a) { return row_echelon(a).rank; }

/// Basis (as rows) of {x in O^rows : x * A = 0}; always saturated.
inline OMatrix left_kernel(const OMatrix& a) {
  Echelon ech = row_echelon(a);
  std::vector<std::size_t> idx;
  for (std::size_t i = ech.rank; i < a.rows(); ++i) idx.push_back(i);
  return ech.transform.select_rows(idx);
}

/// Basis (as rows) of {v in O^cols : A * v = 0}.
inline OMatrix right_kernel(const OMatrix& a) { return left_kernel(a.transpose()); }

/// Rows spanning (row space of A over L) intersected with O^N. Full row rank.
inline OMatrix saturate(const OMatrix& a) { return left_kernel(right_kernel(a).transpose()); }

/// Hermite normal form of the row module: echelon rows with canonical-associate
/// pivots and entries above pivots reduced by the Euclidean remainder. Zero
/// rows are dropped.
inline OMatrix hermite_form(const OMatrix& a) {
  Echelon ech = row_echelon(a);
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < ech.rank; ++i) idx.push_back(i);
  OMatrix h = ech.form.select_rows(idx);
  for (std::size_t k = 0; k < ech.rank; ++k) {
    const std::size_t pc = ech.pivot_cols[k];
    h.scale_row(k, canonical_unit(h(k, pc)));
    for (std::size_t i = 0; i < k; ++i) {
      OrderElement q = euclid_div(h(i, pc), h(k, pc)).quotient;
      h.sub_row_multiple(i, k, q);
    }
  }
  return h;
}

/// Determinant of a square matrix.
inline OrderElement det(const OMatrix& a) {
  if (a.rows() != a.cols()) throw DomainError("det: matrix is not square");
  const Discriminant d = a.disc();
  const std::size_t n = a.rows();
  std::vector<std::vector<FieldElement>> m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i].emplace_back(a(i, j));
  FieldElement result = FieldElement::one(d);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m[p][c].is_zero()) ++p;
    if (p == n) return OrderElement::zero(d);
    if (p != c) {
      std::swap(m[p], m[c]);
      result = -result;
    }
    result = result * m[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m[i][c].is_zero()) continue;
      FieldElement f = m[i][c] / m[c][c];
      for (std::size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
    }
  }
  return result.to_order();
}

/// Row vector times matrix.
inline std::vector<OrderElement> mul(const std::vector<OrderElement>& v, const OMatrix& a) {
  if (v.size() != a.rows()) throw DomainError("vector-matrix product: size mismatch");
  std::vector<OrderElement> out;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    OrderElement s = OrderElement::zero(a.disc());
    for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * a(i, j);
    out.push_back(s);
  }
  return out;
}

/// Matrix times column vector.
inline std::vector<OrderElement> mul(const OMatrix& a, const std::vector<OrderElement>& v) {
  if (v.size() != a.cols()) throw DomainError("matrix-vector product: size mismatch");
  std::vector<OrderElement> out;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    OrderElement s = OrderElement::zero(a.disc());
    for (std::size_t j = 0; j < v.size(); ++j) s += a(i, j) * v[j];
    out.push_back(s);
  }
  return out;
}

inline OMatrix diagonal(Discriminant d, const std::vector<OrderElement>& diag) {
  OMatrix m(d, diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

/// Multiplies a vector by the unit making its first nonzero entry a canonical associate.
inline std::vector<OrderElement> normalize_vector(std::vector<OrderElement> v) {
  for (const auto& x : v) {
    if (x.is_zero()) continue;
    OrderElement u = canonical_unit(x);
    for (auto& y : v) y = u * y;
    break;
  }
  return v;
}

}  // namespace cmt
