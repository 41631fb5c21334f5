#pragma once

// Exhaustive listings: connected subgroups of E^N with a defining matrix of
// bounded row product, torsion points of bounded order, and a brute-force
// minimal coset search used as an oracle.

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cmtorsion/bounds.hpp"
#include "cmtorsion/errors.hpp"
#include "cmtorsion/mordell_weil.hpp"
#include "cmtorsion/subgroup.hpp"

namespace cmt {

struct EnumerationBudget {
  std::size_t N = 2;
  std::size_t target_dim = 1;
  long max_row_product = 1;  // X
  long max_torsion_order = 1;  // M
  double time_cap = 0;       // seconds, 0 = none
  long witness_level = 12;

  void validate() const {
    if (N < 1) throw DomainError("enumeration: N must be >= 1");
    if (target_dim > N) throw DomainError("enumeration: target dimension exceeds N");
    if (max_row_product < 0) throw DomainError("enumeration: max row product must be >= 0");
    if (max_torsion_order < 1) throw DomainError("enumeration: max torsion order must be >= 1");
    if (time_cap < 0) throw DomainError("enumeration: time cap must be >= 0");
    if (witness_level < 1) throw DomainError("enumeration: witness level must be >= 1");
  }
};

struct EnumeratedSubgroup {
  SubgroupMatrix subgroup;  // saturated hnf
  Integer row_product;      // smallest row product of a defining matrix found
};

struct SubgroupEnumeration {
  std::vector<EnumeratedSubgroup> subgroups;
  bool partial = false;
  std::size_t candidates = 0;  // raw matrices examined
  long witness_level = 12;

  [[nodiscard]] std::size_t count() const noexcept { return subgroups.size(); }
};

namespace detail {

class Deadline {
 public:
  explicit Deadline(double seconds)
      : active_(seconds > 0),
        end_(std::chrono::steady_clock::now() + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                                    std::chrono::duration<double>(seconds))) {}
  bool passed() {
    if (!active_) return false;
    if (++ticks_ % 256 != 0) return hit_;
    hit_ = std::chrono::steady_clock::now() > end_;
    return hit_;
  }

 private:
  bool active_;
  std::chrono::steady_clock::time_point end_;
  unsigned long ticks_ = 0;
  bool hit_ = false;
};

/// Elements of norm in [1, x].
inline std::vector<OrderElement> elements_up_to_norm(Discriminant d, long x) {
  std::vector<OrderElement> out;
  if (x < 1) return out;
  long s = 0;
  while ((s + 1) * (s + 1) <= x) ++s;
  const long bound = 2 * s + 2;
  for (long a = -bound; a <= bound; ++a)
    for (long b = -bound; b <= bound; ++b) {
      OrderElement e(Integer(a), Integer(b), d);
      Integer n = e.norm();
      if (n >= 1 && n <= x) out.push_back(std::move(e));
    }
  return out;
}

struct Row {
  std::vector<OrderElement> entries;
  long size;
};

/// Nonzero rows of length n with row size <= x, first nonzero entry a
/// canonical associate, sorted by (size, lex).
inline std::vector<Row> normalized_rows(Discriminant d, std::size_t n, long x) {
  std::vector<OrderElement> elems = elements_up_to_norm(d, x);
  std::sort(elems.begin(), elems.end(), [](const auto& p, const auto& q) { return p.norm() < q.norm(); });
  std::vector<Row> rows;
  std::vector<OrderElement> cur(n, OrderElement::zero(d));
  auto rec = [&](auto&& self, std::size_t i, long left, bool started) -> void {
    if (i == n) {
      if (started) rows.push_back({cur, x - left});
      return;
    }
    cur[i] = OrderElement::zero(d);
    self(self, i + 1, left, started);
    for (const auto& e : elems) {
      long nm = e.norm().get_si();
      if (nm > left) break;
      if (!started && !(canonical_associate(e) == e)) continue;
      cur[i] = e;
      self(self, i + 1, left - nm, true);
    }
    cur[i] = OrderElement::zero(d);
  };
  rec(rec, 0, x, false);
  std::sort(rows.begin(), rows.end(), [](const Row& p, const Row& q) {
    if (p.size != q.size) return p.size < q.size;
    return p.entries < q.entries;
  });
  return rows;
}

/// Calls fn(matrix, row_product) for each set of r distinct rows (ascending
/// indices) of full rank with product <= x. Returns false if the deadline hit.
template <class Fn>
bool for_each_candidate(Discriminant d, std::size_t n, std::size_t r, long x, Deadline& dl, Fn&& fn) {
  if (x < 1) return true;
  if (r == 0) {
    fn(OMatrix(d, 0, n), Integer(1));
    return true;
  }
  std::vector<Row> rows = normalized_rows(d, n, x);
  std::vector<std::size_t> pick;
  bool ok = true;
  auto rec = [&](auto&& self, std::size_t start, long prod) -> void {
    if (!ok) return;
    if (pick.size() == r) {
      if (dl.passed()) {
        ok = false;
        return;
      }
      std::vector<std::vector<OrderElement>> m;
      for (std::size_t i : pick) m.push_back(rows[i].entries);
      OMatrix mat = OMatrix::from_rows(d, n, m);
      if (rank(mat) == r) fn(mat, Integer(prod));
      return;
    }
    const std::size_t need = r - pick.size();
    for (std::size_t i = start; i + need <= rows.size(); ++i) {
      // Rows are sorted by size, so the remaining need rows all have size >= rows[i].size.
      long p = prod;
      bool fits = true;
      for (std::size_t k = 0; k < need; ++k) {
        p *= rows[i].size;
        if (p > x) {
          fits = false;
          break;
        }
      }
      if (!fits) break;
      pick.push_back(i);
      self(self, i + 1, prod * rows[i].size);
      pick.pop_back();
      if (!ok) return;
    }
  };
  rec(rec, 0, 1);
  return ok;
}

inline std::mutex& enumeration_cache_mutex() {
  static std::mutex m;
  return m;
}
inline std::map<std::tuple<int, std::size_t, std::size_t, long>, SubgroupEnumeration>& enumeration_cache() {
  static std::map<std::tuple<int, std::size_t, std::size_t, long>, SubgroupEnumeration> c;
  return c;
}

}  // namespace detail

/// Every connected subgroup of dimension target_dim with a defining matrix of
/// row product <= X, once each, ordered by (smallest row product, hnf).
inline SubgroupEnumeration enumerate_subgroups(Discriminant d, const EnumerationBudget& b) {
  b.validate();
  const auto key = std::make_tuple(d.value(), b.N, b.target_dim, b.max_row_product);
  {
    std::lock_guard<std::mutex> lock(detail::enumeration_cache_mutex());
    auto it = detail::enumeration_cache().find(key);
    if (it != detail::enumeration_cache().end()) return it->second;
  }
  SubgroupEnumeration out;
  out.witness_level = b.witness_level;
  std::map<SubgroupMatrix, Integer> best;
  detail::Deadline dl(b.time_cap);
  const std::size_t r = b.N - b.target_dim;
  bool done = detail::for_each_candidate(d, b.N, r, b.max_row_product, dl, [&](const OMatrix& m, const Integer& p) {
    ++out.candidates;
    SubgroupMatrix h(hermite_form(saturate(m)));
    auto [it, inserted] = best.emplace(std::move(h), p);
    if (!inserted && p < it->second) it->second = p;
  });
  out.partial = !done;
  for (auto& [h, p] : best) out.subgroups.push_back({h, p});
  std::stable_sort(out.subgroups.begin(), out.subgroups.end(),
                   [](const auto& x, const auto& y) { return x.row_product < y.row_product; });
  if (!out.partial) {
    std::lock_guard<std::mutex> lock(detail::enumeration_cache_mutex());
    detail::enumeration_cache().emplace(key, out);
  }
  return out;
}

/// Whether count <= c * X^(N + eta), exactly.
inline bool count_within_bound(std::size_t count, long x, std::size_t n, const Rational& eta, const Rational& c) {
  if (c <= 0 || eta < 0) throw DomainError("count bound needs c > 0 and eta >= 0");
  if (x < 1) return count == 0;
  Rational lhs(static_cast<long>(count));
  lhs /= c;
  return compare_rational_powers(lhs, Rational(1), Rational(x), Rational(static_cast<long>(n)) + eta) <= 0;
}

/// True when the level-n kernels of the listed subgroups are pairwise distinct.
inline bool kernels_distinct_at_level(const std::vector<EnumeratedSubgroup>& subs, const Integer& level) {
  std::set<std::vector<Integer>> seen;
  for (const auto& s : subs) {
    std::vector<Integer> key;
    for (const auto& z : kernel_at_level(s.subgroup, level))
      for (const auto& c : z.coords()) {
        key.push_back(c.a());
        key.push_back(c.b());
      }
    if (!seen.insert(std::move(key)).second) return false;
  }
  return true;
}

inline int moebius(long n) {
  if (n < 1) throw DomainError("moebius requires n >= 1");
  int mu = 1;
  for (long p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    n /= p;
    if (n % p == 0) return 0;
    mu = -mu;
  }
  if (n > 1) mu = -mu;
  return mu;
}

/// Number of points of E^N of order dividing n: n^(2N).
inline Integer torsion_count_dividing(std::size_t n_dim, long n) {
  if (n < 1) throw DomainError("torsion level must be >= 1");
  return pow(Integer(n), 2 * n_dim);
}

/// Number of points of exact order n, by Moebius inversion.
inline Integer torsion_count_exact(std::size_t n_dim, long n) {
  Integer total = 0;
  for (long k = 1; k <= n; ++k)
    if (n % k == 0) total += moebius(n / k) * torsion_count_dividing(n_dim, k);
  return total;
}

struct TorsionEnumeration {
  std::size_t N = 0;
  long M = 0;
  std::vector<Integer> exact_counts;  // index n-1: points of exact order n
  Integer total;                      // points of order <= M
  bool listed = false;                // false: count-only mode
  std::vector<TorsionPoint> points;   // at level = order, ordered by (order, coords)
};

/// Points of E^N of order <= M; lists them when the total is at most list_limit.
inline TorsionEnumeration enumerate_torsion(Discriminant d, std::size_t n_dim, long m, bool list = false,
                                            std::size_t list_limit = 1000000) {
  if (n_dim < 1) throw DomainError("enumerate_torsion: N must be >= 1");
  if (m < 1) throw DomainError("enumerate_torsion: M must be >= 1");
  TorsionEnumeration out;
  out.N = n_dim;
  out.M = m;
  out.total = 0;
  for (long n = 1; n <= m; ++n) {
    out.exact_counts.push_back(torsion_count_exact(n_dim, n));
    out.total += out.exact_counts.back();
  }
  if (!list || out.total > Integer(static_cast<unsigned long>(list_limit))) return out;
  out.listed = true;
  for (long n = 1; n <= m; ++n) {
    const std::size_t dim = 2 * n_dim;
    std::vector<long> c(dim, 0);
    for (;;) {
      std::vector<OrderElement> coords;
      for (std::size_t i = 0; i < n_dim; ++i) coords.emplace_back(Integer(c[2 * i]), Integer(c[2 * i + 1]), d);
      TorsionPoint z(d, Integer(n), std::move(coords));
      if (z.order() == n) out.points.push_back(std::move(z));
      std::size_t i = 0;
      while (i < dim && c[i] == n - 1) c[i++] = 0;
      if (i == dim) break;
      ++c[i];
    }
  }
  return out;
}

struct BruteForceCoset {
  TorsionCoset coset;  // saturated hnf subgroup, zeta = torsion part of x
  std::size_t dim;
  Integer row_product;
};

/// Smallest-dimension, then smallest row product (then hnf) coset with a
/// defining matrix of row product <= X containing x. nullopt when nothing is
/// found within the budget or the time cap.
inline std::optional<BruteForceCoset> brute_force_minimal_coset(const ModuleSpec& s, const PointInEN& x0,
                                                                const EnumerationBudget& budget) {
  PointInEN x = validated(s, x0);
  EnumerationBudget b = budget;
  b.N = x.N();
  b.target_dim = 0;
  b.validate();
  const Discriminant d = s.disc();
  const OMatrix a = coefficient_matrix(s, x);
  detail::Deadline dl(b.time_cap);
  for (std::size_t dim = 0; dim <= b.N; ++dim) {
    std::optional<std::pair<Integer, OMatrix>> hit;
    bool done = detail::for_each_candidate(d, b.N, b.N - dim, b.max_row_product, dl, [&](const OMatrix& k, const Integer& p) {
      if (hit && hit->first < p) return;
      if (!(k * a).is_zero()) return;
      OMatrix h = hermite_form(saturate(k));
      if (!hit || p < hit->first || h < hit->second) hit = std::make_pair(p, std::move(h));
    });
    if (!done) return std::nullopt;
    if (hit) return BruteForceCoset{{SubgroupMatrix(std::move(hit->second)), torsion_part(s, x)}, dim, hit->first};
  }
  return std::nullopt;
}

}  // namespace cmt
