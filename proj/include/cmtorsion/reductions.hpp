#pragma once

// Mordell-Lang style eliminations: a point of Gamma^N satisfying
// a_i x_i = sum_j b_ij g_j + zeta_i is placed in an explicit torsion variety.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cmtorsion/errors.hpp"
#include "cmtorsion/mordell_weil.hpp"
#include "cmtorsion/subgroup.hpp"

namespace cmt {

/// x with a_i * x_i = rhs_i; rhs_i is a module point (b_i1..b_it, zeta_i).
struct GammaPoint {
  std::vector<OrderElement> a;
  PointInEN rhs;

  static GammaPoint from_point(const ModuleSpec& s, const PointInEN& x) {
    return {std::vector<OrderElement>(x.N(), OrderElement::one(s.disc())), x};
  }
  [[nodiscard]] std::size_t N() const noexcept { return rhs.N(); }
};

inline GammaPoint validated(const ModuleSpec& s, GammaPoint x) {
  if (x.a.size() != x.rhs.N())
    throw DomainError("gamma point has " + std::to_string(x.a.size()) + " multipliers for " +
                      std::to_string(x.rhs.N()) + " coordinates");
  for (const auto& ai : x.a) {
    OrderElement::check_same(ai, OrderElement::zero(s.disc()));
    if (ai.is_zero()) throw DomainError("gamma point multipliers a_i must be nonzero");
  }
  x.rhs = validated(s, std::move(x.rhs));
  return x;
}

struct GammaReduction {
  bool torsion = false;                // all b_ij vanish: x is a torsion point of height 0
  std::optional<TorsionCoset> coset;   // H = {y : C*y = C*zeta}
  std::size_t rank_b = 0;              // m
  std::size_t codim = 0;               // N - m
  std::vector<std::size_t> pivot_rows;
};

/// Eliminates the generators: pivot rows (by row size, then index) span the
/// rows of B; each other row j yields one equation sum_p l_p a_p x_p + d a_j x_j
/// = torsion with the coefficient d of x_j a canonical associate.
inline GammaReduction gamma_to_torsion_variety(const ModuleSpec& s, const GammaPoint& gp) {
  GammaPoint x = validated(s, gp);
  const Discriminant d = s.disc();
  const std::size_t n = x.N();
  OMatrix b = coefficient_matrix(s, x.rhs);
  GammaReduction out;
  if (b.is_zero()) {
    out.torsion = true;
    out.codim = n;
    return out;
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<Integer> sizes;
  for (std::size_t i = 0; i < n; ++i) sizes.push_back(row_size(b, i));
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return sizes[i] < sizes[j]; });
  std::vector<std::size_t> piv;
  for (std::size_t i : order) {
    if (sizes[i] == 0) continue;
    std::vector<std::size_t> trial = piv;
    trial.push_back(i);
    if (rank(b.select_rows(trial)) == trial.size()) piv = std::move(trial);
  }
  std::sort(piv.begin(), piv.end());
  const std::size_t m = piv.size();
  const Integer& R = s.torsion_order();

  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < n; ++i)
    if (std::find(piv.begin(), piv.end(), i) == piv.end()) rest.push_back(i);

  OMatrix c(d, rest.size(), n);
  std::vector<OrderElement> zeta_num;  // numerators at level R of C*x
  std::vector<OrderElement> diag;      // coefficient of x_j in its equation
  for (std::size_t e = 0; e < rest.size(); ++e) {
    const std::size_t j = rest[e];
    std::vector<std::size_t> rows = piv;
    rows.push_back(j);
    OMatrix lk = left_kernel(b.select_rows(rows));
    std::vector<OrderElement> lam = lk.row(0);
    const OrderElement u = canonical_unit(lam[m]);
    for (auto& v : lam) v = u * v;
    OrderElement tz = OrderElement::zero(d);
    for (std::size_t k = 0; k < m; ++k) {
      c(e, piv[k]) = lam[k] * x.a[piv[k]];
      tz += lam[k] * x.rhs.coords[piv[k]].torsion;
    }
    c(e, j) = lam[m] * x.a[j];
    tz += lam[m] * x.rhs.coords[j].torsion;
    zeta_num.push_back(tz.reduced_mod(R));
    diag.push_back(c(e, j));
  }

  // zeta* with pivot coordinates 0 and c_jj * zeta*_j = zeta'_j / R.
  Integer level = R;
  for (const auto& cj : diag) level = lcm(level, R * cj.norm());
  std::vector<OrderElement> z(n, OrderElement::zero(d));
  for (std::size_t e = 0; e < rest.size(); ++e) {
    Integer f = level / (R * diag[e].norm());
    z[rest[e]] = f * (zeta_num[e] * diag[e].conj());
  }
  out.coset = TorsionCoset{SubgroupMatrix(std::move(c)), TorsionPoint(d, level, std::move(z))};
  out.rank_b = m;
  out.codim = n - m;
  out.pivot_rows = std::move(piv);
  return out;
}

/// Checks C*x = C*zeta using only the representation a_i x_i = rhs_i; every
/// column j of C must be divisible by a_j.
inline bool gamma_coset_contains(const ModuleSpec& s, const TorsionCoset& coset, const GammaPoint& x) {
  const OMatrix& c = coset.subgroup.matrix();
  if (c.cols() != x.N()) return false;
  OMatrix cp = c;
  for (std::size_t i = 0; i < c.rows(); ++i)
    for (std::size_t j = 0; j < c.cols(); ++j) {
      if (!divides(x.a[j], c(i, j))) return false;
      cp(i, j) = exact_div(c(i, j), x.a[j]);
    }
  if (!(cp * coefficient_matrix(s, x.rhs)).is_zero()) return false;
  TorsionPoint lhs = apply(cp, torsion_part(s, x.rhs));
  TorsionPoint rhs = apply(c, coset.zeta);
  return (lhs - rhs).is_zero();
}

struct TransverseLift {
  PointInEN point;     // (x_1..x_N, g_1..g_t)
  TorsionCoset coset;  // [I_N | -A] y = zeta
  bool degenerate;     // A = 0: the coset equations only say x is torsion
};

inline TransverseLift transverse_lift(const ModuleSpec& s, const PointInEN& x0) {
  PointInEN x = validated(s, x0);
  const std::size_t n = x.N(), t = s.rank();
  if (t == 0) throw DomainError("transverse_lift requires module rank t >= 1");
  const Discriminant d = s.disc();
  OMatrix a = coefficient_matrix(s, x);
  OMatrix c(d, n, n + t);
  for (std::size_t i = 0; i < n; ++i) {
    c(i, i) = OrderElement::one(d);
    for (std::size_t j = 0; j < t; ++j) c(i, n + j) = -a(i, j);
  }
  PointInEN lifted = x;
  for (std::size_t j = 0; j < t; ++j) lifted.coords.push_back(ModulePoint::generator(s, j));
  std::vector<OrderElement> z;
  for (const auto& m : x.coords) z.push_back(m.torsion);
  for (std::size_t j = 0; j < t; ++j) z.push_back(OrderElement::zero(d));
  return {std::move(lifted), {SubgroupMatrix(std::move(c)), TorsionPoint(d, s.torsion_order(), std::move(z))},
          a.is_zero()};
}

struct VarietyParams {
  int N = 0;
  int dim_V = 0;
  Rational h_V = 0, deg_V = 1, deg_ktor_V = 1, deg_k_V = 1;

  void validate() const {
    if (N < 1) throw DomainError("VarietyParams: N must be >= 1");
    if (dim_V < 0 || dim_V >= N) throw DomainError("VarietyParams: need 0 <= dim_V < N");
    if (h_V < 0) throw DomainError("VarietyParams: h_V must be non-negative");
    if (deg_V <= 0 || deg_ktor_V <= 0 || deg_k_V <= 0)
      throw DomainError("VarietyParams: degrees must be positive");
  }
};

struct AnomalyReport {
  std::string verdict;  // "torsion", "anomalous" or "not anomalous"
  std::string regime;
  bool anomalous = false;
  std::size_t dim_b = 0;
  std::size_t relative_codim = 0;
  bool relative_codim_one = false;
  std::string theorem_id;  // bound catalog family, or "none"
  bool curve_n2_regime = false;
  MinimalCoset minimal;
};

inline AnomalyReport classify_point(const VarietyParams& v, const ModuleSpec& s, const PointInEN& x0) {
  v.validate();
  PointInEN x = validated(s, x0);
  if (static_cast<int>(x.N()) != v.N)
    throw DomainError("point has " + std::to_string(x.N()) + " coordinates but N = " + std::to_string(v.N));
  MinimalCoset mc = minimal_coset(s, x);
  AnomalyReport r{"", "", false, mc.dim_b, mc.dim_b, mc.dim_b == 1, "none", v.dim_V == 1 && v.N == 2, mc};
  if (mc.dim_b == 0) {
    r.verdict = "torsion";
    r.regime = "Manin-Mumford";
    return r;
  }
  r.anomalous = is_anomalous(0, v.dim_V, static_cast<int>(mc.dim_b), v.N);
  r.verdict = r.anomalous ? "anomalous" : "not anomalous";
  const int db = static_cast<int>(mc.dim_b);
  if (r.anomalous && db == 1) {
    r.theorem_id = "tadimzero";
    r.regime = "relative codimension one point";
  } else if (r.anomalous && v.dim_V == 1 && 2 * db < v.N) {
    r.theorem_id = "curva";
    r.regime = "curve in subgroup of codimension larger than its dimension";
  } else if (r.anomalous) {
    r.regime = "anomalous point of higher relative codimension";
  } else {
    r.regime = r.curve_n2_regime ? "curve in E^2: weak-transverse does not imply bounded height" : "expected dimension";
  }
  return r;
}

}  // namespace cmt
