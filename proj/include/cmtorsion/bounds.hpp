#pragma once

// Exact evaluation of the effective height, degree and counting bounds for
// torsion anomalous intersections in E^N. Every bound is a constant times a
// product of named bases raised to exponent + eta * eta_coef (+ eta^2 * eta2_coef).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cmtorsion/errors.hpp"
#include "cmtorsion/integer.hpp"

namespace cmt {

struct BoundParams {
  int N = 0;
  int d = 0;  // dim V
  int r = 0;  // codim B (or H)
  int t = 0;  // rank of Gamma
  Rational h_V = 0, deg_V = 1, ktor_V = 1, k_V = 1, h_g = 0;
  Rational eta = 0;
  std::map<std::string, Rational> constants;
  // Auxiliary inputs for the ingredient formulas.
  Rational deg_B = 1, deg_Y = 1, h_Y = 0, k_Y0 = 1;
  int dim_B = 0, dim_Y = 0;
  long M = 1;
  std::string surrogate = "minor_sum";
};

struct Factor {
  std::string base;
  Rational value;
  Rational exponent;  // at eta = 0
  Rational eta_coef;
  Rational eta2_coef;

  [[nodiscard]] Rational total(const Rational& eta) const { return exponent + eta * eta_coef + eta * eta * eta2_coef; }
};

struct BoundResult {
  std::string theorem_id;
  Rational constant = 1;
  Rational eta = 0;
  std::vector<Factor> factors;
  long double log10_value = 0;
  std::optional<Rational> exact_value;  // present when every factor with base != 1 has an integral total exponent
  std::optional<Rational> lower;        // lower end for sandwich results
  std::optional<Integer> exact_count;   // exact count next to a counting bound
  std::string surrogate;                // degree surrogate used for deg B, when relevant
  std::vector<std::string> notes;

  [[nodiscard]] const Factor* factor(const std::string& base) const {
    for (const auto& f : factors)
      if (f.base == base) return &f;
    return nullptr;
  }
};

namespace detail {

inline Rational q(long a, long b = 1) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

inline std::string describe(const BoundParams& p) {
  return "N=" + std::to_string(p.N) + ", d=" + std::to_string(p.d) + ", r=" + std::to_string(p.r) +
         ", t=" + std::to_string(p.t);
}

inline void require(bool ok, const std::string& inequality, const BoundParams& p) {
  if (!ok) throw RangeError(inequality + " violated (" + describe(p) + ")");
}

inline void require_eta(const BoundParams& p, const std::optional<Rational>& threshold, const std::string& expr) {
  if (p.eta <= 0) throw RangeError("eta > 0 violated (eta=" + to_string(p.eta) + ")");
  if (threshold && p.eta >= *threshold)
    throw RangeError("eta < " + expr + " = " + to_string(*threshold) + " violated (eta=" + to_string(p.eta) + ", " +
                     describe(p) + ")");
}

inline void require_positive(const Rational& v, const std::string& name) {
  if (v <= 0) throw DomainError(name + " must be positive (got " + to_string(v) + ")");
}

constexpr std::size_t kMaxExactDigits = 20000;

class Builder {
 public:
  Builder(std::string id, const BoundParams& p) {
    res_.theorem_id = std::move(id);
    res_.eta = p.eta;
    auto it = p.constants.find(res_.theorem_id);
    res_.constant = it == p.constants.end() ? Rational(1) : it->second;
    require_positive(res_.constant, "constant for " + res_.theorem_id);
  }
  Builder& f(const std::string& base, const Rational& value, const Rational& e, const Rational& eta_coef = 1,
             const Rational& eta2 = 0) {
    if (value <= 0) throw DomainError("base " + base + " must be positive (got " + to_string(value) + ")");
    res_.factors.push_back({base, value, e, eta_coef, eta2});
    return *this;
  }
  /// (e + c eta)(s + eta) expanded.
  Builder& composed(const std::string& base, const Rational& value, const Rational& e, const Rational& c,
                    const Rational& s) {
    return f(base, value, e * s, e + c * s, c);
  }
  Builder& surrogate(const std::string& s) {
    res_.surrogate = s;
    return *this;
  }
  Builder& note(std::string n) {
    res_.notes.push_back(std::move(n));
    return *this;
  }
  BoundResult& result() { return res_; }

  BoundResult done() {
    long double lg = log10_of(res_.constant);
    bool integral = true;
    for (const auto& fa : res_.factors) {
      Rational tot = fa.total(res_.eta);
      lg += to_long_double(tot) * log10_of(fa.value);
      if (!is_integer(tot) && fa.value != 1) integral = false;
    }
    res_.log10_value = lg;
    if (integral && lg < static_cast<long double>(kMaxExactDigits)) {
      Rational v = res_.constant;
      for (const auto& fa : res_.factors) {
        if (fa.value == 1) continue;
        Integer e = fa.total(res_.eta).get_num();
        Rational pw = pow(fa.value, abs(e).get_ui());
        v = e < 0 ? Rational(v / pw) : Rational(v * pw);
      }
      v.canonicalize();
      res_.exact_value = v;
    } else if (integral) {
      res_.notes.push_back("exact value omitted (more than " + std::to_string(kMaxExactDigits) + " digits)");
    }
    return std::move(res_);
  }

 private:
  BoundResult res_;
};

}  // namespace detail

using BoundFn = std::function<BoundResult(const BoundParams&)>;

struct CatalogEntry {
  std::string id;
  std::string summary;
  BoundFn fn;
};

inline const std::vector<CatalogEntry>& bound_catalog() {
  using detail::Builder;
  using detail::q;
  using detail::require;
  using detail::require_eta;
  static const std::vector<CatalogEntry> cat = [] {
    std::vector<CatalogEntry> c;
    auto hd = [](const BoundParams& p) { return Rational(p.h_V + p.deg_V); };
    auto hdk = [](const BoundParams& p) { return Rational((p.h_V + p.deg_V) * p.ktor_V); };
    auto dvkv = [](const BoundParams& p) { return Rational(p.deg_V * p.k_V); };
    auto lift = [](const BoundParams& p) { return Rational(p.h_V + (p.h_g + 1) * p.deg_V); };
    auto klift = [](const BoundParams& p) { return Rational(p.ktor_V * (p.h_V + (p.h_g + 1) * p.deg_V)); };
    const std::string HD = "h+deg", KT = "ktor", HDK = "(h+deg)*ktor", DV = "degV", KV = "kV", DVKV = "degV*kV",
                      LIFT = "h+(hg+1)*deg", KLIFT = "ktor*(h+(hg+1)*deg)";

    // Relative codimension one, points and general: eta < (N-1-d)/(N-1).
    auto point_range = [](const BoundParams& p) {
      require(p.N >= 2, "N >= 2", p);
      require(p.d >= 0 && p.d <= p.N - 2, "0 <= d <= N-2", p);
      require_eta(p, q(p.N - 1 - p.d, p.N - 1), "(N-1-d)/(N-1)");
    };
    // Codimension data for non-translates and translates: eta < (c-1)/(2r).
    auto codim_range = [](const BoundParams& p) {
      const int cv = p.N - p.d;
      require(p.d >= 0 && p.d < p.N, "0 <= d < N", p);
      require(cv >= 2, "codim V >= 2", p);
      require(p.r >= cv, "r >= codim V", p);
      require(p.r <= p.N - 2, "r <= N-2", p);
      require_eta(p, q(cv - 1, 2 * p.r), "(codim V - 1)/(2r)");
    };
    auto curve_threshold = [](int n, int r) { return q(2 * r - n, r * (n - r)); };
    auto curve_range = [&](const BoundParams& p) {
      require(p.r >= 2, "r >= 2", p);
      require(2 * p.r > p.N, "2r > N", p);
      require(p.r <= p.N - 1, "r <= N-1", p);
      require_eta(p, curve_threshold(p.N, p.r), "(2r-N)/(r(N-r))");
    };

    c.push_back({"main_hY", "height of maximal anomalous Y of relative codimension one", [=](const BoundParams& p) {
                   point_range(p);
                   const int D = p.N - 1 - p.d;
                   return Builder("main_hY", p).f(HD, hd(p), q(p.N - 1, D)).f(KT, p.ktor_V, q(p.d, D)).done();
                 }});
    c.push_back({"main_degY", "degree of maximal anomalous Y of relative codimension one", [=](const BoundParams& p) {
                   point_range(p);
                   require(p.d >= 1, "d >= 1", p);
                   const int D = p.N - 1 - p.d;
                   return Builder("main_degY", p).f(HD, hd(p), q(p.N - 2, D)).f(KT, p.ktor_V, q(p.d - 1, D)).done();
                 }});

    auto ws = [=](const std::string& id, int which) {
      return [=](const BoundParams& p) {
        codim_range(p);
        const Rational e = q(p.r, p.N - p.d - 1);
        Builder b(id, p);
        if (which == 2) b.f(DV, p.deg_V, 1, 0).f(HD, hd(p), e - 1);
        else b.f(HD, hd(p), e);
        return b.done();
      };
    };
    c.push_back({"weakstrict_degB", "deg B for anomalous non-translates", ws("weakstrict_degB", 0)});
    c.push_back({"weakstrict_hY", "height of anomalous non-translates", ws("weakstrict_hY", 1)});
    c.push_back({"weakstrict_degY", "degree of anomalous non-translates", ws("weakstrict_degY", 2)});

    c.push_back({"tadimzero_degB", "deg B for anomalous points", [=](const BoundParams& p) {
                   point_range(p);
                   const int D = p.N - 1 - p.d;
                   return Builder("tadimzero_degB", p).f(HDK, hdk(p), q(p.N - 1, D)).done();
                 }});
    c.push_back({"tadimzero_hY0", "height of anomalous points", [=](const BoundParams& p) {
                   point_range(p);
                   const int D = p.N - 1 - p.d;
                   return Builder("tadimzero_hY0", p).f(HD, hd(p), q(p.N - 1, D)).f(KT, p.ktor_V, q(p.d, D)).done();
                 }});
    c.push_back({"tadimzero_ktorY0", "[k_tor(Y0):k_tor] for anomalous points", [=](const BoundParams& p) {
                   point_range(p);
                   const int D = p.N - 1 - p.d;
                   return Builder("tadimzero_ktorY0", p)
                       .f(DV, p.deg_V, 1, 0)
                       .f(KT, p.ktor_V, q(p.N - 1, D))
                       .f(HD, hd(p), q(p.d, D))
                       .done();
                 }});
    auto kY0_exps = [](const BoundParams& p) {
      const long D = p.N - 1 - p.d;
      return std::pair{q(static_cast<long>(p.d) * (p.N - 1), D * D), q(p.N - 1, D)};
    };
    c.push_back({"tadimzero2_kY0", "[k(Y0):Q] for anomalous points", [=](const BoundParams& p) {
                   point_range(p);
                   auto [a, b] = kY0_exps(p);
                   return Builder("tadimzero2_kY0", p).f(HDK, hdk(p), a).f(DVKV, dvkv(p), b).done();
                 }});
    c.push_back({"tadimzero2_ordzeta", "order of the torsion point zeta", [=](const BoundParams& p) {
                   point_range(p);
                   auto [a, b] = kY0_exps(p);
                   const Rational s = q(p.N, 2);
                   return Builder("tadimzero2_ordzeta", p)
                       .composed(HDK, hdk(p), a, 1, s)
                       .composed(DVKV, dvkv(p), b, 1, s)
                       .done();
                 }});
    c.push_back({"tadimzero2_S", "number of anomalous points of relative codimension one", [=](const BoundParams& p) {
                   point_range(p);
                   const long N = p.N, d = p.d, D = N - d - 1;
                   Rational a1 = q((N - 1) * (2 * (N + 1) * D + d * N * (2 * N + 1)), 2 * D * D);
                   Rational a2 = q(N * (N - 1) * (2 * N + 1), 2 * D);
                   return Builder("tadimzero2_S", p).f(HDK, hdk(p), a1).f(DV, p.deg_V, a2 + 1).f(KV, p.k_V, a2).done();
                 }});

    auto tr = [=](const std::string& id, int which) {
      return [=](const BoundParams& p) {
        codim_range(p);
        const int cv = p.N - p.d, r1 = p.r + 1 - cv;
        const Rational e = q(p.r, cv - 1), f = q(r1, cv - 1);
        Builder b(id, p);
        if (which == 0) b.f(HDK, hdk(p), e);
        else if (which == 1) b.f(HD, hd(p), e).f(KT, p.ktor_V, f);
        else b.f(DV, p.deg_V, 1, 0).f(HDK, hdk(p), f);
        return b.done();
      };
    };
    c.push_back({"trasla_degB", "deg B for anomalous translates", tr("trasla_degB", 0)});
    c.push_back({"trasla_h", "height of anomalous translates", tr("trasla_h", 1)});
    c.push_back({"trasla_deg", "degree of anomalous translates", tr("trasla_deg", 2)});

    struct FieldExps {
      Rational kv, dv, hd, kt;
    };
    auto field_exps = [](const BoundParams& p) {
      const long cv = p.N - p.d, r = p.r, r1 = r + 1 - cv;
      return FieldExps{q(r), q(3 * r - 1), q((2 * r - 1) * r1 + r * (r - 1), cv - 1), q((3 * r - 2) * r1, cv - 1)};
    };
    c.push_back({"trasla2_field", "degree of the field of definition of H+p", [=](const BoundParams& p) {
                   codim_range(p);
                   FieldExps e = field_exps(p);
                   return Builder("trasla2_field", p)
                       .f(KV, p.k_V, e.kv)
                       .f(DV, p.deg_V, e.dv, 0)
                       .f(HD, hd(p), e.hd)
                       .f(KT, p.ktor_V, e.kt, 0)
                       .done();
                 }});
    c.push_back({"trasla2_ord", "order of zeta for anomalous translates", [=](const BoundParams& p) {
                   codim_range(p);
                   FieldExps e = field_exps(p);
                   const Rational s = q(p.N, 2);
                   return Builder("trasla2_ord", p)
                       .composed(KV, p.k_V, e.kv, 1, s)
                       .composed(DV, p.deg_V, e.dv, 0, s)
                       .composed(HD, hd(p), e.hd, 1, s)
                       .composed(KT, p.ktor_V, e.kt, 0, s)
                       .done();
                 }});
    c.push_back({"trasla2_S", "number of torsion points for anomalous translates", [=](const BoundParams& p) {
                   codim_range(p);
                   const long N = p.N, cv = p.N - p.d, r = p.r, r1 = r + 1 - cv;
                   const Rational nn = q(N * (2 * N + 1), 2);
                   Rational d1 = q(r * N * (2 * N + 1), 2);
                   Rational d2 = q((3 * r - 1) * N * (2 * N + 1), 2) + 1;
                   Rational d3 = q((N + 1) * r, cv - 1) + nn * q((2 * r - 1) * r1 + r * (r - 1), cv - 1);
                   Rational d4 = q((N + 1) * r, cv - 1) + nn * q((3 * r - 2) * r1, cv - 1);
                   return Builder("trasla2_S", p)
                       .f(KV, p.k_V, d1, 0)
                       .f(DV, p.deg_V, d2, 0)
                       .f(HD, hd(p), d3, 0)
                       .f(KT, p.ktor_V, d4, 0)
                       .done();
                 }});

    c.push_back({"curva_degH", "deg H for points of a curve in subgroups with codim > dim", [=](const BoundParams& p) {
                   curve_range(p);
                   const long N = p.N, r = p.r;
                   return Builder("curva_degH", p)
                       .f(HDK, hdk(p), q(r * (N - r) * (N + 2 * r - 2), 2 * (r - 1) * (2 * r - N)))
                       .f(DVKV, dvkv(p), q(N * r, 2 * (r - 1)))
                       .done();
                 }});
    c.push_back({"curva_hY0", "height of points of a curve in subgroups with codim > dim", [=](const BoundParams& p) {
                   curve_range(p);
                   const long N = p.N, r = p.r;
                   return Builder("curva_hY0", p)
                       .f(HD, hd(p), q(r, 2 * r - N))
                       .f(KT, p.ktor_V, q(N - r, 2 * r - N))
                       .done();
                 }});
    c.push_back({"curva_kY0", "[k(Y0):Q] for points of a curve", [=](const BoundParams& p) {
                   curve_range(p);
                   const long N = p.N, r = p.r;
                   return Builder("curva_kY0", p)
                       .f(DVKV, dvkv(p), q(r, r - 1))
                       .f(HDK, hdk(p), q(r * (N - r), (2 * r - N) * (r - 1)))
                       .done();
                 }});
    c.push_back({"curva_S", "number of non-torsion points of a curve in subgroups with codim > dim",
                 [=](const BoundParams& p) {
                   curve_range(p);
                   const long N = p.N, r = p.r;
                   Rational b1 = q(r * N * (2 * N + 1), 2 * (r - 1));
                   Rational b2 = q(r * (N - r) * (2 * r * N + 2 * r - 2 + 2 * N * N - N), 2 * (2 * r - N) * (r - 1));
                   return Builder("curva_S", p).f(KV, p.k_V, b1, 0).f(DV, p.deg_V, b1 + 1).f(HDK, hdk(p), b2).done();
                 }});

    auto altezza_range = [=](const BoundParams& p) {
      require(p.N >= 3, "N >= 3", p);
      std::optional<Rational> thr;
      for (int r = p.N / 2 + 1; r <= p.N - 1; ++r)
        if (r >= 2) {
          Rational v = curve_threshold(p.N, r);
          if (!thr || v < *thr) thr = v;
        }
      require_eta(p, thr, "min over r of (2r-N)/(r(N-r))");
    };
    c.push_back({"altezzacurva_h", "uniform height bound for a curve in subgroups with codim > dim",
                 [=](const BoundParams& p) {
                   altezza_range(p);
                   return Builder("altezzacurva_h", p)
                       .f(HD, hd(p), q(p.N + 1, 2))
                       .f(KT, p.ktor_V, q(p.N - 1, 2))
                       .done();
                 }});
    c.push_back({"altezzacurva_deg", "uniform field degree bound for a curve", [=](const BoundParams& p) {
                   altezza_range(p);
                   return Builder("altezzacurva_deg", p)
                       .f(DVKV, dvkv(p), q(p.N + 1, p.N - 1))
                       .f(HDK, hdk(p), q(p.N + 1, 2))
                       .done();
                 }});

    auto s2c_range = [](const BoundParams& p) {
      require(p.N == 3, "N = 3", p);
      require(p.d == 1, "d = 1", p);
      require_eta(p, q(1, 2), "(N-1-d)/(N-1)");
    };
    c.push_back({"s2c_h", "height of S_2(C) for a curve in E^3", [=](const BoundParams& p) {
                   s2c_range(p);
                   return Builder("s2c_h", p).f(HD, hd(p), 2).f(KT, p.ktor_V, 1).done();
                 }});
    c.push_back({"s2c_deg", "[k(Y0):Q] on S_2(C) for a curve in E^3", [=](const BoundParams& p) {
                   s2c_range(p);
                   Rational base = p.deg_V * (p.h_V + p.deg_V) * p.ktor_V * p.k_V;
                   return Builder("s2c_deg", p).f("degV*(h+deg)*ktor*kV", base, 2).done();
                 }});

    c.push_back({"ml1", "height on C cap Gamma, weak-transverse C, rank one", [=](const BoundParams& p) {
                   require(p.N > 2, "N > 2", p);
                   require_eta(p, q(p.N - 2, p.N - 1), "(N-2)/(N-1)");
                   return Builder("ml1", p).f(HD, hd(p), q(p.N - 1, p.N - 2)).f(KT, p.ktor_V, q(1, p.N - 2)).done();
                 }});
    c.push_back({"ml2", "height on C cap Gamma, transverse C in E^2, rank one", [=](const BoundParams& p) {
                   require(p.N == 2, "N = 2", p);
                   require_eta(p, q(1, 2), "1/2");
                   return Builder("ml2", p).f(KT, p.ktor_V, 1).f(LIFT, lift(p), 2).done();
                 }});
    auto mlr_range = [=](const BoundParams& p) {
      require(p.t >= 1, "t >= 1", p);
      require(2 * p.t < p.N, "2t < N", p);
      require_eta(p, curve_threshold(p.N, p.N - p.t), "(N-2t)/(t(N-t))");
    };
    auto mltre_range = [=](const BoundParams& p) {
      require(p.t >= 1, "t >= 1", p);
      require(p.t <= p.N - 1, "t <= N-1", p);
      require(p.N >= 2, "N >= 2", p);
      require_eta(p, curve_threshold(p.N + p.t, p.N), "(N-t)/(N t)");
    };
    c.push_back({"mlr", "height on C cap Gamma, weak-transverse C, rank t < N/2", [=](const BoundParams& p) {
                   mlr_range(p);
                   const long N = p.N, t = p.t;
                   return Builder("mlr", p).f(HD, hd(p), q(N - t, N - 2 * t)).f(KT, p.ktor_V, q(t, N - 2 * t)).done();
                 }});
    c.push_back({"mltre", "height on C cap Gamma, transverse C, rank t <= N-1", [=](const BoundParams& p) {
                   mltre_range(p);
                   const long N = p.N, t = p.t;
                   return Builder("mltre", p).f(KT, p.ktor_V, q(t, N - t)).f(LIFT, lift(p), q(N, N - t)).done();
                 }});

    c.push_back({"teoremone_i", "count on C cap Gamma, weak-transverse C, N > 2, t = 1", [=](const BoundParams& p) {
                   require(p.N > 2, "N > 2", p);
                   require_eta(p, q(p.N - 2, p.N - 1), "(N-2)/(N-1)");
                   const long N = p.N;
                   return Builder("teoremone_i", p)
                       .f(HDK, hdk(p), q((N - 1) * (4 * N * N - N - 4), 2 * (N - 2) * (N - 2)))
                       .f(DV, p.deg_V, q(2 * N * N * N - N * N + N - 4, 2 * (N - 2)))
                       .f(KV, p.k_V, q(N * (N - 1) * (2 * N + 1), 2 * (N - 2)))
                       .done();
                 }});
    c.push_back({"teoremone_ii", "count on C cap Gamma, transverse C in E^2, t = 1", [=](const BoundParams& p) {
                   require(p.N == 2, "N = 2", p);
                   require_eta(p, q(1, 2), "1/2");
                   return Builder("teoremone_ii", p).f(KLIFT, klift(p), 29).f(DV, p.deg_V, 22).f(KV, p.k_V, 21).done();
                 }});
    c.push_back({"teoremone_iii", "count on C cap Gamma, weak-transverse C, t < N/2", [=](const BoundParams& p) {
                   mlr_range(p);
                   const long N = p.N, t = p.t;
                   Rational kv = q(N * (2 * N + 1) * (N - t), 2 * (N - t - 1));
                   return Builder("teoremone_iii", p)
                       .f(HDK, hdk(p),
                          q(t * (N - t) * (4 * N * N - 2 * N * t + N - 2 * t - 2), 2 * (N - 2 * t) * (N - t - 1)))
                       .f(DV, p.deg_V, kv + 1)
                       .f(KV, p.k_V, kv)
                       .done();
                 }});
    c.push_back({"teoremone_iv", "count on C cap Gamma, transverse C, t <= N-1", [=](const BoundParams& p) {
                   mltre_range(p);
                   const long N = p.N, t = p.t;
                   Rational kv = q((N + t) * N * (2 * N + 2 * t + 1), 2 * (N - 1));
                   return Builder("teoremone_iv", p)
                       .f(KLIFT, klift(p),
                          q(N * t * (4 * N * N + 2 * t * t + 6 * N * t + N - t - 2), 2 * (N - t) * (N - 1)))
                       .f(DV, p.deg_V, kv + 1)
                       .f(KV, p.k_V, kv)
                       .done();
                 }});

    c.push_back({"zhang_sandwich", "essential minimum interval [h/((1+dim) deg), h/deg]", [](const BoundParams& p) {
                   detail::require_positive(p.deg_V, "deg_V");
                   require(p.d >= 0, "dim >= 0", p);
                   if (p.h_V < 0) throw DomainError("h_V must be non-negative");
                   BoundResult r;
                   r.theorem_id = "zhang_sandwich";
                   r.eta = p.eta;
                   Rational up = p.h_V / p.deg_V;
                   Rational lo = p.h_V / ((1 + p.d) * p.deg_V);
                   up.canonicalize();
                   lo.canonicalize();
                   r.exact_value = up;
                   r.lower = lo;
                   r.log10_value = up > 0 ? log10_of(up) : -std::numeric_limits<long double>::infinity();
                   return r;
                 }});
    c.push_back({"bezout", "arithmetic Bezout: deg X h(Y) + deg Y h(X) + c(n) deg X deg Y", [](const BoundParams& p) {
                   detail::require_positive(p.deg_V, "deg_V");
                   detail::require_positive(p.deg_Y, "deg_Y");
                   auto it = p.constants.find("bezout");
                   Rational cn = it == p.constants.end() ? Rational(1) : it->second;
                   BoundResult r;
                   r.theorem_id = "bezout";
                   r.eta = p.eta;
                   r.constant = cn;
                   Rational v = p.deg_V * p.h_Y + p.deg_Y * p.h_V + cn * p.deg_V * p.deg_Y;
                   v.canonicalize();
                   r.exact_value = v;
                   r.log10_value = log10_of(v);
                   return r;
                 }});
    c.push_back({"galateau_lower", "lower bound deg B^(1/(dimB-dimY)-eta) / deg Y^(1/(dimB-dimY)+eta)",
                 [](const BoundParams& p) {
                   require(p.dim_Y >= 0 && p.dim_B > p.dim_Y, "dim_B > dim_Y >= 0", p);
                   const Rational e = q(1, p.dim_B - p.dim_Y);
                   require_eta(p, e, "1/(dim_B - dim_Y)");
                   return Builder("galateau_lower", p)
                       .f("degB", p.deg_B, e, -1)
                       .f("degY", p.deg_Y, -e, -1)
                       .surrogate(p.surrogate)
                       .done();
                 }});
    c.push_back({"carrizosa_lower", "relative Lehmer: deg B^(1/dimB-eta) / ktor(P)^(1/dimB+eta)",
                 [=](const BoundParams& p) {
                   require(p.dim_B >= 1, "dim_B >= 1", p);
                   const Rational e = q(1, p.dim_B);
                   require_eta(p, e, "1/dim_B");
                   return Builder("carrizosa_lower", p)
                       .f("degB", p.deg_B, e, -1)
                       .f(KT, p.ktor_V, -e, -1)
                       .surrogate(p.surrogate)
                       .done();
                 }});
    c.push_back({"kappa", "kappa(g0) = 2^(2g0+1) g0^(4g0) ((g0+1)!)^(2g0), with g0 = N", [](const BoundParams& p) {
                   require(p.N >= 1, "g0 = N >= 1", p);
                   const unsigned long g = static_cast<unsigned long>(p.N);
                   Integer fact;
                   mpz_fac_ui(fact.get_mpz_t(), g + 1);
                   Integer v = pow(Integer(2), 2 * g + 1) * pow(Integer(g), 4 * g) * pow(fact, 2 * g);
                   BoundResult r;
                   r.theorem_id = "kappa";
                   r.eta = p.eta;
                   r.exact_value = Rational(v);
                   r.log10_value = log10_of(v);
                   return r;
                 }});
    c.push_back({"serre_order", "ord(zeta) << [k(Y0):Q]^(N/2+eta)", [](const BoundParams& p) {
                   require(p.N >= 1, "N >= 1", p);
                   require_eta(p, std::nullopt, "");
                   return Builder("serre_order", p).f("kY0", p.k_Y0, q(p.N, 2)).done();
                 }});
    c.push_back({"count_subgroups", "number of subgroups B of bounded degree << deg B^(N+eta)", [](const BoundParams& p) {
                   require(p.N >= 1, "N >= 1", p);
                   require_eta(p, std::nullopt, "");
                   return Builder("count_subgroups", p).f("degB", p.deg_B, q(p.N)).surrogate(p.surrogate).done();
                 }});
    c.push_back({"count_torsion", "sum_{i<=M} i^(2N) <= M^(2N+1)", [](const BoundParams& p) {
                   require(p.N >= 1, "N >= 1", p);
                   require(p.M >= 1, "M >= 1", p);
                   Builder b("count_torsion", p);
                   b.f("M", Rational(p.M), q(2 * p.N + 1), 0);
                   Integer s = 0;
                   for (long i = 1; i <= p.M; ++i) s += pow(Integer(i), 2 * static_cast<unsigned long>(p.N));
                   b.result().exact_count = s;
                   return b.done();
                 }});
    c.push_back({"mw_field", "field of definition of abelian subvarieties: degree <= 3^(16 N^4)",
                 [](const BoundParams& p) {
                   require(p.N >= 1, "N >= 1", p);
                   const long n = p.N;
                   return Builder("mw_field", p).f("3", Rational(3), q(16 * n * n * n * n), 0).done();
                 }});
    c.push_back({"bombieri_zannier", "maximal translates in V: deg H <= deg V^(2^dim V)", [](const BoundParams& p) {
                   require(p.d >= 0 && p.d < 62, "0 <= d < 62", p);
                   return Builder("bombieri_zannier", p).f("degV", p.deg_V, Rational(Integer(1) << p.d), 0).done();
                 }});
    return c;
  }();
  return cat;
}

inline BoundResult evaluate_bound(const std::string& theorem_id, const BoundParams& params) {
  if (params.surrogate != "minor_sum" && params.surrogate != "row_product")
    throw DomainError("unknown degree surrogate '" + params.surrogate + "' (expected minor_sum or row_product)");
  for (const auto& [id, v] : params.constants) detail::require_positive(v, "constant for " + id);
  for (const auto& e : bound_catalog())
    if (e.id == theorem_id) return e.fn(params);
  throw DomainError("unknown theorem id '" + theorem_id + "'");
}

struct IdentityCheck {
  std::string name;
  bool holds;
  std::size_t cases;
  std::string detail;  // first case, or the first failing one
};

struct IdentityReport {
  std::vector<IdentityCheck> checks;
  [[nodiscard]] bool all_hold() const {
    return std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.holds; });
  }
};

namespace detail {

inline BoundParams identity_params(int n, int d, int r, int t) {
  BoundParams p;
  p.N = n;
  p.d = d;
  p.r = r;
  p.t = t;
  p.eta = Rational(1, 1000000);
  return p;
}

inline std::vector<Rational> exps(const std::string& id, const BoundParams& p, const std::vector<std::string>& bases) {
  BoundResult r = evaluate_bound(id, p);
  std::vector<Rational> out;
  for (const auto& b : bases) {
    const Factor* f = r.factor(b);
    if (f == nullptr) throw DomainError(id + " has no base " + b);
    out.push_back(f->exponent);
  }
  return out;
}

inline std::string show(const std::vector<Rational>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + to_string(v[i]);
  return s + ")";
}

}  // namespace detail

/// Cross-checks between the exponent families over parameter sweeps.
inline IdentityReport exponent_identities() {
  using detail::exps;
  using detail::identity_params;
  using detail::show;
  IdentityReport rep;
  const std::vector<std::string> hdk_dv_kv{"(h+deg)*ktor", "degV", "kV"};
  auto add = [&](const std::string& name, const std::vector<Rational>& x, const std::vector<Rational>& y,
                 const std::string& where) {
    bool ok = x == y;
    std::string det = where + ": " + show(x) + (ok ? " = " : " != ") + show(y);
    for (auto& c : rep.checks)
      if (c.name == name) {
        ++c.cases;
        if (!ok && c.holds) {
          c.holds = false;
          c.detail = det;
        }
        return;
      }
    rep.checks.push_back({name, ok, 1, det});
  };

  add("teoremone_ii = tadimzero2_S(3,1)",
      exps("teoremone_ii", identity_params(2, 1, 0, 1), {"ktor*(h+(hg+1)*deg)", "degV", "kV"}),
      exps("tadimzero2_S", identity_params(3, 1, 0, 0), hdk_dv_kv), "N=3");
  add("teoremone_i(3) = teoremone_ii", exps("teoremone_i", identity_params(3, 1, 0, 1), hdk_dv_kv),
      exps("teoremone_ii", identity_params(2, 1, 0, 1), {"ktor*(h+(hg+1)*deg)", "degV", "kV"}), "N=3");
  for (int n = 3; n <= 12; ++n)
    add("teoremone_i = tadimzero2_S(d=1)", exps("teoremone_i", identity_params(n, 1, 0, 1), hdk_dv_kv),
        exps("tadimzero2_S", identity_params(n, 1, 0, 0), hdk_dv_kv), "N=" + std::to_string(n));
  for (int n = 3; n <= 12; ++n)
    for (int t = 1; 2 * t < n; ++t)
      add("teoremone_iii = curva_S(r=N-t)", exps("teoremone_iii", identity_params(n, 1, 0, t), hdk_dv_kv),
          exps("curva_S", identity_params(n, 1, n - t, 0), hdk_dv_kv),
          "N=" + std::to_string(n) + ",t=" + std::to_string(t));
  for (int n = 2; n <= 10; ++n)
    for (int t = 1; t <= n - 1; ++t)
      add("teoremone_iv = curva_S(N+t, r=N)",
          exps("teoremone_iv", identity_params(n, 1, 0, t), {"ktor*(h+(hg+1)*deg)", "degV", "kV"}),
          exps("curva_S", identity_params(n + t, 1, n, 0), hdk_dv_kv),
          "N=" + std::to_string(n) + ",t=" + std::to_string(t));
  for (int n = 3; n <= 12; ++n)
    add("ml1 = tadimzero_hY0(d=1)", exps("ml1", identity_params(n, 1, 0, 1), {"h+deg", "ktor"}),
        exps("tadimzero_hY0", identity_params(n, 1, 0, 0), {"h+deg", "ktor"}), "N=" + std::to_string(n));
  for (int n = 3; n <= 12; ++n)
    for (int t = 1; 2 * t < n; ++t)
      add("mlr = curva_hY0(r=N-t)", exps("mlr", identity_params(n, 1, 0, t), {"h+deg", "ktor"}),
          exps("curva_hY0", identity_params(n, 1, n - t, 0), {"h+deg", "ktor"}),
          "N=" + std::to_string(n) + ",t=" + std::to_string(t));
  for (int n = 2; n <= 10; ++n)
    for (int t = 1; t <= n - 1; ++t)
      add("mltre = curva_hY0(N+t, r=N)", exps("mltre", identity_params(n, 1, 0, t), {"h+(hg+1)*deg", "ktor"}),
          exps("curva_hY0", identity_params(n + t, 1, n, 0), {"h+deg", "ktor"}),
          "N=" + std::to_string(n) + ",t=" + std::to_string(t));
  add("s2c_h = tadimzero_hY0(3,1)", exps("s2c_h", identity_params(3, 1, 0, 0), {"h+deg", "ktor"}),
      exps("tadimzero_hY0", identity_params(3, 1, 0, 0), {"h+deg", "ktor"}), "N=3");
  {
    Rational e = exps("s2c_deg", identity_params(3, 1, 0, 0), {"degV*(h+deg)*ktor*kV"})[0];
    add("s2c_deg = tadimzero2_kY0(3,1)", {e, e},
        exps("tadimzero2_kY0", identity_params(3, 1, 0, 0), {"(h+deg)*ktor", "degV*kV"}), "N=3");
  }
  for (int n = 3; n <= 12; ++n)
    for (int d = 1; d <= n - 2; ++d) {
      auto e = exps("tadimzero2_S", identity_params(n, d, 0, 0), {"(h+deg)*ktor", "kV"});
      const std::string w = "N=" + std::to_string(n) + ",d=" + std::to_string(d);
      add("A1 <= (N+1)^4", {Rational(e[0] <= pow(Rational(n + 1), 4) ? 1 : 0)}, {Rational(1)}, w + " A1=" + to_string(e[0]));
      add("A2 <= N^3", {Rational(e[1] <= pow(Rational(n), 3) ? 1 : 0)}, {Rational(1)}, w + " A2=" + to_string(e[1]));
    }
  for (int n = 3; n <= 12; ++n) {
    std::optional<Rational> best;
    for (int r = n / 2 + 1; r <= n - 1; ++r) {
      if (r < 2) continue;
      Rational v(r, 2 * r - n);
      v.canonicalize();
      if (!best || v > *best) best = v;
    }
    Rational cap(n + 1, 2);
    cap.canonicalize();
    const bool le = *best <= cap, eq = *best == cap;
    add("max_r r/(2r-N) <= (N+1)/2, equality iff N odd", {Rational(le && eq == (n % 2 == 1) ? 1 : 0)}, {Rational(1)},
        "N=" + std::to_string(n) + " max=" + to_string(*best));
  }
  for (int n = 3; n <= 12; n += 2)
    add("altezzacurva_h = curva_hY0(r=(N+1)/2)", exps("altezzacurva_h", identity_params(n, 1, 0, 0), {"h+deg", "ktor"}),
        exps("curva_hY0", identity_params(n, 1, (n + 1) / 2, 0), {"h+deg", "ktor"}), "N=" + std::to_string(n));
  {
    BoundParams p = identity_params(2, 1, 0, 0);
    p.dim_B = 1;
    BoundResult r = evaluate_bound("carrizosa_lower", p);
    const Factor* b = r.factor("degB");
    const Factor* k = r.factor("ktor");
    add("carrizosa_lower(dimB=1) = (1-eta, 1+eta)", {b->exponent, b->eta_coef, -k->exponent, -k->eta_coef},
        {Rational(1), Rational(-1), Rational(1), Rational(1)}, "dimB=1");
  }
  return rep;
}

inline Integer euler_phi(const Integer& n) {
  if (n < 1) throw DomainError("euler_phi requires n >= 1");
  Integer m = n, result = n;
  for (Integer p = 2; p * p <= m; ++p) {
    if (mod(m, p) != 0) continue;
    while (mod(m, p) == 0) m /= p;
    result -= result / p;
  }
  if (m > 1) result -= result / m;
  return result;
}

struct OmegaCandidate {
  Rational deg_V;
  int codim;
};

struct OmegaResult {
  Rational base;      // deg_V / deg_H of the minimizer
  Rational exponent;  // 1 / codim
  std::size_t index;  // first minimizer
  std::vector<std::size_t> ties;
  long double log10_value;
};

/// min over candidates of (deg_V / deg_H)^(1/codim), compared exactly.
inline OmegaResult omega_min(const Rational& deg_h, const std::vector<OmegaCandidate>& cands) {
  if (cands.empty()) throw DomainError("omega_min: empty candidate list");
  detail::require_positive(deg_h, "deg_H");
  std::size_t best = 0;
  std::vector<std::size_t> ties{0};
  auto base = [&](std::size_t i) {
    Rational b = cands[i].deg_V / deg_h;
    b.canonicalize();
    return b;
  };
  for (std::size_t i = 0; i < cands.size(); ++i) {
    detail::require_positive(cands[i].deg_V, "deg_V");
    if (cands[i].codim < 1) throw DomainError("omega_min: codim must be >= 1");
  }
  for (std::size_t i = 1; i < cands.size(); ++i) {
    int c = compare_rational_powers(base(i), detail::q(1, cands[i].codim), base(best), detail::q(1, cands[best].codim));
    if (c < 0) {
      best = i;
      ties = {i};
    } else if (c == 0) {
      ties.push_back(i);
    }
  }
  Rational e = detail::q(1, cands[best].codim);
  return {base(best), e, best, ties, to_long_double(e) * log10_of(base(best))};
}

}  // namespace cmt
