#pragma once

// Text and JSON encodings. Matrices use a line format with a "disc N r"
// header; modules, points and variety parameters are JSON.

#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cmtorsion/bounds.hpp"
#include "cmtorsion/enumeration.hpp"
#include "cmtorsion/errors.hpp"
#include "cmtorsion/mordell_weil.hpp"
#include "cmtorsion/reductions.hpp"
#include "cmtorsion/siegel.hpp"
#include "cmtorsion/subgroup.hpp"

namespace cmt {

using json = nlohmann::ordered_json;

inline Discriminant parse_discriminant(long v) {
  if (!Discriminant::is_supported(static_cast<int>(v)))
    throw DomainError("unsupported discriminant " + std::to_string(v) + " (expected -3, -4, -7, -8 or -11)");
  return Discriminant(static_cast<int>(v));
}

// ---- matrix text format ----

struct ParsedMatrix {
  Discriminant disc;
  OMatrix matrix;
};

namespace detail {

inline std::vector<std::string> tokens(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  for (std::string t; is >> t;) out.push_back(t);
  return out;
}

inline long parse_long(const std::string& s, const std::string& what, int line) {
  try {
    std::size_t pos = 0;
    long v = std::stol(s, &pos);
    if (pos != s.size()) throw ParseError("");
    return v;
  } catch (...) {
    throw ParseError("expected integer for " + what + ", got '" + s + "'", line);
  }
}

}  // namespace detail

/// Header "disc N r" then r rows of N entries "a+b*w" (no spaces inside an
/// entry). '#' starts a comment; blank lines are ignored.
inline ParsedMatrix parse_matrix_text(std::istream& in) {
  std::optional<Discriminant> d;
  std::size_t n = 0, r = 0;
  std::vector<std::vector<OrderElement>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    auto tok = detail::tokens(line);
    if (tok.empty()) continue;
    if (!d) {
      if (tok.size() != 3) throw ParseError("header must be 'disc N r'", lineno);
      try {
        d = parse_discriminant(detail::parse_long(tok[0], "disc", lineno));
      } catch (const DomainError& e) {
        throw ParseError(e.what(), lineno);
      }
      long nn = detail::parse_long(tok[1], "N", lineno), rr = detail::parse_long(tok[2], "r", lineno);
      if (nn < 1 || rr < 0) throw ParseError("need N >= 1 and r >= 0", lineno);
      n = static_cast<std::size_t>(nn);
      r = static_cast<std::size_t>(rr);
      continue;
    }
    if (rows.size() == r) throw ParseError("more than " + std::to_string(r) + " rows", lineno);
    if (tok.size() != n)
      throw ParseError("row has " + std::to_string(tok.size()) + " entries, expected " + std::to_string(n), lineno);
    std::vector<OrderElement> row;
    for (std::size_t j = 0; j < n; ++j) {
      try {
        row.push_back(parse_order_element(tok[j], *d));
      } catch (const ParseError& e) {
        throw ParseError(std::string(e.what()) + " (column " + std::to_string(j + 1) + ")", lineno);
      }
    }
    rows.push_back(std::move(row));
  }
  if (!d) throw ParseError("missing header 'disc N r'");
  if (rows.size() != r)
    throw ParseError("expected " + std::to_string(r) + " rows, found " + std::to_string(rows.size()), lineno);
  return {*d, OMatrix::from_rows(*d, n, rows)};
}

inline ParsedMatrix parse_matrix_text(const std::string& text) {
  std::istringstream is(text);
  return parse_matrix_text(is);
}

inline std::string format_matrix_text(const OMatrix& m) {
  std::string out = std::to_string(m.disc().value()) + " " + std::to_string(m.cols()) + " " +
                    std::to_string(m.rows()) + "\n";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out += (j ? " " : "") + to_string(m(i, j));
    out += "\n";
  }
  return out;
}

// ---- torsion point text format: "level: n; coords: [x1, x2, ...]" ----

inline TorsionPoint parse_torsion_text(const std::string& text, Discriminant d) {
  auto fail = [&](const std::string& why) { return ParseError("torsion point '" + text + "': " + why); };
  auto lv = text.find("level:");
  auto semi = text.find(';');
  auto co = text.find("coords:");
  auto lb = text.find('['), rb = text.rfind(']');
  if (lv == std::string::npos || semi == std::string::npos || co == std::string::npos || lb == std::string::npos ||
      rb == std::string::npos || !(lv < semi && semi < co && co < lb && lb < rb))
    throw fail("expected 'level: n; coords: [..]'");
  auto lt = detail::tokens(text.substr(lv + 6, semi - lv - 6));
  if (lt.size() != 1) throw fail("bad level");
  Integer level;
  if (level.set_str(lt[0], 10) != 0 || level < 1) throw fail("level must be a positive integer");
  std::vector<OrderElement> coords;
  std::string body = text.substr(lb + 1, rb - lb - 1);
  std::istringstream is(body);
  for (std::string item; std::getline(is, item, ',');) {
    if (detail::tokens(item).empty()) continue;
    coords.push_back(parse_order_element(item, d));
  }
  if (coords.empty()) throw fail("no coordinates");
  return {d, level, std::move(coords)};
}

inline std::string format_torsion_text(const TorsionPoint& z) {
  std::string s = "level: " + to_string(z.level()) + "; coords: [";
  for (std::size_t i = 0; i < z.N(); ++i) s += (i ? ", " : "") + to_string(z.coords()[i]);
  return s + "]";
}

// ---- JSON output ----

inline json to_json(const Rational& q) { return to_string(q); }
inline json to_json(const Integer& z) {
  if (z.fits_slong_p()) return z.get_si();
  return to_string(z);
}
inline json to_json(const OrderElement& x) { return to_string(x); }
inline json to_json(const FieldElement& x) { return json{{"q", to_string(x.p())}, {"w", to_string(x.q())}}; }

inline json to_json(const std::vector<OrderElement>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}

inline json to_json(const OMatrix& m) {
  json a = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(to_json(m.row(i)));
  return a;
}

inline json to_json(const SubgroupMatrix& s) {
  DegreeSurrogate ds = degree_surrogate(s);
  return json{{"N", s.N()},
              {"codim", s.codim()},
              {"dim", s.dim()},
              {"matrix", to_json(s.matrix())},
              {"minor_sum", to_json(ds.minor_sum)},
              {"row_product", to_json(ds.row_product)}};
}

inline json to_json(const TorsionPoint& z) {
  return json{{"level", to_json(z.level())}, {"order", to_json(z.order())}, {"coords", to_json(z.coords())}};
}

inline json to_json(const TorsionCoset& c) { return json{{"subgroup", to_json(c.subgroup)}, {"zeta", to_json(c.zeta)}}; }

inline json to_json(const BoundResult& r) {
  json j;
  j["theorem_id"] = r.theorem_id;
  j["constant"] = to_json(r.constant);
  j["eta"] = to_json(r.eta);
  json ex = json::array();
  for (const auto& f : r.factors) {
    json e;
    e["base"] = f.base;
    e["base_value"] = to_json(f.value);
    e["exponent"] = to_json(f.exponent);
    e["eta_coef"] = to_json(f.eta_coef);
    if (f.eta2_coef != 0) e["eta2_coef"] = to_json(f.eta2_coef);
    e["total"] = to_json(f.total(r.eta));
    ex.push_back(std::move(e));
  }
  j["exponents"] = std::move(ex);
  j["value"] = r.exact_value ? json(to_json(*r.exact_value)) : json(nullptr);
  {
    std::ostringstream os;
    os.precision(12);
    os << static_cast<double>(r.log10_value);
    j["log10_value"] = os.str();
  }
  if (r.lower) j["lower"] = to_json(*r.lower);
  if (r.exact_count) j["exact_count"] = to_json(*r.exact_count);
  if (!r.surrogate.empty()) j["deg_B_surrogate"] = r.surrogate;
  if (!r.notes.empty()) j["notes"] = r.notes;
  return j;
}

inline json to_json(const IdentityReport& rep) {
  json a = json::array();
  for (const auto& c : rep.checks)
    a.push_back(json{{"name", c.name}, {"holds", c.holds}, {"cases", c.cases}, {"detail", c.detail}});
  return json{{"all_hold", rep.all_hold()}, {"checks", std::move(a)}};
}

inline json to_json(const AnomalyReport& r) {
  return json{{"verdict", r.verdict},
              {"regime", r.regime},
              {"anomalous", r.anomalous},
              {"dimB", r.dim_b},
              {"relative_codim", r.relative_codim},
              {"relative_codim_one", r.relative_codim_one},
              {"theorem_id", r.theorem_id},
              {"curve_n2_regime", r.curve_n2_regime},
              {"coset", to_json(r.minimal.coset)},
              {"relations", to_json(r.minimal.relations)}};
}

inline json to_json(const GammaReduction& g) {
  json j{{"torsion", g.torsion}, {"rank_B", g.rank_b}, {"codim", g.codim}, {"pivot_rows", g.pivot_rows}};
  j["coset"] = g.coset ? to_json(*g.coset) : json(nullptr);
  return j;
}

inline json to_json(const ModulePoint& p) { return json{{"free", to_json(p.free)}, {"torsion", to_json(p.torsion)}}; }

inline json to_json(const PointInEN& x) {
  json a = json::array();
  for (const auto& c : x.coords) a.push_back(to_json(c));
  return json{{"coords", std::move(a)}};
}

inline json to_json(const TransverseLift& l) {
  return json{{"point", to_json(l.point)}, {"coset", to_json(l.coset)}, {"degenerate", l.degenerate}};
}

inline json to_json(const SiegelCertificate& c) {
  std::ostringstream os;
  os.precision(12);
  os << static_cast<double>(c.log10_achieved);
  return json{{"m", c.m},
              {"n", c.n},
              {"k", c.k},
              {"size_term", to_json(c.size_term)},
              {"exponent", to_json(c.exponent)},
              {"constant", to_json(c.constant)},
              {"max_norm", to_json(c.max_norm)},
              {"holds", c.holds},
              {"log10_achieved", os.str()}};
}

inline json to_json(const SiegelResult& r) {
  json sols = json::array();
  for (const auto& v : r.solutions) sols.push_back(to_json(v));
  return json{{"solutions", std::move(sols)}, {"used_rows", r.used_rows}, {"certificate", to_json(r.certificate)}};
}

inline json to_json(const OrthogonalComplement& c) {
  return json{{"complement", to_json(c.complement)},
              {"parametrization", to_json(c.parametrization)},
              {"intersection_cardinality", to_json(c.intersection)},
              {"minor_sum", to_json(c.minor_sum)},
              {"ratio", to_json(c.ratio)}};
}

inline json to_json(const SquareCompletion& s) {
  json j{{"square", to_json(s.square)}, {"determinant", to_json(s.determinant)}};
  j["siegel"] = s.siegel ? to_json(*s.siegel) : json(nullptr);
  return j;
}

inline json to_json(const SubgroupEnumeration& e, bool list) {
  json j{{"count", e.count()}, {"partial", e.partial}, {"candidates", e.candidates}, {"witness_level", e.witness_level}};
  if (list) {
    json a = json::array();
    for (const auto& s : e.subgroups) {
      json x = to_json(s.subgroup);
      x["witness_row_product"] = to_json(s.row_product);
      a.push_back(std::move(x));
    }
    j["subgroups"] = std::move(a);
  }
  return j;
}

inline json to_json(const TorsionEnumeration& t) {
  json counts = json::array();
  for (std::size_t i = 0; i < t.exact_counts.size(); ++i) {
    const long n = static_cast<long>(i + 1);
    counts.push_back(json{{"n", n},
                          {"exact_order", to_json(t.exact_counts[i])},
                          {"order_dividing", to_json(torsion_count_dividing(t.N, n))}});
  }
  json j{{"N", t.N}, {"M", t.M}, {"total", to_json(t.total)}, {"counts", std::move(counts)}, {"listed", t.listed}};
  if (t.listed) {
    json a = json::array();
    for (const auto& z : t.points) a.push_back(format_torsion_text(z));
    j["points"] = std::move(a);
  }
  return j;
}

// ---- JSON input ----

namespace detail {

[[noreturn]] inline void field_error(const std::string& path, const std::string& why) {
  throw ParseError("field '" + path + "': " + why);
}

inline const json& member(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) field_error(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) field_error(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

inline std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

inline Rational rational_from(const json& j, const std::string& path) {
  try {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_number_unsigned()) return Rational(j.get<unsigned long>());
    if (j.is_number_float()) return parse_rational(j.dump());
    if (j.is_string()) return parse_rational(j.get<std::string>());
  } catch (const std::exception& e) {
    field_error(path, e.what());
  }
  field_error(path, "expected a rational number");
}

inline long int_from(const json& j, const std::string& path) {
  if (!j.is_number_integer()) field_error(path, "expected an integer");
  return j.get<long>();
}

inline OrderElement element_from(const json& j, const std::string& path, Discriminant d) {
  try {
    if (j.is_number_integer()) return {Integer(j.get<long>()), Integer(0), d};
    if (j.is_string()) return parse_order_element(j.get<std::string>(), d);
  } catch (const ParseError& e) {
    field_error(path, e.what());
  }
  field_error(path, "expected an order element \"a+b*w\"");
}

inline FieldElement field_from(const json& j, const std::string& path, Discriminant d) {
  if (j.is_object()) {
    Rational q = j.contains("q") ? rational_from(j["q"], path + ".q") : Rational(0);
    Rational w = j.contains("w") ? rational_from(j["w"], path + ".w") : Rational(0);
    return {q, w, d};
  }
  return {rational_from(j, path), Rational(0), d};
}

template <class Fn>
auto array_from(const json& j, const std::string& path, Fn&& fn) {
  if (!j.is_array()) field_error(path, "expected an array");
  std::vector<decltype(fn(j, path))> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(fn(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace detail

inline json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(what + ": invalid JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

/// {"disc": -4, "rank": t, "gram": [[{"q": .., "w": ..}, ..], ..], "torsion_order": R}
/// Without "gram" the identity Gram matrix of the given rank is used.
inline ModuleSpec module_from_json(const json& j) {
  using namespace detail;
  Discriminant d = [&] {
    try {
      return parse_discriminant(int_from(member(j, "disc", ""), "disc"));
    } catch (const DomainError& e) {
      field_error("disc", e.what());
    }
  }();
  Integer r = j.contains("torsion_order") ? Integer(int_from(j["torsion_order"], "torsion_order")) : Integer(1);
  if (r < 1) field_error("torsion_order", "must be >= 1");
  std::optional<long> rank;
  if (j.contains("rank")) {
    rank = int_from(j["rank"], "rank");
    if (*rank < 0) field_error("rank", "must be >= 0");
  }
  if (!j.contains("gram")) {
    if (!rank) field_error("gram", "missing (and no rank given)");
    return ModuleSpec::standard(d, static_cast<std::size_t>(*rank), r);
  }
  Gram g = array_from(j["gram"], "gram", [&](const json& row, const std::string& p) {
    return array_from(row, p, [&](const json& e, const std::string& q) { return field_from(e, q, d); });
  });
  if (rank && static_cast<std::size_t>(*rank) != g.size())
    field_error("rank", "does not match the gram size " + std::to_string(g.size()));
  try {
    return {d, std::move(g), r};
  } catch (const DomainError& e) {
    field_error("gram", e.what());
  }
}

inline ModulePoint module_point_from_json(const json& j, const std::string& path, const ModuleSpec& s) {
  using namespace detail;
  ModulePoint p = ModulePoint::zero(s);
  p.free = array_from(member(j, "free", path), join(path, "free"),
                      [&](const json& e, const std::string& q) { return element_from(e, q, s.disc()); });
  if (p.free.size() != s.rank())
    field_error(join(path, "free"), "has " + std::to_string(p.free.size()) + " entries, module rank is " +
                                        std::to_string(s.rank()));
  if (j.contains("torsion")) p.torsion = element_from(j["torsion"], join(path, "torsion"), s.disc());
  return validated(s, std::move(p));
}

/// {"coords": [{"free": [..], "torsion": ".."}, ..]}
inline PointInEN point_from_json(const json& j, const ModuleSpec& s) {
  PointInEN x;
  x.coords = detail::array_from(detail::member(j, "coords", ""), "coords", [&](const json& e, const std::string& p) {
    return module_point_from_json(e, p, s);
  });
  if (x.coords.empty()) detail::field_error("coords", "must not be empty");
  return x;
}

/// Like a point, plus optional multipliers "a" (default all 1).
inline GammaPoint gamma_point_from_json(const json& j, const ModuleSpec& s) {
  GammaPoint g = GammaPoint::from_point(s, point_from_json(j, s));
  if (j.contains("a")) {
    g.a = detail::array_from(j["a"], "a",
                             [&](const json& e, const std::string& p) { return detail::element_from(e, p, s.disc()); });
    if (g.a.size() != g.N()) detail::field_error("a", "length differs from coords");
    for (std::size_t i = 0; i < g.a.size(); ++i)
      if (g.a[i].is_zero()) detail::field_error("a[" + std::to_string(i) + "]", "must be nonzero");
  }
  return g;
}

/// {"N", "dim_V", "h_V", "deg_V", "deg_ktor_V", "deg_k_V"}; the last four default to 0, 1, 1, 1.
inline VarietyParams variety_from_json(const json& j) {
  using namespace detail;
  VarietyParams v;
  v.N = static_cast<int>(int_from(member(j, "N", ""), "N"));
  v.dim_V = static_cast<int>(int_from(member(j, "dim_V", ""), "dim_V"));
  if (j.contains("h_V")) v.h_V = rational_from(j["h_V"], "h_V");
  if (j.contains("deg_V")) v.deg_V = rational_from(j["deg_V"], "deg_V");
  if (j.contains("deg_ktor_V")) v.deg_ktor_V = rational_from(j["deg_ktor_V"], "deg_ktor_V");
  if (j.contains("deg_k_V")) v.deg_k_V = rational_from(j["deg_k_V"], "deg_k_V");
  try {
    v.validate();
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
  return v;
}

}  // namespace cmt
