#pragma once

// Command-line front end. Kept in a header so tests can run it in-process.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cmtorsion/cmtorsion.hpp"

namespace cmt::cli {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kInvalid = 2;
constexpr int kBudget = 3;

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline ParsedMatrix read_matrix(const std::string& path) {
  try {
    return parse_matrix_text(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

inline json read_json(const std::string& path) { return parse_json_text(read_file(path), path); }

template <class F>
auto with_file(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

inline Rational option_rational(const std::string& name, const std::string& text) {
  try {
    return parse_rational(text);
  } catch (const std::exception& e) {
    throw ParseError("option --" + name + ": " + e.what());
  }
}

inline Discriminant default_disc() {
  if (const char* env = std::getenv("CMTORSION_DISC")) {
    try {
      return parse_discriminant(std::stol(env));
    } catch (const DomainError&) {
      throw;
    } catch (...) {
      throw ParseError(std::string("CMTORSION_DISC: not an integer '") + env + "'");
    }
  }
  return Discriminant(-4);
}

struct BoundsOptions {
  std::string theorem;
  int N = 0, d = 0, r = 0, t = 0, dimB = 0, dimY = 0;
  long M = 1;
  std::string hV = "0", degV = "1", ktorV = "1", kV = "1", hg = "0", eta = "0";
  std::string degB = "1", degY = "1", hY = "0", kY0 = "1";
  std::vector<std::string> consts;
  std::string surrogate = "minor_sum";
  std::string sweep;
  bool identities = false, list = false;

  BoundParams params() const {
    BoundParams p;
    p.N = N;
    p.d = d;
    p.r = r;
    p.t = t;
    p.dim_B = dimB;
    p.dim_Y = dimY;
    p.M = M;
    p.h_V = option_rational("hV", hV);
    p.deg_V = option_rational("degV", degV);
    p.ktor_V = option_rational("ktorV", ktorV);
    p.k_V = option_rational("kV", kV);
    p.h_g = option_rational("hg", hg);
    p.eta = option_rational("eta", eta);
    p.deg_B = option_rational("degB", degB);
    p.deg_Y = option_rational("degY", degY);
    p.h_Y = option_rational("hY", hY);
    p.k_Y0 = option_rational("kY0", kY0);
    p.surrogate = surrogate;
    for (const auto& c : consts) {
      auto eq = c.find('=');
      if (eq == std::string::npos || eq == 0) throw ParseError("option --const: expected id=value, got '" + c + "'");
      p.constants[c.substr(0, eq)] = option_rational("const", c.substr(eq + 1));
    }
    return p;
  }
};

inline void set_int_param(BoundParams& p, const std::string& name, long v) {
  if (name == "N") p.N = static_cast<int>(v);
  else if (name == "d") p.d = static_cast<int>(v);
  else if (name == "r") p.r = static_cast<int>(v);
  else if (name == "t") p.t = static_cast<int>(v);
  else if (name == "dimB") p.dim_B = static_cast<int>(v);
  else if (name == "dimY") p.dim_Y = static_cast<int>(v);
  else if (name == "M") p.M = v;
  else if (name == "hV") p.h_V = v;
  else if (name == "degV") p.deg_V = v;
  else if (name == "ktorV") p.ktor_V = v;
  else if (name == "kV") p.k_V = v;
  else if (name == "degB") p.deg_B = v;
  else throw ParseError("option --sweep: unknown parameter '" + name + "'");
}

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

inline std::string exponent_summary(const BoundResult& r) {
  std::string s;
  for (const auto& f : r.factors) {
    if (!s.empty()) s += ";";
    s += f.base + "^" + to_string(f.total(r.eta));
  }
  return s;
}

inline int run_bounds(const BoundsOptions& o, std::ostream& out) {
  if (o.list) {
    json a = json::array();
    for (const auto& e : bound_catalog()) a.push_back(json{{"id", e.id}, {"summary", e.summary}});
    out << a.dump(2) << "\n";
    return kOk;
  }
  if (o.identities) {
    IdentityReport rep = exponent_identities();
    out << to_json(rep).dump(2) << "\n";
    return rep.all_hold() ? kOk : kFailed;
  }
  if (o.theorem.empty()) throw ParseError("bounds: --theorem is required (or --identities / --list)");
  BoundParams p = o.params();
  if (o.sweep.empty()) {
    out << to_json(evaluate_bound(o.theorem, p)).dump(2) << "\n";
    return kOk;
  }
  auto eq = o.sweep.find('='), colon = o.sweep.find(':');
  if (eq == std::string::npos || colon == std::string::npos || colon < eq)
    throw ParseError("option --sweep: expected param=lo:hi, got '" + o.sweep + "'");
  const std::string name = o.sweep.substr(0, eq);
  long lo = 0, hi = 0;
  try {
    lo = std::stol(o.sweep.substr(eq + 1, colon - eq - 1));
    hi = std::stol(o.sweep.substr(colon + 1));
  } catch (...) {
    throw ParseError("option --sweep: bounds must be integers in '" + o.sweep + "'");
  }
  if (hi < lo || hi - lo > 100000) throw ParseError("option --sweep: need lo <= hi and at most 100000 steps");
  out << name << ",theorem_id,status,log10_value,value,exponents\n";
  for (long v = lo; v <= hi; ++v) {
    BoundParams q = p;
    set_int_param(q, name, v);
    out << v << "," << o.theorem << ",";
    try {
      BoundResult r = evaluate_bound(o.theorem, q);
      std::ostringstream lg;
      lg.precision(12);
      lg << static_cast<double>(r.log10_value);
      out << "ok," << lg.str() << "," << csv_quote(r.exact_value ? to_string(*r.exact_value) : "") << ","
          << csv_quote(exponent_summary(r)) << "\n";
    } catch (const RangeError& e) {
      out << csv_quote(std::string("range: ") + e.what()) << ",,,\n";
    }
  }
  return kOk;
}

}  // namespace detail

/// Runs the command line; returns the process exit status.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  using namespace detail;
  CLI::App app{"Exact computations for torsion anomalous intersections in powers of CM elliptic curves", "cmtorsion"};
  app.require_subcommand(1);
  std::string output;
  bool verbose = false;
  app.add_option("-o,--output", output, "Write the report to this file instead of stdout");
  app.add_flag("-v,--verbose", verbose, "Log progress to stderr");

  BoundsOptions bo;
  auto* bounds = app.add_subcommand("bounds", "Evaluate an effective bound");
  bounds->add_option("--theorem", bo.theorem, "Catalog id");
  bounds->add_option("--N", bo.N);
  bounds->add_option("--d", bo.d, "dim V");
  bounds->add_option("--r", bo.r, "codim of B or H");
  bounds->add_option("--t", bo.t, "rank of Gamma");
  bounds->add_option("--hV", bo.hV);
  bounds->add_option("--degV", bo.degV);
  bounds->add_option("--ktorV", bo.ktorV);
  bounds->add_option("--kV", bo.kV);
  bounds->add_option("--hg", bo.hg);
  bounds->add_option("--eta", bo.eta);
  bounds->add_option("--degB", bo.degB);
  bounds->add_option("--dimB", bo.dimB);
  bounds->add_option("--degY", bo.degY);
  bounds->add_option("--dimY", bo.dimY);
  bounds->add_option("--hY", bo.hY);
  bounds->add_option("--kY0", bo.kY0);
  bounds->add_option("--M", bo.M);
  bounds->add_option("--const", bo.consts, "Implied constant, id=value (repeatable)");
  bounds->add_option("--surrogate", bo.surrogate, "Degree surrogate used for deg B: minor_sum or row_product");
  bounds->add_option("--sweep", bo.sweep, "CSV sweep over an integer parameter, param=lo:hi");
  bounds->add_flag("--identities", bo.identities, "Print the exponent consistency report");
  bounds->add_flag("--list", bo.list, "List catalog ids");

  auto* identities = app.add_subcommand("identities", "Exponent consistency report");

  std::string module_path, point_path, v_path;
  auto* classify = app.add_subcommand("classify", "Minimal coset and anomaly verdict for a point");
  classify->add_option("--module", module_path)->required();
  classify->add_option("--point", point_path)->required();
  classify->add_option("--V", v_path)->required();

  auto* reduce = app.add_subcommand("reduce", "Torsion variety containing a point of Gamma^N");
  reduce->add_option("--module", module_path)->required();
  reduce->add_option("--point", point_path)->required();

  auto* lift = app.add_subcommand("lift", "Transverse lift x -> (x, g)");
  lift->add_option("--module", module_path)->required();
  lift->add_option("--point", point_path)->required();

  std::size_t e_dim = 1, e_n = 2;
  long e_x = 1, e_m = 1, e_level = 12;
  std::optional<long> e_disc;
  double e_cap = 0;
  bool e_list = false, e_csv = false, e_torsion = false, e_check = false;
  std::string e_eta = "1/10", e_c;
  auto* enumerate = app.add_subcommand("enumerate", "List subgroups of bounded degree or count torsion points");
  enumerate->add_option("--dim", e_dim);
  enumerate->add_option("--N", e_n);
  enumerate->add_option("--disc", e_disc, "Defaults to $CMTORSION_DISC or -4");
  enumerate->add_option("--max-X", e_x, "Bound on the row product of a defining matrix");
  enumerate->add_option("--time-cap", e_cap, "Seconds; 0 = none");
  enumerate->add_option("--witness-level", e_level);
  enumerate->add_option("--eta", e_eta, "Exponent slack for the count bound c*X^(N+eta)");
  enumerate->add_option("--c", e_c, "Constant for the count bound (default C(N, N-dim))");
  enumerate->add_flag("--list", e_list);
  enumerate->add_flag("--csv", e_csv);
  enumerate->add_flag("--check-kernels", e_check, "Verify distinct kernels at the witness level");
  enumerate->add_flag("--torsion", e_torsion, "Count torsion points of order <= --max-order");
  enumerate->add_option("--max-order", e_m);

  std::string a_path, b_path;
  auto* orthogonal = app.add_subcommand("orthogonal", "Hermitian orthogonality of two tangent spaces");
  orthogonal->add_option("--A", a_path, "Parametrization file, one column per line")->required();
  orthogonal->add_option("--B", b_path)->required();

  std::string s_path, c_s;
  std::size_t s_k = 1;
  auto* siegel = app.add_subcommand("siegel", "Small solutions of S v = 0");
  siegel->add_option("--system", s_path)->required();
  siegel->add_option("--k", s_k);
  siegel->add_option("--cS", c_s, "Siegel constant (default 2^(2n)|disc|^n)");

  std::string m_path;
  bool square = false;
  auto* complement = app.add_subcommand("complement", "Orthogonal complement of a subgroup");
  complement->add_option("--matrix", m_path)->required();
  complement->add_flag("--square", square, "Also complete the matrix to an invertible square one");
  complement->add_option("--cS", c_s);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalid;
  }

  json report;
  int status = kOk;
  try {
    if (*bounds) {
      std::ostringstream os;
      status = run_bounds(bo, os);
      if (output.empty()) out << os.str();
      else std::ofstream(output) << os.str();
      return status;
    }
    if (*identities) {
      IdentityReport rep = exponent_identities();
      report = to_json(rep);
      status = rep.all_hold() ? kOk : kFailed;
    } else if (*classify || *reduce || *lift) {
      json mj = read_json(module_path);
      ModuleSpec spec = with_file(module_path, [&] { return module_from_json(mj); });
      json pj = read_json(point_path);
      if (*classify) {
        PointInEN x = with_file(point_path, [&] { return point_from_json(pj, spec); });
        json vj = read_json(v_path);
        VarietyParams v = with_file(v_path, [&] { return variety_from_json(vj); });
        report = to_json(classify_point(v, spec, x));
      } else if (*reduce) {
        GammaPoint g = with_file(point_path, [&] { return gamma_point_from_json(pj, spec); });
        GammaReduction red = gamma_to_torsion_variety(spec, g);
        report = to_json(red);
        report["contains_input"] = red.coset ? gamma_coset_contains(spec, *red.coset, g) : red.torsion;
      } else {
        PointInEN x = with_file(point_path, [&] { return point_from_json(pj, spec); });
        TransverseLift l = transverse_lift(spec, x);
        report = to_json(l);
        report["contains_lift"] = coset_contains(spec, l.coset, l.point);
      }
    } else if (*enumerate) {
      Discriminant d = e_disc ? parse_discriminant(*e_disc) : default_disc();
      if (e_torsion) {
        TorsionEnumeration t = enumerate_torsion(d, e_n, e_m, e_list);
        report = to_json(t);
        report = json{{"disc", d.value()}, {"torsion", report}};
      } else {
        EnumerationBudget b;
        b.N = e_n;
        b.target_dim = e_dim;
        b.max_row_product = e_x;
        b.time_cap = e_cap;
        b.witness_level = e_level;
        if (verbose) err << "enumerating dim " << e_dim << " subgroups of E^" << e_n << " with X <= " << e_x << "\n";
        SubgroupEnumeration res = enumerate_subgroups(d, b);
        if (verbose) err << "examined " << res.candidates << " matrices\n";
        Rational eta = option_rational("eta", e_eta);
        Rational c = e_c.empty() ? Rational(binomial(e_n, e_n - e_dim)) : option_rational("c", e_c);
        bool within = count_within_bound(res.count(), e_x, e_n, eta, c);
        if (e_csv) {
          std::ostringstream os;
          os << "index,witness_row_product,minor_sum,row_product,matrix\n";
          for (std::size_t i = 0; i < res.subgroups.size(); ++i) {
            const auto& s = res.subgroups[i];
            DegreeSurrogate ds = degree_surrogate(s.subgroup);
            std::string m = format_matrix_text(s.subgroup.matrix());
            for (auto& ch : m)
              if (ch == '\n') ch = ';';
            os << i << "," << s.row_product << "," << ds.minor_sum << "," << ds.row_product << "," << csv_quote(m)
               << "\n";
          }
          if (output.empty()) out << os.str();
          else std::ofstream(output) << os.str();
          if (res.partial) err << "time cap reached: partial listing\n";
          return res.partial ? kBudget : kOk;
        }
        report = json{{"disc", d.value()}, {"N", e_n}, {"dim", e_dim}, {"max_X", e_x}};
        json body = to_json(res, e_list);
        for (auto& [k, v] : body.items()) report[k] = v;
        report["count_bound"] = json{{"c", to_string(c)}, {"eta", to_string(eta)}, {"within", within}};
        if (e_check && !res.partial) report["kernels_distinct"] = kernels_distinct_at_level(res.subgroups, e_level);
        if (res.partial) status = kBudget;
      }
    } else if (*orthogonal) {
      ParsedMatrix a = read_matrix(a_path), b = read_matrix(b_path);
      if (!(a.disc == b.disc)) throw ParseError("--A and --B use different discriminants");
      OMatrix pa = a.matrix.transpose(), pb = b.matrix.transpose();
      report = json{{"orthogonal", tangent_orthogonal(pa, pb)}};
    } else if (*siegel) {
      ParsedMatrix s = read_matrix(s_path);
      std::optional<Rational> cs;
      if (!c_s.empty()) cs = option_rational("cS", c_s);
      report = to_json(small_solution(s.matrix, s_k, cs));
    } else if (*complement) {
      ParsedMatrix m = read_matrix(m_path);
      SubgroupMatrix sm(m.matrix);
      report = to_json(orthogonal_complement(sm));
      if (square) {
        std::optional<Rational> cs;
        if (!c_s.empty()) cs = option_rational("cS", c_s);
        report["completion"] = to_json(complete_to_square(sm, cs));
      }
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const RangeError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kBudget;
  }
  const std::string text = report.dump(2) + "\n";
  if (output.empty()) {
    out << text;
  } else {
    std::ofstream f(output);
    if (!f) {
      err << "error: cannot write '" << output << "'\n";
      return kInvalid;
    }
    f << text;
  }
  return status;
}

}  // namespace cmt::cli
