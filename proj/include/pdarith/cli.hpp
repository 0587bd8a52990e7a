#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "arith.hpp"
#include "eisenstein.hpp"
#include "forms.hpp"
#include "series.hpp"
#include "testfn.hpp"
#include "wigner.hpp"
#include "zeta.hpp"

namespace pdarith::cli {

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ValueEntry {
  std::string name;
  cplx value;
  double err = 0.0;
};

struct CheckEntry {
  std::string name;
  double residual = 0.0;
  double tol = 0.0;
  bool pass = true;
};

struct RunReport {
  std::string command;
  std::map<std::string, std::string> parameters;
  std::vector<ValueEntry> values;
  std::vector<CheckEntry> checks;
  std::optional<double> wall_time;
  nlohmann::ordered_json extra;  // command-specific payload (coefficient tables)

  void value(const std::string& name, cplx v, double err = 0.0) { values.push_back({name, v, err}); }
  void value(const std::string& name, const Estimate& e) { values.push_back({name, e.value, e.err}); }
  bool check(const std::string& name, double residual, double tol) {
    bool ok = residual <= tol;
    checks.push_back({name, residual, tol, ok});
    return ok;
  }
  bool pass() const {
    for (auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

inline std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline nlohmann::ordered_json to_json(const RunReport& r) {
  nlohmann::ordered_json j;
  j["command"] = r.command;
  j["parameters"] = nlohmann::ordered_json::object();
  for (auto& [k, v] : r.parameters) j["parameters"][k] = v;
  j["values"] = nlohmann::ordered_json::array();
  for (auto& v : r.values) j["values"].push_back({{"name", v.name}, {"value", {v.value.real(), v.value.imag()}}, {"err", v.err}});
  j["checks"] = nlohmann::ordered_json::array();
  for (auto& c : r.checks)
    j["checks"].push_back({{"name", c.name}, {"residual", c.residual}, {"tol", c.tol}, {"pass", c.pass}});
  j["pass"] = r.pass();
  if (!r.extra.is_null()) j["data"] = r.extra;
  if (r.wall_time) j["wall_time_s"] = *r.wall_time;
  return j;
}

// kind,name,re,im,err,tol,pass; parameter rows carry the text in the re column
inline void write_csv(const RunReport& r, std::ostream& os) {
  os << "kind,name,re,im,err,tol,pass\n";
  os << "command," << r.command << ",,,,,\n";
  for (auto& [k, v] : r.parameters) os << "param," << k << "," << v << ",,,,\n";
  for (auto& v : r.values)
    os << "value," << v.name << "," << fmt_double(v.value.real()) << "," << fmt_double(v.value.imag()) << ","
       << fmt_double(v.err) << ",,\n";
  for (auto& c : r.checks)
    os << "check," << c.name << "," << fmt_double(c.residual) << ",,," << fmt_double(c.tol) << ","
       << (c.pass ? "true" : "false") << "\n";
  if (r.wall_time) os << "timing,wall_time_s," << fmt_double(*r.wall_time) << ",,,,\n";
}

inline void emit_report(const RunReport& r, const std::string& format, std::ostream& os) {
  if (format == "csv")
    write_csv(r, os);
  else
    os << to_json(r).dump(2) << "\n";
}

// "2.5", "3+4i", "1-3i", "-2i"
inline cplx parse_complex(const std::string& s) {
  if (s.empty()) throw UsageError("empty complex number");
  std::size_t used = 0;
  try {
    if (s.back() != 'i') {
      double x = std::stod(s, &used);
      if (used != s.size()) throw UsageError("bad number: " + s);
      return x;
    }
    std::string body = s.substr(0, s.size() - 1);
    std::size_t split = std::string::npos;
    for (std::size_t k = body.size(); k-- > 1;)
      if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
        split = k;
        break;
      }
    auto im_of = [](const std::string& t) {
      if (t.empty() || t == "+") return 1.0;
      if (t == "-") return -1.0;
      std::size_t u = 0;
      double v = std::stod(t, &u);
      if (u != t.size()) throw UsageError("bad imaginary part: " + t);
      return v;
    };
    if (split == std::string::npos) return {0.0, im_of(body)};
    double re = std::stod(body.substr(0, split), &used);
    if (used != split) throw UsageError("bad number: " + s);
    return {re, im_of(body.substr(split))};
  } catch (const std::logic_error&) {
    throw UsageError("bad number: " + s);
  }
}

inline std::string show_complex(cplx z) {
  if (z.imag() == 0.0) return fmt_double(z.real());
  return fmt_double(z.real()) + (z.imag() < 0 ? "" : "+") + fmt_double(z.imag()) + "i";
}

struct Options {
  std::optional<double> tol;
  std::optional<double> max_height;
  std::optional<i64> k_cap;
  std::optional<i64> R, Q;
  bool flattened = false;
  bool timing = false;
  std::string out = "json";
  std::string out_file;
  std::vector<std::string> params;
};

class Context {
 public:
  Context(const Options& o, RunReport& r) : opt(o), rep(r) {
    for (auto& kv : o.params) {
      auto eq = kv.find('=');
      if (eq == std::string::npos || eq == 0) throw UsageError("--params expects key=value, got " + kv);
      raw_[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
  }

  bool has(const std::string& k) const { return raw_.count(k) > 0; }
  void allow(std::set<std::string> keys) {
    for (auto& [k, v] : raw_)
      if (!keys.count(k)) throw UsageError("unknown parameter for " + rep.command + ": " + k);
  }
  double num(const std::string& k, double d) {
    double x = raw_.count(k) ? parse_complex(raw_[k]).real() : d;
    rep.parameters[k] = fmt_double(x);
    return x;
  }
  i64 integer(const std::string& k, i64 d) {
    i64 x = d;
    if (raw_.count(k)) {
      try {
        std::size_t u = 0;
        x = std::stoll(raw_[k], &u);
        if (u != raw_[k].size()) throw UsageError("bad integer for " + k);
      } catch (const std::logic_error&) {
        throw UsageError("bad integer for " + k);
      }
    }
    rep.parameters[k] = std::to_string(x);
    return x;
  }
  cplx complex(const std::string& k, cplx d) {
    cplx x = raw_.count(k) ? parse_complex(raw_[k]) : d;
    rep.parameters[k] = show_complex(x);
    return x;
  }
  std::vector<cplx> complex_list(const std::string& k, std::vector<cplx> d) {
    if (raw_.count(k)) d = {parse_complex(raw_[k])};
    std::string s;
    for (auto& z : d) s += (s.empty() ? "" : ";") + show_complex(z);
    rep.parameters[k] = s;
    return d;
  }
  std::string word(const std::string& k, const std::string& d, std::set<std::string> choices) {
    std::string x = raw_.count(k) ? raw_[k] : d;
    if (!choices.count(x)) throw UsageError("bad value for " + k + ": " + x);
    rep.parameters[k] = x;
    return x;
  }
  double tol(double d) {
    double t = opt.tol.value_or(d);
    rep.parameters["tol"] = fmt_double(t);
    return t;
  }
  double height(double d) {
    double t = opt.max_height.value_or(d);
    rep.parameters["max_height"] = fmt_double(t);
    return t;
  }
  i64 R(i64 d) {
    i64 x = opt.R.value_or(d);
    rep.parameters["R"] = std::to_string(x);
    return x;
  }
  i64 Q(i64 d) {
    i64 x = opt.Q.value_or(d);
    rep.parameters["Q"] = std::to_string(x);
    return x;
  }
  LatticeOptions lattice() {
    LatticeOptions l;
    if (opt.k_cap) l.k_cap = *opt.k_cap;
    rep.parameters["k_cap"] = std::to_string(l.k_cap);
    return l;
  }
  Fn v() { return fn(canonical_v(flat())); }
  Fn u() { return fn(canonical_u(flat())); }
  bool flat() {
    rep.parameters["flattened"] = opt.flattened ? "true" : "false";
    return opt.flattened;
  }

  const Options& opt;
  RunReport& rep;

 private:
  std::map<std::string, std::string> raw_;
};

namespace cmd {

inline double rel_scale(cplx a, cplx b) { return std::max(std::abs(a), std::abs(b)); }

inline void thm61(Context& c) {
  c.allow({});
  i64 R = c.R(5), Q = c.Q(3);
  double tol = c.tol(1e-8);
  auto lo = c.lattice();
  auto f = finite_form(c.v(), c.u(), R, Q);
  auto l = lattice_form(c.v(), c.u(), LatticeSymbolSpec::T_N(checked_mul(R, Q)), Q, lo);
  c.rep.value("finite_form", f);
  c.rep.value("lattice_form", l);
  c.rep.check("finite_vs_lattice", std::abs(f.value - l.value), tol * (1.0 + std::abs(l.value)));
}

inline void thm72(Context& c) {
  c.allow({"symbol"});
  auto sym = c.word("symbol", "tn", {"tn", "inf_odd"});
  i64 Q = c.Q(1);
  double tol = c.tol(1e-8);
  auto lo = c.lattice();
  Estimate l, a;
  if (sym == "tn") {
    i64 R = c.R(1);
    l = lattice_form(c.v(), c.u(), LatticeSymbolSpec::T_N(checked_mul(R, Q)), Q, lo);
    a = arithmetic_side(c.v(), c.u(), R, Q);
  } else {
    l = lattice_form(c.v(), c.u(), LatticeSymbolSpec::T_inf_over_2(), Q, lo);
    a = arithmetic_side_inf_odd(c.v(), c.u(), Q);
  }
  c.rep.value("lattice_form", l);
  c.rep.value("arithmetic_side", a);
  c.rep.check("lattice_vs_arithmetic", std::abs(l.value - a.value), tol * rel_scale(l.value, a.value));
}

inline void lem71(Context& c) {
  c.allow({});
  i64 R = c.R(1), Q = c.Q(3);
  auto a = coeff_table(R, Q, TableMethod::c71), b = coeff_table(R, Q, TableMethod::dft);
  i64 diff = 0, nonzero = 0;
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    if (a.entries[i] != b.entries[i]) ++diff;
    if (a.entries[i] != 0) ++nonzero;
  }
  c.rep.value("modulus", (double)a.modulus);
  c.rep.value("nonzero_entries", (double)nonzero);
  c.rep.value("condition_mismatches", (double)b.condition_mismatches);
  c.rep.check("c71_vs_dft_discrepancy", (double)diff, 0.0);
}

inline void thm81(Context& c) {
  c.allow({"samples", "seed"});
  i64 R = c.R(1), Q = c.Q(3);
  i64 samples = c.integer("samples", 0);
  i64 seed = c.integer("seed", 12345);
  auto r = check_thm81(R, Q, samples, (std::uint64_t)seed);
  c.rep.value("checked", (double)r.checked);
  c.rep.check("max_discrepancy", (double)r.max_discrepancy, 0.0);
}

inline void eq82(Context& c) {
  c.allow({});
  i64 Q = c.Q(3), R = c.R(19);
  double tol = c.tol(1e-8);
  auto r = check_eq82(c.v(), c.u(), R, Q, c.lattice());
  c.rep.value("lattice_form", r.lattice);
  c.rep.value("reflected_form", r.reflected);
  c.rep.value("residual_without_sign", r.residual_without_sign);
  c.rep.check("reflection_residual", r.residual, tol);
}

inline void eq320(Context& c) {
  c.allow({"nu"});
  auto nus = c.complex_list("nu", {2.2, 2.5, cplx(3, 4)});
  double tol = c.tol(1e-6);
  for (cplx nu : nus) {
    auto k = pairing_kernel320(c.v(), c.u(), nu);
    auto d = pairing_def31(c.v(), c.u(), nu);
    std::string tag = "nu=" + show_complex(nu);
    c.rep.value("kernel320 " + tag, k);
    c.rep.value("def31 " + tag, d);
    double sc = rel_scale(k.value, d.value);
    c.rep.check("route_agreement " + tag, std::abs(k.value - d.value), tol * (sc == 0.0 ? 1.0 : sc));
  }
}

inline void eq314(Context& c) {
  c.allow({"c", "symbol", "N"});
  double cc = c.num("c", 2.0);
  auto sym = c.word("symbol", "comb", {"comb", "tn"});
  double T = c.height(60.0);
  double tol = c.tol(1e-4);
  LatticeSymbolSpec spec = LatticeSymbolSpec::comb();
  if (sym == "tn") spec = LatticeSymbolSpec::T_N(c.integer("N", 15), false);
  auto r = comb_decomp_check(c.v(), c.u(), spec, cc, T, c.lattice());
  c.rep.value("contour", r.contour);
  c.rep.value("lattice", r.lattice);
  c.rep.check("decomposition_residual", r.residual, tol);
}

inline void eq54(Context& c) {
  c.allow({"theta", "X"});
  cplx th = c.complex("theta", 2.0);
  i64 X = c.integer("X", 100000);
  double tol = c.tol(3e-5);
  auto d = sqfree_odd_dirichlet(th, X);
  auto f = f_kernel(th);
  c.rep.value("dirichlet_partial", d);
  c.rep.value("f_kernel", f);
  c.rep.check("dirichlet_vs_f", std::abs(d.value - f.value), tol);
  if (th == cplx(2.0)) {
    c.rep.value("12/pi^2", kReferenceResidue);
    c.rep.check("f(2)_vs_12/pi^2", std::abs(f.value - kReferenceResidue), 1e-10);
  }
}

inline void lem21(Context& c) {
  c.allow({"x", "xi", "h"});
  double tol = c.tol(1e-6);
  double h = c.num("h", 1e-2);
  std::vector<std::pair<double, double>> pts = {{0.5, 0.3}, {0.8, -1.2}, {1.0, 2.5}, {1.3, 0.0}, {0.2, 4.0}};
  if (c.has("x") || c.has("xi")) pts = {{c.num("x", 0.5), c.num("xi", 0.3)}};
  auto V = canonical_v(c.flat()), U = canonical_u(c.opt.flattened);
  for (auto [x, xi] : pts) {
    auto r = euler_apply_check(V, U, x, xi, h);
    auto r2 = euler_apply_check(V, U, x, xi, 2 * h);
    std::string tag = "(" + fmt_double(x) + "," + fmt_double(xi) + ")";
    c.rep.value("lhs " + tag, r.lhs);
    c.rep.value("rhs " + tag, r.rhs);
    if (r.residual > 0) c.rep.value("observed_order " + tag, std::log2(r2.residual / r.residual));
    c.rep.check("euler_residual " + tag, r.residual, tol);
  }
}

inline void eq910(Context& c) {
  c.allow({"nu"});
  auto nus = c.complex_list("nu", {2.5, cplx(1, 3)});
  double T = c.height(60.0);
  double tol = c.tol(1e-6);
  for (cplx nu : nus) {
    auto k = pairing_kernel320(c.v(), c.u(), nu);
    auto m = pairing_mellin910(c.v(), c.u(), nu, T);
    std::string tag = "nu=" + show_complex(nu);
    c.rep.value("kernel320 " + tag, k);
    c.rep.value("mellin910 " + tag, m);
    c.rep.check("reconstruction " + tag, std::abs(k.value - m.value), tol);
  }
}

inline void zeta(Context& c) {
  c.allow({});
  double tol = c.tol(1e-10);
  const std::vector<std::pair<double, double>> known = {
      {2.0, std::numbers::pi * std::numbers::pi / 6.0}, {0.0, -0.5}, {-1.0, -1.0 / 12.0}, {3.0, 1.2020569031595942854}};
  for (auto [s, want] : known) {
    auto z = zeta_complex(s);
    c.rep.value("zeta(" + fmt_double(s) + ")", z);
    c.rep.check("zeta(" + fmt_double(s) + ")", std::abs(z.value - want), tol);
  }
  cplx rho(0.5, 14.134725142);
  auto zr = zeta_complex(rho);
  c.rep.value("zeta(first zero)", zr);
  c.rep.check("|zeta(first zero)|", std::abs(zr.value), 1e-6);
  double mx = 0.0;
  for (int i = 0; i < 100; ++i) mx = std::max(mx, zeta_star_residual(cplx(-3.0 + 0.07 * i, -20.0 + 0.4 * i)));
  c.rep.check("functional_equation_max", mx, tol);
}

inline void prop94(Context& c) {
  c.allow({"nu", "mu"});
  cplx nu = c.complex("nu", 2.0), mu = c.complex("mu", -2.0);
  c.rep.parameters["flattened"] = "true";
  auto r = recursion_914_report(canonical_v(true), canonical_u(true), nu, mu);
  c.rep.value("lhs", r.lhs);
  c.rep.value("term_j=-1", r.terms[0]);
  c.rep.value("term_j=0", r.terms[1]);
  c.rep.value("term_j=1", r.terms[2]);
  c.rep.value("rhs", r.rhs);
  c.rep.value("relative_residual", r.relative_residual);
}

inline void residue_f(Context& c) {
  c.allow({});
  auto k = f_residue_at_1();
  c.rep.value("kappa_f", k);
  c.rep.value("4/pi^2", 4.0 / (std::numbers::pi * std::numbers::pi));
  c.rep.value("12/pi^2 (reference)", kReferenceResidue);
}

inline void f0(Context& c) {
  c.allow({"s", "X", "route"});
  cplx s = c.complex("s", 4.0);
  i64 X = c.integer("X", 101);
  auto route = c.word("route", "both", {"both", "series", "integral"});
  double T = c.height(200.0);
  Estimate a, b;
  if (route != "integral") c.rep.value("F0_series", a = F0_series(c.v(), c.u(), s, X, c.lattice()));
  if (route != "series") c.rep.value("F0_integral", b = F0_integral(c.v(), c.u(), s, T));
  if (route == "both" && a.value != 0.0) c.rep.value("relative_difference", std::abs(a.value - b.value) / std::abs(a.value));
}

inline void feps(Context& c) {
  c.allow({"s", "eps", "X", "c", "lambda_max", "route"});
  cplx s = c.complex("s", 4.0);
  double eps = c.num("eps", 0.5);
  i64 X = c.integer("X", 1001);
  auto route = c.word("route", "both", {"both", "series", "integral"});
  FepsGrid g;
  double cc = c.num("c", 2.0);
  g.T = c.height(150.0);
  g.lambda_max = c.num("lambda_max", 100.0);
  Estimate a, b;
  if (route != "integral") c.rep.value("Feps_series", a = Feps_series(c.v(), canonical_u(c.flat()), s, eps, X));
  if (route != "series") c.rep.value("Feps_integral", b = Feps_integral(c.v(), c.u(), s, eps, cc, g));
  if (route == "both" && a.value != 0.0) c.rep.value("relative_difference", std::abs(a.value - b.value) / std::abs(a.value));
}

inline void pairing(Context& c) {
  c.allow({"nu", "route"});
  cplx nu = c.complex("nu", 2.5);
  auto route = c.word("route", "all", {"all", "def31", "kernel320", "mellin910"});
  if (route == "all" || route == "kernel320") c.rep.value("kernel320", pairing_kernel320(c.v(), c.u(), nu));
  if (route == "all" || route == "def31") c.rep.value("def31", pairing_def31(c.v(), c.u(), nu));
  if (route == "all" || route == "mellin910")
    c.rep.value("mellin910", pairing_mellin910(c.v(), c.u(), nu, c.height(60.0)));
}

inline void phi_cmd(Context& c) {
  c.allow({"nu", "mu"});
  cplx nu = c.complex("nu", 2.5), mu = c.complex("mu", 0.0);
  c.rep.value("phi", phi(c.v(), c.u(), nu, mu));
  c.rep.value("mellin_c", mellin_c(c.u(), mu));
}

inline void g0(Context& c) {
  c.allow({"s", "eps"});
  cplx s = c.complex("s", 2.6);
  double T = c.height(60.0);
  c.rep.value("G0_closed", G0_closed(c.v(), c.u(), s));
  c.rep.value("G0_integral", G0_integral(c.v(), c.u(), s, T));
  double eps = c.num("eps", 0.0);
  if (eps > 0) c.rep.value("G_eps", G_eps(c.v(), c.u(), s, eps, T));
  c.rep.value("kappa_f", kappa_f());
  c.rep.value("12/pi^2 (reference)", kReferenceResidue);
}

inline void growth(Context& c) {
  c.allow({"Qmax", "route"});
  i64 qmax = c.integer("Qmax", 201);
  auto route = c.word("route", "arithmetic", {"arithmetic", "lattice"});
  auto Qs = squarefree_odd_upto(qmax);
  auto data = growth_data(c.v(), c.u(), Qs, route == "lattice" ? GrowthRoute::lattice : GrowthRoute::arithmetic,
                          c.lattice());
  auto g = growth_fit(data);
  c.rep.value("exponent", g.exponent);
  c.rep.value("stderr_exponent", g.stderr_exponent);
  c.rep.value("r_squared", g.r_squared);
  c.rep.value("points_used", (double)g.used);
  c.rep.value("zeros_excluded", (double)g.excluded_zero);
}

inline void table(Context& c) {
  c.allow({"method"});
  i64 R = c.R(1), Q = c.Q(3);
  auto m = c.word("method", "c71", {"c71", "dft"});
  auto t = coeff_table(R, Q, m == "c71" ? TableMethod::c71 : TableMethod::dft);
  c.rep.value("modulus", (double)t.modulus);
  c.rep.value("condition_mismatches", (double)t.condition_mismatches);
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (i64 a = 0; a < t.modulus; ++a)
    for (i64 b = 0; b < t.modulus; ++b)
      if (t.at(a, b) != 0) rows.push_back({a, b, t.at(a, b)});
  c.rep.extra = {{"R", t.R}, {"Q", t.Q}, {"N", t.N}, {"modulus", t.modulus}, {"entries", rows}};
}

}  // namespace cmd

inline const std::map<std::string, std::map<std::string, std::function<void(Context&)>>>& commands() {
  static const std::map<std::string, std::map<std::string, std::function<void(Context&)>>> table = {
      {"verify",
       {{"thm61", cmd::thm61},
        {"thm72", cmd::thm72},
        {"lem71", cmd::lem71},
        {"thm81", cmd::thm81},
        {"eq82", cmd::eq82},
        {"eq320", cmd::eq320},
        {"eq314", cmd::eq314},
        {"eq54", cmd::eq54},
        {"lem21", cmd::lem21},
        {"eq910", cmd::eq910},
        {"zeta", cmd::zeta}}},
      {"report", {{"prop94", cmd::prop94}, {"residue-f", cmd::residue_f}}},
      {"compute",
       {{"f0", cmd::f0},
        {"feps", cmd::feps},
        {"pairing", cmd::pairing},
        {"phi", cmd::phi_cmd},
        {"g0", cmd::g0},
        {"growth", cmd::growth}}},
      {"table", {{"coeffs", cmd::table}}},
  };
  return table;
}

// Exit codes: 0 all checks passed, 1 a check failed or a computation broke
// down, 2 usage or precondition error.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical checks of lattice hermitian forms, Eisenstein pairings and the F0/F_eps series"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--tol", o.tol, "tolerance override (default depends on the check)");
  app.add_option("--max-height", o.max_height, "truncation height T of vertical-line integrals");
  app.add_option("--k-cap", o.k_cap, "cap on the frequency range of lattice rows");
  app.add_option("--R", o.R, "R of N = RQ");
  app.add_option("--Q", o.Q, "Q of N = RQ");
  app.add_flag("--flattened", o.flattened, "use the flattened canonical pair");
  app.add_flag("--timing", o.timing, "include wall time in the report (breaks byte-identity)");
  app.add_option("--out", o.out, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out-file", o.out_file, "write the report here instead of stdout");
  app.add_option("--params", o.params, "key=value parameters of the subcommand")->expected(1, -1);

  std::map<std::string, std::string> what;
  for (auto& [group, subs] : commands()) {
    auto* sc = app.add_subcommand(group, group + " subcommands");
    std::vector<std::string> names;
    for (auto& [n, f] : subs) names.push_back(n);
    sc->add_option("what", what[group], "one of the " + group + " targets")->required()->check(CLI::IsMember(names));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  std::string group = app.get_subcommands().front()->get_name();
  RunReport rep;
  rep.command = group + " " + what[group];
  auto t0 = std::chrono::steady_clock::now();
  try {
    Context ctx(o, rep);
    commands().at(group).at(what[group])(ctx);
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    err << "precondition: " << e.what() << "\n";
    return 2;
  } catch (const std::length_error& e) {
    err << "precondition: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "failed: " << e.what() << "\n";
    return 1;
  }
  if (o.timing) rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (group == "table" && o.out == "csv") {
    auto t = coeff_table(std::stoll(rep.parameters["R"]), std::stoll(rep.parameters["Q"]),
                         rep.parameters["method"] == "dft" ? TableMethod::dft : TableMethod::c71);
    if (o.out_file.empty()) {
      pdarith::write_csv(t, out);
    } else {
      std::ofstream f(o.out_file);
      pdarith::write_csv(t, f);
    }
    return 0;
  }
  if (o.out_file.empty()) {
    emit_report(rep, o.out, out);
  } else {
    std::ofstream f(o.out_file);
    if (!f) {
      err << "cannot open " << o.out_file << "\n";
      return 2;
    }
    emit_report(rep, o.out, f);
  }
  return rep.pass() ? 0 : 1;
}

}  // namespace pdarith::cli
