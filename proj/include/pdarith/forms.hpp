#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numeric>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "arith.hpp"
#include "quad.hpp"
#include "testfn.hpp"
#include "wigner.hpp"

namespace pdarith {

enum class SymbolKind { T_N, T_inf, T_inf_over_2, DiracComb, DiracCombFull };

struct LatticeSymbolSpec {
  SymbolKind kind = SymbolKind::DiracComb;
  FactoredInt N;                // used by T_N only
  bool include_origin = false;  // false gives the "x" variant without (0,0)

  static LatticeSymbolSpec T_N(i64 n, bool origin = true) { return {SymbolKind::T_N, factorize(n), origin}; }
  static LatticeSymbolSpec T_inf() { return {SymbolKind::T_inf, {}, false}; }
  static LatticeSymbolSpec T_inf_over_2() { return {SymbolKind::T_inf_over_2, {}, false}; }
  static LatticeSymbolSpec comb() { return {SymbolKind::DiracComb, {}, false}; }
  static LatticeSymbolSpec comb_full() { return {SymbolKind::DiracCombFull, {}, true}; }
};

inline constexpr double kDefaultBeta = (1.0 + 2.0 * std::numbers::sqrt2) / 2.0;

struct FormConfig {
  FactoredInt R, Q;
  double beta = kDefaultBeta;
  double eps = 0.0;
  double tol = 1e-10;
  i64 k_cap = i64(1) << 24;
};

struct LatticeOptions {
  double tol = 1e-10;  // relative to max(1, |value|)
  i64 k_cap = i64(1) << 24;
};

namespace detail {

// b(j, .) for a fixed row j as a function of k.
struct RowCoeff {
  SymbolKind kind;
  std::vector<i64> primes;
  bool per_k_factor = false;  // j = 0 rows of T_inf and T_inf_over_2
  bool origin = false;
  std::vector<double> table;  // one period when it is small
  i64 period = 1;

  double weight_from_primes(i64 k) const {
    double w = 1.0;
    for (i64 p : primes)
      if (k % p == 0) w *= double(1 - p);
    return w;
  }

  double operator()(i64 k) const {
    if (kind == SymbolKind::DiracComb || kind == SymbolKind::DiracCombFull) return 1.0;
    if (per_k_factor) {
      if (k == 0) return 0.0;  // origin of T_inf: excluded
      return (double)a_weight(factorize(k < 0 ? -k : k), kind == SymbolKind::T_inf_over_2);
    }
    if (!table.empty()) return table[mod(k, period)];
    return weight_from_primes(k);
  }
};

inline RowCoeff row_coeff(const LatticeSymbolSpec& spec, i64 j) {
  RowCoeff r;
  r.kind = spec.kind;
  if (spec.kind == SymbolKind::DiracComb || spec.kind == SymbolKind::DiracCombFull) return r;
  i64 aj = j < 0 ? -j : j;
  if (spec.kind == SymbolKind::T_N) {
    for (auto& [p, e] : spec.N.factors)
      if (aj % p == 0) r.primes.push_back(p);  // j = 0: every prime of N
  } else if (aj == 0) {
    r.per_k_factor = true;
    return r;
  } else {
    for (auto& [p, e] : factorize(aj).factors)
      if (!(spec.kind == SymbolKind::T_inf_over_2 && p == 2)) r.primes.push_back(p);
  }
  i64 P = 1;
  for (i64 p : r.primes) {
    if (P > (i64(1) << 20) / p) {
      P = 0;
      break;
    }
    P *= p;
  }
  if (P > 0) {
    r.period = P;
    r.table.resize(P);
    for (i64 k = 0; k < P; ++k) r.table[k] = r.weight_from_primes(k);
  }
  return r;
}

inline i64 next_pow2(i64 n) {
  i64 p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace detail

// Q^{-1} sum_{j,k} b(j,k) Wig(v,u)(j/Q, k/Q). Each row is evaluated on all k
// at once by wig_row; the k-range starts at 64Q and doubles until the last
// doubling changes the sum by less than tol/4.
inline Estimate lattice_form(const Fn& v, const Fn& u, const LatticeSymbolSpec& spec, i64 Q,
                             const LatticeOptions& opt = {}) {
  if (Q < 1) throw std::invalid_argument("lattice_form: Q >= 1");
  if (v.zero() || u.zero()) return {};
  Interval X = wig_x_window(v, u);
  i64 jlo = (i64)std::ceil(Q * X.lo), jhi = (i64)std::floor(Q * X.hi);
  std::vector<i64> rows;
  for (i64 j = jlo; j <= jhi; ++j)
    if (!wig_t_interval(v, u, (double)j / Q).empty()) rows.push_back(j);
  if (rows.empty()) return {};
  std::vector<detail::RowCoeff> coeffs;
  for (i64 j : rows) coeffs.push_back(detail::row_coeff(spec, j));

  bool have_prev = false;
  cplx prev = 0.0;
  for (i64 K = 64 * Q;; K *= 2) {
    if (K > opt.k_cap) throw QuadratureError("lattice_form: k_cap exceeded before tail convergence");
    i64 M = detail::next_pow2(4 * K + 1);
    cplx S = 0.0;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      i64 j = rows[r];
      auto W = wig_row(v, u, (double)j / Q, (double)Q, (int)M);
      const auto& b = coeffs[r];
      cplx row = 0.0;
      for (i64 k = -K; k <= K; ++k) {
        if (j == 0 && k == 0 && !spec.include_origin) continue;
        double w = b(k);
        if (w != 0.0) row += w * W[(k + M) % M];
      }
      S += row;
    }
    S /= (double)Q;
    double scale = std::max(1.0, std::abs(S));
    if (have_prev && std::abs(S - prev) < opt.tol * scale / 4) return {S, std::abs(S - prev) + 1e-15 * scale};
    prev = S;
    have_prev = true;
  }
}

// Periodization of u onto Z/2N^2Z; only the nonzero entries are stored.
struct ThetaVector {
  i64 N = 1;
  i64 modulus = 2;
  std::map<i64, cplx> values;

  cplx operator()(i64 n) const {
    auto it = values.find(mod(n, modulus));
    return it == values.end() ? cplx(0.0) : it->second;
  }
};

inline ThetaVector theta_map(const Fn& u, i64 N) {
  ThetaVector t;
  t.N = N;
  t.modulus = checked_mul(2, checked_mul(N, N));
  if (u.zero()) return t;
  i64 lo = (i64)std::ceil(u.lo * N), hi = (i64)std::floor(u.hi * N);
  for (i64 n = lo; n <= hi; ++n) {
    cplx val = u((double)n / N);
    if (val != 0.0) t.values[mod(n, t.modulus)] += val;
  }
  return t;
}

enum class FNMethod { dft, euler_product };

// f_N(j, s) for T_N coefficients. The DFT is summed in floating point and must
// round to an integer.
inline i64 f_N(const FactoredInt& N, i64 j, i64 s, FNMethod method) {
  if (method == FNMethod::euler_product) {
    if (!N.squarefree()) throw std::invalid_argument("f_N: euler_product needs squarefree N");
    i64 r = 1;
    for (auto& [p, e] : N.factors) r *= (mod(s, p) == 0 ? 1 : 0) - (mod(j, p) == 0 ? 1 : 0);
    return r;
  }
  auto spec = LatticeSymbolSpec::T_N(N.n);
  auto b = detail::row_coeff(spec, mod(j, N.n));
  cplx acc = 0.0;
  for (i64 k = 0; k < N.n; ++k) {
    double ph = 2.0 * std::numbers::pi * (double)mod(k * mod(s, N.n), N.n) / (double)N.n;
    acc += b(k) * cplx(std::cos(ph), std::sin(ph));
  }
  acc /= (double)N.n;
  double rr = std::round(acc.real());
  if (std::abs(acc.real() - rr) > 1e-6 || std::abs(acc.imag()) > 1e-6)
    throw std::runtime_error("f_N: DFT did not produce an integer");
  return (i64)rr;
}

struct CoeffContext {
  FactoredInt R, Q, N;
  i64 modulus;

  CoeffContext(i64 r, i64 q) : R(factorize(r)), Q(factorize(q)), N(factorize(checked_mul(r, q))) {
    if (N.n % 2 == 0 || !N.squarefree()) throw std::invalid_argument("coefficients: N=RQ must be squarefree odd");
    modulus = checked_mul(2, checked_mul(N.n, N.n));
  }
};

// Closed form: char(m+n = 0 mod 2R) char(m-n = 0 mod 2Q) times the Mobius sum
// over R1 R2 = R, Q1 Q2 = Q.
inline i64 coeff_c71(const CoeffContext& c, i64 m, i64 n) {
  i64 R = c.R.n, Q = c.Q.n;
  m = mod(m, c.modulus);
  n = mod(n, c.modulus);
  i64 sp = m + n, sm = m - n;
  if (mod(sp, 2 * R) != 0 || mod(sm, 2 * Q) != 0) return 0;
  i64 a = sp / R, b = sm / (2 * Q);
  i64 total = 0;
  for (i64 R1 : divisors(c.R))
    for (i64 Q1 : divisors(c.Q)) {
      i64 A = R1 * Q1, B = (R / R1) * (Q / Q1);
      if (mod(a, A) == 0 && mod(b, B) == 0) total += mobius(A);
    }
  return total;
}

// Definition through f_N with the "m+n = 0 mod R" condition as written for
// general b; mismatch with the "mod 2R" condition is counted by the caller.
inline i64 coeff_dft(const CoeffContext& c, i64 m, i64 n) {
  i64 R = c.R.n, Q = c.Q.n;
  m = mod(m, c.modulus);
  n = mod(n, c.modulus);
  i64 sp = m + n, sm = m - n;
  if (mod(sp, R) != 0 || mod(sm, 2 * Q) != 0) return 0;
  if (mod(sp, 2 * R) != 0) throw std::logic_error("coeff_dft: m+n not divisible by 2R");
  return f_N(c.N, mod(sp / (2 * R), c.N.n), mod(sm / (2 * Q), c.N.n), FNMethod::dft);
}

inline bool conditions_agree(const CoeffContext& c, i64 m, i64 n) {
  i64 sp = mod(m, c.modulus) + mod(n, c.modulus), sm = mod(m, c.modulus) - mod(n, c.modulus);
  bool q = mod(sm, 2 * c.Q.n) == 0;
  return (q && mod(sp, c.R.n) == 0) == (q && mod(sp, 2 * c.R.n) == 0);
}

enum class TableMethod { c71, dft };

struct CoeffTable {
  i64 R = 1, Q = 1, N = 1;
  i64 modulus = 2;
  std::vector<std::int32_t> entries;  // row-major (m, n)
  i64 condition_mismatches = 0;

  std::int32_t at(i64 m, i64 n) const { return entries[mod(m, modulus) * modulus + mod(n, modulus)]; }
};

struct TableOptions {
  i64 max_axis = 2048;  // larger tables are served point-wise
};

inline CoeffTable coeff_table(i64 R, i64 Q, TableMethod method = TableMethod::c71, const TableOptions& opt = {}) {
  CoeffContext c(R, Q);
  if (c.modulus > opt.max_axis) throw std::length_error("coeff_table: 2N^2 exceeds the table cap");
  CoeffTable t;
  t.R = R;
  t.Q = Q;
  t.N = c.N.n;
  t.modulus = c.modulus;
  t.entries.assign(c.modulus * c.modulus, 0);
  std::map<std::pair<i64, i64>, i64> fcache;
  for (i64 m = 0; m < c.modulus; ++m)
    for (i64 n = 0; n < c.modulus; ++n) {
      if (!conditions_agree(c, m, n)) ++t.condition_mismatches;
      i64 val;
      if (method == TableMethod::c71) {
        val = coeff_c71(c, m, n);
      } else {
        i64 sp = m + n, sm = m - n;
        if (mod(sp, R) != 0 || mod(sm, 2 * Q) != 0) continue;
        auto key = std::make_pair(mod(sp / (2 * R), c.N.n), mod(sm / (2 * Q), c.N.n));
        auto it = fcache.find(key);
        if (it == fcache.end()) it = fcache.emplace(key, f_N(c.N, key.first, key.second, FNMethod::dft)).first;
        val = it->second;
      }
      t.entries[m * c.modulus + n] = (std::int32_t)val;
    }
  return t;
}

// CSV: a "R,Q,N" header with its values, then "m,n,value" rows for the
// nonzero entries.
inline void write_csv(const CoeffTable& t, std::ostream& os) {
  os << "R,Q,N\n" << t.R << ',' << t.Q << ',' << t.N << "\nm,n,value\n";
  for (i64 m = 0; m < t.modulus; ++m)
    for (i64 n = 0; n < t.modulus; ++n) {
      auto v = t.entries[m * t.modulus + n];
      if (v != 0) os << m << ',' << n << ',' << v << '\n';
    }
}

inline Estimate finite_form(const Fn& v, const Fn& u, i64 R, i64 Q) {
  CoeffContext c(R, Q);
  auto tv = theta_map(v, c.N.n), tu = theta_map(u, c.N.n);
  cplx s = 0.0;
  double mag = 0.0;
  for (auto& [m, a] : tv.values) {
    cplx row = 0.0;
    for (auto& [n, b] : tu.values) {
      i64 cf = coeff_c71(c, m, n);
      if (cf == 0) continue;
      row += (double)cf * b;
      mag += std::abs((double)cf * b * a);
    }
    s += std::conj(a) * row;
  }
  return {s, 1e-15 * mag};
}

// Support class under which the lattice forms reduce to the single x^2-y^2=4
// shell: x > 0 and 0 <= x^2 - y^2 <= 8 on supp v x supp u.
inline bool support_class_ok(const Fn& v, const Fn& u) {
  if (v.zero() || u.zero()) return true;
  if (v.lo < 0.0) return false;
  double umax2 = std::max(u.lo * u.lo, u.hi * u.hi);
  double umin2 = (u.lo <= 0.0 && u.hi >= 0.0) ? 0.0 : std::min(u.lo * u.lo, u.hi * u.hi);
  return v.lo * v.lo - umax2 >= -1e-12 && v.hi * v.hi - umin2 <= 8.0 + 1e-12;
}

namespace detail {

inline void require_support_class(const Fn& v, const Fn& u, const char* who) {
  if (!support_class_ok(v, u)) throw std::domain_error(std::string(who) + ": support-class violation");
}

inline cplx arithmetic_term(const Fn& v, const Fn& u, double R1, double Q2) {
  double x = R1 / Q2 + Q2 / R1, y = R1 / Q2 - Q2 / R1;
  cplx a = v(x);
  if (a == 0.0) return 0.0;
  return std::conj(a) * u(y);
}

}  // namespace detail

inline Estimate arithmetic_side(const Fn& v, const Fn& u, i64 R, i64 Q) {
  detail::require_support_class(v, u, "arithmetic_side");
  auto fq = factorize(Q), fr = factorize(R);
  if (!fq.squarefree() || !fr.squarefree()) throw std::invalid_argument("arithmetic_side: R, Q squarefree");
  cplx s = 0.0;
  for (i64 Q1 : divisors(fq)) {
    int mq = mobius(Q1);
    if (!mq) continue;
    cplx inner = 0.0;
    for (i64 R1 : divisors(fr)) inner += (double)mobius(R1) * detail::arithmetic_term(v, u, (double)R1, (double)(Q / Q1));
    s += (double)mq * inner;
  }
  return {s, 1e-15 * std::abs(s)};
}

// R1 over all squarefree odd integers coprime to Q, restricted to the window
// where R1/Q2 - Q2/R1 lies in supp u.
inline Estimate arithmetic_side_inf_odd(const Fn& v, const Fn& u, i64 Q) {
  detail::require_support_class(v, u, "arithmetic_side");
  auto fq = factorize(Q);
  if (!fq.squarefree()) throw std::invalid_argument("arithmetic_side: Q squarefree");
  if (v.zero() || u.zero()) return {};
  auto root = [](double y) { return 0.5 * (y + std::sqrt(y * y + 4.0)); };
  cplx s = 0.0;
  for (i64 Q1 : divisors(fq)) {
    int mq = mobius(Q1);
    if (!mq) continue;
    i64 Q2 = Q / Q1;
    i64 a = std::max<i64>(1, (i64)std::floor(Q2 * root(u.lo)) - 1);
    i64 b = (i64)std::ceil(Q2 * root(u.hi)) + 1;
    cplx inner = 0.0;
    for (i64 R1 = a; R1 <= b; ++R1) {
      if (R1 % 2 == 0 || std::gcd(R1, Q) != 1) continue;
      auto f1 = factorize(R1);
      if (!f1.squarefree()) continue;
      inner += (double)mobius(f1) * detail::arithmetic_term(v, u, (double)R1, (double)Q2);
    }
    s += (double)mq * inner;
  }
  return {s, 1e-15 * std::abs(s)};
}

// sum_{T|N} mu(T) sum_{j,k} conj(v)(Tj + k/T) u(Tj - k/T).
inline Estimate form_lemma83(const Fn& v, const Fn& u, i64 N) {
  auto fN = factorize(N);
  if (!fN.squarefree()) throw std::invalid_argument("form_lemma83: N squarefree");
  if (v.zero() || u.zero()) return {};
  cplx s = 0.0;
  double mag = 0.0;
  for (i64 T : divisors(fN)) {
    int mt = mobius(T);
    double t = (double)T;
    // x + y = 2Tj, x - y = 2k/T
    i64 j0 = (i64)std::ceil((v.lo + u.lo) / (2 * t)), j1 = (i64)std::floor((v.hi + u.hi) / (2 * t));
    i64 k0 = (i64)std::ceil((v.lo - u.hi) * t / 2), k1 = (i64)std::floor((v.hi - u.lo) * t / 2);
    cplx part = 0.0;
    for (i64 j = j0; j <= j1; ++j)
      for (i64 k = k0; k <= k1; ++k) {
        cplx a = v(t * j + k / t);
        if (a == 0.0) continue;
        cplx term = std::conj(a) * u(t * j - k / t);
        part += term;
        mag += std::abs(term);
      }
    s += (double)mt * part;
  }
  return {s, 1e-15 * mag};
}

struct Thm81Result {
  i64 max_discrepancy = 0;
  i64 checked = 0;
};

// c_{R,Q}(m,n) (closed form) against mu(Q) c_{N,1}(m, reflect(n)) (DFT
// construction); samples = 0 means exhaustive.
inline Thm81Result check_thm81(i64 R, i64 Q, i64 samples, std::uint64_t seed = 12345) {
  CoeffContext c(R, Q), c1(checked_mul(R, Q), 1);
  int mq = mobius(c.Q);
  Thm81Result res;
  auto one = [&](i64 m, i64 n) {
    i64 nr = reflect_index(n, R, Q).value;
    i64 d = coeff_c71(c, m, n) - mq * coeff_dft(c1, m, nr);
    res.max_discrepancy = std::max(res.max_discrepancy, d < 0 ? -d : d);
    ++res.checked;
  };
  if (samples <= 0) {
    for (i64 m = 0; m < c.modulus; ++m)
      for (i64 n = 0; n < c.modulus; ++n) one(m, n);
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<i64> d(0, c.modulus - 1);
    // half the samples on the support of c_{R,Q} so the check is not vacuous
    for (i64 s = 0; s < samples; ++s) {
      i64 m = d(rng), n = d(rng);
      if (s % 2 == 0) {
        // n = m + 2Qt with m + Qt = 0 mod R, so both congruences hold
        i64 t = R == 1 ? d(rng) : mod(-m * inverse_mod(Q % R, R), R) + R * (d(rng) % (c.modulus / R + 1));
        n = mod(m + 2 * Q * mod(t, c.modulus), c.modulus);
      }
      one(m, n);
    }
  }
  return res;
}

struct Eq82Result {
  cplx lattice, reflected;
  double residual;
  double residual_without_sign;
};

inline Eq82Result check_eq82(const Fn& v, const Fn& u, i64 R, i64 Q, const LatticeOptions& opt = {}) {
  if (mod(R, 2 * Q * Q) != 1) throw std::invalid_argument("check_eq82: R = 1 mod 2Q^2 required");
  i64 N = checked_mul(R, Q);
  auto fN = factorize(N);
  if (N % 2 == 0 || !fN.squarefree()) throw std::invalid_argument("check_eq82: N squarefree odd");
  double lam = 1.0 - 2.0 * (double)R * (double)R;
  Fn ut = dilated(u, lam);
  cplx L = lattice_form(v, u, LatticeSymbolSpec::T_N(N), Q, opt).value;
  cplx F = form_lemma83(v, ut, N).value;
  int mq = mobius(factorize(Q));
  return {L, (double)mq * F, std::abs(L - (double)mq * F), std::abs(L - F)};
}

}  // namespace pdarith
