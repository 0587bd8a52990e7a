#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

namespace pdarith {

using i64 = std::int64_t;
using u64 = std::uint64_t;

struct FactoredInt {
  i64 n = 1;
  std::vector<std::pair<i64, int>> factors;

  bool squarefree() const {
    for (auto& [p, e] : factors)
      if (e > 1) return false;
    return true;
  }
  bool odd() const { return n % 2 != 0; }
  std::vector<i64> primes() const {
    std::vector<i64> r;
    for (auto& [p, e] : factors) r.push_back(p);
    return r;
  }
};

struct ResidueClass {
  i64 modulus = 1;
  i64 value = 0;
};

inline i64 checked_mul(i64 a, i64 b) {
  i64 r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("integer overflow");
  return r;
}

inline i64 mod(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

namespace detail {

inline u64 mulmod(u64 a, u64 b, u64 m) { return (u64)((unsigned __int128)a * b % m); }

inline u64 powmod(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

inline i64 isqrt(i64 n) {
  i64 r = (i64)std::sqrt((double)n);
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace detail

// Deterministic Miller-Rabin for 64-bit inputs.
inline bool is_prime(i64 n) {
  if (n < 2) return false;
  for (i64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    u64 x = detail::powmod(a, d, n);
    if (x == 1 || x == (u64)n - 1) continue;
    bool comp = true;
    for (int r = 1; r < s; ++r) {
      x = detail::mulmod(x, x, n);
      if (x == (u64)n - 1) {
        comp = false;
        break;
      }
    }
    if (comp) return false;
  }
  return true;
}

namespace detail {

inline u64 pollard_rho(u64 n) {
  if (n % 2 == 0) return 2;
  for (u64 c = 1;; ++c) {
    u64 x = 2, y = 2, d = 1;
    auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
    while (d == 1) {
      x = f(x);
      y = f(f(y));
      d = std::gcd(x > y ? x - y : y - x, n);
    }
    if (d != n) return d;
  }
}

inline void split(u64 n, std::vector<i64>& out) {
  if (n == 1) return;
  if (is_prime((i64)n)) {
    out.push_back((i64)n);
    return;
  }
  u64 d = pollard_rho(n);
  split(d, out);
  split(n / d, out);
}

}  // namespace detail

inline FactoredInt factorize(i64 n) {
  if (n < 1) throw std::invalid_argument("factorize: n must be positive");
  FactoredInt f;
  f.n = n;
  i64 m = n;
  for (i64 p = 2; p <= 10000000 && p * p <= m; p += (p == 2 ? 1 : 2)) {
    if (m % p) continue;
    int e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    f.factors.push_back({p, e});
  }
  if (m > 1) {
    std::vector<i64> ps;
    detail::split((u64)m, ps);
    std::sort(ps.begin(), ps.end());
    for (i64 p : ps) {
      if (!f.factors.empty() && f.factors.back().first == p)
        ++f.factors.back().second;
      else
        f.factors.push_back({p, 1});
    }
  }
  return f;
}

inline bool is_squarefree(i64 n) { return factorize(n).squarefree(); }

inline int mobius(const FactoredInt& f) {
  if (!f.squarefree()) return 0;
  return (f.factors.size() % 2) ? -1 : 1;
}
inline int mobius(i64 n) { return mobius(factorize(n)); }

inline i64 a_weight(const FactoredInt& f, bool omit_two = false) {
  i64 r = 1;
  for (auto& [p, e] : f.factors) {
    if (omit_two && p == 2) continue;
    r = checked_mul(r, 1 - p);
  }
  return r;
}
inline i64 a_weight(i64 r, bool omit_two = false) { return a_weight(factorize(r), omit_two); }

inline std::vector<i64> divisors(const FactoredInt& f) {
  std::vector<i64> d{1};
  for (auto& [p, e] : f.factors) {
    std::size_t sz = d.size();
    i64 pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < sz; ++i) d.push_back(d[i] * pk);
    }
  }
  std::sort(d.begin(), d.end());
  return d;
}
inline std::vector<i64> divisors(i64 n) { return divisors(factorize(n)); }

// Ascending squarefree odd integers in [1, X].
inline std::vector<i64> squarefree_odd_upto(i64 X) {
  if (X < 1) throw std::invalid_argument("squarefree_odd_upto: X >= 1");
  std::vector<char> bad(X + 1, 0);
  for (i64 p = 3; p * p <= X; p += 2)
    for (i64 q = p * p; q <= X; q += p * p) bad[q] = 1;
  std::vector<i64> r;
  for (i64 q = 1; q <= X; q += 2)
    if (!bad[q]) r.push_back(q);
  return r;
}

inline std::complex<double> sigma_div(i64 r, std::complex<double> nu) {
  std::complex<double> s = 0.0;
  for (i64 d : divisors(r)) s += std::exp(-nu * std::log((double)d));
  return s;
}

// Inverse of a modulo m, or throws if not invertible.
inline i64 inverse_mod(i64 a, i64 m) {
  __int128 t = 0, nt = 1, r = m, nr = mod(a, m);
  while (nr != 0) {
    __int128 q = r / nr;
    auto tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  if (r != 1) throw std::invalid_argument("inverse_mod: not invertible");
  if (t < 0) t += m;
  return (i64)t;
}

inline ResidueClass crt_pair(ResidueClass r1, ResidueClass r2) {
  if (std::gcd(r1.modulus, r2.modulus) != 1) throw std::invalid_argument("crt_pair: moduli not coprime");
  i64 M = checked_mul(r1.modulus, r2.modulus);
  // x = v1 + m1 * ((v2 - v1) * m1^{-1} mod m2)
  i64 inv = inverse_mod(mod(r1.modulus, r2.modulus), r2.modulus);
  __int128 k = (__int128)mod(r2.value - r1.value, r2.modulus) * inv % r2.modulus;
  __int128 x = (__int128)mod(r1.value, r1.modulus) + (__int128)r1.modulus * k;
  return {M, (i64)(x % M)};
}

// The class n' with n' = n mod R^2 and n' = -n mod 2Q^2.
inline ResidueClass reflect_index(i64 n, i64 R, i64 Q) {
  i64 N = checked_mul(R, Q);
  auto f = factorize(N);
  if (N % 2 == 0 || !f.squarefree()) throw std::invalid_argument("reflect_index: N must be squarefree odd");
  i64 R2 = R * R, Q2 = checked_mul(2, Q * Q);
  return crt_pair({R2, mod(n, R2)}, {Q2, mod(-n, Q2)});
}

struct FindROptions {
  i64 search_cap = 10000000;
};

// R squarefree, coprime to Q, R = 1 mod 2Q^2 and RQ divisible by every odd
// prime below beta*Q; built as R1 * r with r prime in a progression.
inline i64 find_R(i64 Q, double beta, const FindROptions& opt = {}) {
  auto fq = factorize(Q);
  if (Q % 2 == 0 || !fq.squarefree()) throw std::invalid_argument("find_R: Q must be squarefree odd");
  if (!(beta > 0)) throw std::invalid_argument("find_R: beta > 0");
  i64 R1 = 1;
  double bound = beta * (double)Q;
  for (i64 p = 3; (double)p < bound; p += 2)
    if (is_prime(p) && Q % p != 0) R1 = checked_mul(R1, p);
  i64 q2 = checked_mul(2, Q * Q);
  // x = 1 mod R1 and x = R1^{-1} mod 2Q^2; then r = x mod 2 R1 Q^2.
  i64 x = crt_pair({R1, 1 % R1}, {q2, inverse_mod(R1, q2)}).value;
  i64 step = checked_mul(R1, q2);
  if (R1 == 1 && q2 == 2) return 1;  // R = 1 already satisfies everything
  i64 r = x;
  for (i64 i = 0; i < opt.search_cap; ++i, r += step) {
    if (r > 1 && is_prime(r) && Q % r != 0 && R1 % r != 0) return checked_mul(R1, r);
  }
  throw std::runtime_error("find_R: prime search cap exceeded");
}

// Independent check of the find_R post-conditions.
inline bool check_R(i64 R, i64 Q, double beta) {
  if (R < 1 || std::gcd(R, Q) != 1 || !is_squarefree(R)) return false;
  if (mod(R, 2 * Q * Q) != 1) return false;
  i64 N = checked_mul(R, Q);
  for (i64 p = 3; (double)p < beta * (double)Q; p += 2)
    if (is_prime(p) && N % p != 0) return false;
  return true;
}

}  // namespace pdarith
