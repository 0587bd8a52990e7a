#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "arith.hpp"
#include "quad.hpp"

namespace pdarith {

namespace detail {

constexpr int kBernoulliOrder = 30;

// B_{2k}/(2k)! = (-1)^{k+1} 2 zeta(2k) / (2 pi)^{2k}, k = 1..30.
inline const std::array<double, kBernoulliOrder + 1>& bernoulli_over_factorial() {
  static const auto table = [] {
    std::array<double, kBernoulliOrder + 1> t{};
    const double pi = std::numbers::pi;
    for (int k = 1; k <= kBernoulliOrder; ++k) {
      double z;
      if (k == 1)
        z = pi * pi / 6.0;
      else if (k == 2)
        z = std::pow(pi, 4) / 90.0;
      else if (k == 3)
        z = std::pow(pi, 6) / 945.0;
      else {
        z = 0.0;
        for (int n = 400; n >= 1; --n) z += std::pow((double)n, -2.0 * k);
      }
      double sign = (k % 2) ? 1.0 : -1.0;
      t[k] = sign * 2.0 * z / std::pow(2.0 * pi, 2.0 * k);
    }
    return t;
  }();
  return table;
}

using lcplx = std::complex<long double>;

inline lcplx npow(int n, lcplx s) {  // n^{-s}
  long double ln = std::log((long double)n);
  long double mag = std::exp(-s.real() * ln), ph = -s.imag() * ln;
  return {mag * std::cos(ph), mag * std::sin(ph)};
}

}  // namespace detail

// Euler-Maclaurin with N = 30 + |Im s|/pi terms and Bernoulli order 30.
// Accumulated in long double: for Re s < 0 the terms grow like n^{-Re s}
// and cancel, which costs several digits in double.
inline Estimate zeta_complex(cplx s0) {
  if (s0 == cplx(1.0, 0.0)) throw std::domain_error("zeta: pole at s=1");
  using detail::lcplx;
  lcplx s(s0.real(), s0.imag());
  double ai = std::abs(s0.imag());
  int N = 30 + (int)std::ceil(ai / std::numbers::pi);
  lcplx sum = 0.0L;
  long double mass = 0.0L;  // sum of |terms|, for the rounding bound
  for (int n = N - 1; n >= 1; --n) {
    lcplx t = detail::npow(n, s);
    sum += t;
    mass += std::abs(t);
  }
  lcplx Ns = detail::npow(N, s);  // N^{-s}
  lcplx head = Ns * (long double)N / (s - 1.0L) + 0.5L * Ns;
  sum += head;
  mass += std::abs(head);
  const auto& B = detail::bernoulli_over_factorial();
  lcplx poch = s;                       // s (s+1) ... (s+2k-2)
  lcplx Npow = Ns / (long double)N;     // N^{-s-2k+1} for k=1
  lcplx last = 0.0L;
  long double bround = 0.0L;
  for (int k = 1; k <= detail::kBernoulliOrder; ++k) {
    last = (long double)B[k] * poch * Npow;
    sum += last;
    bround += std::abs(last);  // B[k] is only double
    poch *= (s + (2.0L * k - 1.0L)) * (s + 2.0L * k);
    Npow /= (long double)N * N;
  }
  cplx out((double)sum.real(), (double)sum.imag());
  constexpr double eps = std::numeric_limits<double>::epsilon();
  double err = (double)std::abs(last) + 8.0 * (double)(std::numeric_limits<long double>::epsilon() * mass) +
               eps * ((double)bround + std::abs(out));
  if (ai > 1e4) err = std::max(err, 1e-8);  // outside the documented envelope
  return {out, err};
}

namespace detail {

inline cplx lanczos_gamma(cplx z) {
  static const double g = 7.0;
  static const double c[9] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                              771.32342877765313,   -176.61502916214059,   12.507343278686905,
                              -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  z -= 1.0;
  cplx x = c[0];
  for (int i = 1; i < 9; ++i) x += c[i] / (z + (double)i);
  cplx t = z + g + 0.5;
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

}  // namespace detail

inline Estimate gamma_complex(cplx s) {
  if (s.imag() == 0.0 && s.real() <= 0.0 && s.real() == std::floor(s.real()))
    throw std::domain_error("gamma: pole");
  cplx v;
  if (s.real() < 0.5)
    v = std::numbers::pi / (std::sin(std::numbers::pi * s) * detail::lanczos_gamma(1.0 - s));
  else
    v = detail::lanczos_gamma(s);
  return {v, 1e-13 * std::abs(v)};
}

inline cplx zeta_star(cplx s) {
  return std::exp(-0.5 * s * std::log(std::numbers::pi)) * gamma_complex(0.5 * s).value *
         zeta_complex(s).value;
}

inline double zeta_star_residual(cplx s) {
  if (s == cplx(0.5, 0.0)) return 0.0;
  return std::abs(zeta_star(s) - zeta_star(1.0 - s));
}

struct ZetaNInverse {
  Estimate product;
  cplx mobius_sum;
};

// 1/zeta_N(s) = prod_{p|N} (1 - p^{-s}) = sum_{T|N} mu(T) T^{-s}.
inline ZetaNInverse zeta_N_inverse_both(cplx s, const FactoredInt& N) {
  cplx prod = 1.0;
  for (auto& [p, e] : N.factors) prod *= 1.0 - std::exp(-s * std::log((double)p));
  cplx sum = 0.0;
  for (i64 T : divisors(N)) {
    int m = mobius(T);
    if (m) sum += (double)m * std::exp(-s * std::log((double)T));
  }
  return {{prod, 1e-15 * std::abs(prod)}, sum};
}

inline Estimate zeta_N_inverse(cplx s, const FactoredInt& N) { return zeta_N_inverse_both(s, N).product; }

// f(theta) = (1 + 2^{-theta})^{-1} zeta(theta) / zeta(2 theta).
inline Estimate f_kernel(cplx theta) {
  auto z1 = zeta_complex(theta);
  auto z2 = zeta_complex(2.0 * theta);
  cplx pre = 1.0 / (1.0 + std::exp(-theta * std::numbers::ln2));
  cplx v = pre * z1.value / z2.value;
  double err = std::abs(pre) * (z1.err / std::abs(z2.value) + std::abs(z1.value) * z2.err / std::norm(z2.value));
  return {v, err};
}

// lim_{theta -> 1} (theta - 1) f(theta), by Neville extrapolation in h.
inline Estimate f_residue_at_1() {
  const int K = 8;
  std::array<double, K> h{};
  std::array<cplx, K> T{};
  for (int i = 0; i < K; ++i) {
    h[i] = 0.2 / std::pow(2.0, i);
    T[i] = h[i] * f_kernel(1.0 + h[i]).value;
  }
  cplx prev = T[0];
  double diff = 0.0;
  for (int m = 1; m < K; ++m) {
    for (int i = K - 1; i >= m; --i) T[i] = (h[i - m] * T[i] - h[i] * T[i - 1]) / (h[i - m] - h[i]);
    diff = std::abs(T[K - 1] - prev);
    prev = T[K - 1];
  }
  return {T[K - 1], diff + 1e-13};
}

// Partial sum over squarefree odd Q <= X of Q^{-theta}, tail bound in err.
inline Estimate sqfree_odd_dirichlet(cplx theta, i64 X) {
  double sig = theta.real();
  if (sig <= 1.0) throw std::domain_error("sqfree_odd_dirichlet: Re theta > 1 required");
  cplx s = 0.0;
  auto qs = squarefree_odd_upto(X);
  for (auto it = qs.rbegin(); it != qs.rend(); ++it) s += std::exp(-theta * std::log((double)*it));
  double tail = std::pow((double)X, 1.0 - sig) / (sig - 1.0);
  return {s, tail};
}

}  // namespace pdarith
