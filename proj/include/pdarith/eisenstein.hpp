#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "forms.hpp"
#include "quad.hpp"
#include "testfn.hpp"
#include "wigner.hpp"
#include "zeta.hpp"

namespace pdarith {

enum class PairingRoute { def31, kernel320, mellin910 };

struct PairingResult {
  cplx nu;
  Estimate value;
  PairingRoute route;
};

inline PanelRule fine_rule() {
  PanelRule r;
  r.rel_tol = 1e-12;
  r.abs_tol = 1e-18;
  return r;
}

// int_0^inf conj(v)(t + 1/t) t^{nu-1} u(t - 1/t) dt, in s = log t.
inline Estimate pairing_kernel320(const Fn& v, const Fn& u, cplx nu, const PanelRule& rule = fine_rule()) {
  detail::require_support_class(v, u, "pairing_kernel320");
  if (v.zero() || u.zero() || v.hi <= 2.0) return {};
  double S = std::acosh(v.hi / 2.0);
  double a = std::max(-S, std::asinh(u.lo / 2.0)), b = std::min(S, std::asinh(u.hi / 2.0));
  if (!(b > a)) return {};
  auto f = [&](double s) {
    cplx x = v(2.0 * std::cosh(s));
    if (x == 0.0) return x;
    return std::exp(nu * s) * std::conj(x) * u(2.0 * std::sinh(s));
  };
  PanelRule r = rule;
  r.init_panels = std::max(r.init_panels, (int)std::ceil(std::abs(nu.imag()) * (b - a) / 8.0));
  return integrate_compact(f, a, b, r);
}

// Cauchy mean-value self-test: value at nu against the mean on a circle.
inline double kernel320_mean_value_residual(const Fn& v, const Fn& u, cplx nu, double radius = 0.1, int n = 64) {
  cplx c = pairing_kernel320(v, u, nu).value;
  cplx mean = 0.0;
  for (int i = 0; i < n; ++i) {
    double th = 2.0 * std::numbers::pi * i / n;
    mean += pairing_kernel320(v, u, nu + radius * cplx(std::cos(th), std::sin(th))).value;
  }
  return std::abs(mean / (double)n - c);
}

struct Def31Options {
  int eta_panels = 256;
  double xi_max = 256.0;
};

namespace detail {

inline Interval square_range(double lo, double hi) {
  if (lo <= 0.0 && hi >= 0.0) return {0.0, std::max(lo * lo, hi * hi)};
  return {std::min(lo * lo, hi * hi), std::max(lo * lo, hi * hi)};
}

// hhat_sigma(eta) = int_0^inf t^{nu-1} conj(v)(sigma t + eta/t) u(sigma t - eta/t) dt
inline cplx hhat(const Fn& v, const Fn& u, cplx nu, int sigma, double eta, const PanelRule& rule) {
  // x + y = 2 sigma t
  double a = 0.5 * (v.lo + u.lo), b = 0.5 * (v.hi + u.hi);
  double t0 = sigma > 0 ? a : -b, t1 = sigma > 0 ? b : -a;
  t0 = std::max(t0, 0.0);
  if (!(t1 > t0)) return 0.0;
  auto f = [&](double t) {
    cplx x = v(sigma * t + eta / t);
    if (x == 0.0) return x;
    cplx y = u(sigma * t - eta / t);
    if (y == 0.0) return y;
    return std::exp((nu - 1.0) * std::log(t)) * std::conj(x) * y;
  };
  return integrate_compact(f, t0, t1, rule).value;
}

// int_R |s|^nu Wig(v,u)(0, s) ds. Wig(v,u)(0, .) is the Fourier transform of
// h(t) = conj(v)(t) u(-t), and |s|^nu transforms to
// -2 Gamma(nu+1) sin(pi nu/2) (2 pi |t|)^{-nu-1}, so for 1 < Re nu < 2 this is a
// finite-part integral of the even part of h. Elsewhere the s-integral is
// done directly, which is slow.
inline Estimate zero_row(const Fn& v, const Fn& u, cplx nu, const PanelRule& rule) {
  Interval I = wig_t_interval(v, u, 0.0);
  if (nu.real() < 2.0 - 1e-3) {
    auto he = [&](double t) {
      auto h = [&](double x) {
        cplx a = v(x);
        return a == 0.0 ? a : std::conj(a) * u(-x);
      };
      return 0.5 * (h(t) + h(-t));
    };
    double A = std::max(std::abs(I.lo), std::abs(I.hi));
    const double d = 1e-3;
    cplx h0 = he(0.0);
    // h_e(t) = h0 + h2 t^2 + O(t^4); Richardson from t = d, 2d
    cplx h2 = (16.0 * (he(d) - h0) - (he(2 * d) - h0)) / (12.0 * d * d);
    cplx fp = -h0 * std::exp(-nu * std::log(A)) / nu;
    if (A > d) {
      auto f = [&](double x) {
        double t = std::exp(x);
        return (he(t) - h0) * std::exp(-nu * x);
      };
      Estimate in = integrate_compact(f, std::log(d), std::log(A), rule);
      fp += in.value + h2 * std::exp((2.0 - nu) * std::log(d)) / (2.0 - nu);
      // dropped: the t^4 part on [0, d]
      double drop = std::abs(h2) * std::pow(d, 4.0 - nu.real()) + in.err;
      cplx K = -2.0 * gamma_complex(nu + 1.0).value * std::sin(std::numbers::pi * nu / 2.0) /
               std::exp((nu + 1.0) * std::log(2.0 * std::numbers::pi));
      return {2.0 * K * fp, 2.0 * std::abs(K) * drop};
    }
  }
  auto f = [&](double s) {
    double as = std::abs(s);
    return as == 0.0 ? cplx(0.0) : std::exp(nu * std::log(as)) * wig(v, u, 0.0, s, rule).value;
  };
  // the inner Wigner values carry absolute noise, so the outer rule needs an
  // absolute floor
  PanelRule outer = rule;
  outer.abs_tol = 1e-15;
  Estimate B;
  for (double a = 0.0; a < 16.0; a += 2.0)
    B += integrate_compact(f, a, a + 2.0, outer) + integrate_compact(f, -a - 2.0, -a, outer);
  for (double S = 16.0; S < 4096.0; S *= 2) {
    Estimate add;
    for (double a = S; a < 2 * S; a += 2.0)
      add += integrate_compact(f, a, a + 2.0, outer) + integrate_compact(f, -a - 2.0, -a, outer);
    B += add;
    if (std::abs(add.value) < 1e-13 * std::max(1.0, std::abs(B.value))) break;
  }
  return B;
}

}  // namespace detail

// sum over (j,k) != 0 of int_0^inf t^nu Wig(v,u)(jt, kt) dt. Row j sums
// |j|^{-1-nu} G(k/|j|) over k, with G the eta-Fourier transform of hhat; rows
// beyond J only see the zeroth mode hhat(0), summed exactly with zeta(nu).
inline Estimate pairing_def31(const Fn& v, const Fn& u, cplx nu, const Def31Options& opt = {}) {
  if (nu.real() <= 1.0) throw std::domain_error("pairing_def31: Re nu > 1 required");
  if (v.zero() || u.zero()) return {};
  PanelRule rule = fine_rule();
  Interval X2 = detail::square_range(v.lo, v.hi), Y2 = detail::square_range(u.lo, u.hi);
  double dlo = (X2.lo - Y2.hi) / 4.0, dhi = (X2.hi - Y2.lo) / 4.0;
  int J = (int)std::floor(std::max(std::abs(dlo), std::abs(dhi))) + 1;

  cplx total = 0.0;
  double err = 0.0;
  for (int sigma : {1, -1}) {
    double e0 = sigma > 0 ? dlo : -dhi, e1 = sigma > 0 ? dhi : -dlo;
    FixedGrid g = fixed_grid(e0, e1, opt.eta_panels, 32);
    std::vector<cplx> h(g.x.size());
    for (std::size_t i = 0; i < g.x.size(); ++i) h[i] = g.w[i] * detail::hhat(v, u, nu, sigma, g.x[i], rule);
    auto G = [&](double xi) {
      cplx s = 0.0;
      for (std::size_t i = 0; i < g.x.size(); ++i) {
        double ph = 2.0 * std::numbers::pi * xi * g.x[i];
        s += h[i] * cplx(std::cos(ph), std::sin(ph));
      }
      return s;
    };
    for (int j = 1; j <= J; ++j) {
      int kmax = (int)std::ceil(opt.xi_max * j);
      cplx row = G(0.0);
      double edge = 0.0;
      for (int k = 1; k <= kmax; ++k) {
        cplx gk = G((double)k / j) + G(-(double)k / j);
        row += gk;
        if (k > 0.9 * kmax) edge += std::abs(gk);
      }
      cplx wj = std::exp((-1.0 - nu) * std::log((double)j));
      total += wj * row;
      err += std::abs(wj) * edge;
    }
    cplx h0 = detail::hhat(v, u, nu, sigma, 0.0, rule);
    if (h0 != 0.0) {
      cplx partial = 0.0;
      for (int j = 1; j <= J; ++j) partial += std::exp(-nu * std::log((double)j));
      auto z = zeta_complex(nu);
      total += h0 * (z.value - partial);
      err += std::abs(h0) * z.err;
    }
  }
  // j = 0 row: zeta(1+nu) int_R |s|^nu Wig(v,u)(0, s) ds
  if (!wig_t_interval(v, u, 0.0).empty()) {
    Estimate B = detail::zero_row(v, u, nu, rule);
    auto z = zeta_complex(1.0 + nu);
    total += z.value * B.value;
    err += std::abs(z.value) * B.err + std::abs(B.value) * z.err;
  }
  return {total, err + 1e-13 * std::abs(total)};
}

// Phi(v,u; nu, mu) = c(mu) int_0^inf t^{nu-1} conj(v)(t+1/t) |t-1/t|^{-mu-1/2} dt.
// Per side w = log(2 sinh|s|); the constant limit of the integrand at s = 0 is
// integrated in closed form.
inline Estimate phi_kernel(const Fn& v, cplx nu, cplx mu, const PanelRule& rule = fine_rule()) {
  if (mu.real() >= 0.5) throw std::domain_error("phi: Re mu < 1/2 required");
  if (v.zero() || v.hi <= 2.0) return {};
  cplx a = mu + 0.5;
  double S = std::acosh(v.hi / 2.0);
  double W = std::log(2.0 * std::sinh(S));
  double wmin = std::log(1e-17) / (2.0 - a.real());
  cplx ginf = std::conj(v(2.0)) / 2.0;
  Estimate total;
  for (int sigma : {1, -1}) {
    auto f = [&](double w) {
      double ew = std::exp(w);
      double s = sigma * std::asinh(ew / 2.0);
      double ch = 2.0 * std::cosh(s);
      cplx g = std::exp(nu * s) * std::conj(v(ch)) / ch;
      return (g - ginf) * std::exp((1.0 - a) * w);
    };
    PanelRule r = rule;
    r.init_panels = std::max(r.init_panels, (int)std::ceil(std::abs(a.imag()) * (W - wmin) / 16.0));
    total += integrate_compact(f, wmin, W, r);
    total += Estimate(ginf * std::exp((1.0 - a) * W) / (1.0 - a));
  }
  return total;
}

inline Estimate phi(const Fn& v, const Fn& u, cplx nu, cplx mu, const PanelRule& rule = fine_rule()) {
  if (mu.real() >= 0.5) throw std::domain_error("phi: Re mu < 1/2 required");
  if (u.zero() || v.zero()) return {};
  Estimate c = mellin_c(u, mu, rule);
  Estimate J = phi_kernel(v, nu, mu, rule);
  return {c.value * J.value, std::abs(c.value) * J.err + c.err * std::abs(J.value)};
}

// (1/i) int_{Re mu = 0} Phi d mu, truncated at |Im mu| <= T.
inline Estimate pairing_mellin910(const Fn& v, const Fn& u, cplx nu, double T, const VerticalOptions& opt = {}) {
  auto f = [&](cplx mu) { return phi(v, u, nu, mu, opt.rule).value; };
  return integrate_vertical(f, 0.0, T, opt);
}

struct Recursion914Report {
  cplx nu, mu;
  cplx lhs;
  std::array<cplx, 3> terms;  // j = -1, 0, 1
  cplx rhs;
  double relative_residual;
};

inline Recursion914Report recursion_914_report(const TestFunction& v, const TestFunction& u, cplx nu, cplx mu) {
  if (mu.real() >= -1.5) throw std::domain_error("recursion_914_report: Re mu < -3/2 required");
  Fn fv = fn(v), fu = fn(u);
  Recursion914Report r{nu, mu, 0.0, {}, 0.0, 0.0};
  r.lhs = (0.5 + nu * nu) * phi(fv, fu, nu, mu).value;
  cplx mb = std::conj(mu);
  Fn Dm1 = fn(v, 2);
  Fn D0 = scaled(sum(times_power(fn(v, 1), 1), scaled(fv, 0.5)), -2.0 * mu);
  Fn D1 = scaled(times_power(fv, 2), (0.5 + mb) * (1.5 + mb));
  std::array<Fn, 3> Dv = {Dm1, D0, D1};
  for (int j = -1; j <= 1; ++j) {
    Fn uj = times_power(fu, -2 * j);
    r.terms[j + 1] = phi(Dv[j + 1], uj, nu, mu + 2.0 * j).value;
    r.rhs += r.terms[j + 1];
  }
  double scale = std::max(std::abs(r.lhs), std::abs(r.rhs));
  r.relative_residual = scale == 0.0 ? 0.0 : std::abs(r.lhs - r.rhs) / scale;
  return r;
}

struct CombDecomp {
  Estimate contour;  // (1/i) int weight(nu) <E_{-nu}, Wig> d nu
  Estimate lattice;  // 2 pi sum coeff Wig(j,k)
  double residual;
};

// The symbol is the comb (weight 1) or T_N without origin (weight 1/zeta_N).
inline CombDecomp comb_decomp_check(const Fn& v, const Fn& u, const LatticeSymbolSpec& spec, double c, double T,
                                    const LatticeOptions& lopt = {}) {
  if (c <= 1.0) throw std::domain_error("comb_decomp_check: c > 1 required");
  detail::require_support_class(v, u, "comb_decomp_check");
  if (spec.include_origin) throw std::invalid_argument("comb_decomp_check: origin must be excluded");
  bool tn = spec.kind == SymbolKind::T_N;
  if (!tn && spec.kind != SymbolKind::DiracComb) throw std::invalid_argument("comb_decomp_check: comb or T_N only");
  auto f = [&](cplx nu) {
    cplx k = pairing_kernel320(v, u, nu).value;
    return tn ? zeta_N_inverse(nu, spec.N).value * k : k;
  };
  VerticalOptions vo;
  vo.rule.rel_tol = 1e-11;
  vo.block = 2.0;
  Estimate L = integrate_vertical(f, c, T, vo);
  Estimate R = 2.0 * std::numbers::pi * lattice_form(v, u, spec, 1, lopt);
  return {L, R, std::abs(L.value - R.value)};
}

// Richardson limit of (nu - 1) pairing_def31(nu) as nu -> 1+, against (v|u).
struct ResidueCheck {
  Estimate limit;
  cplx inner_product;
  double residual;
};

inline ResidueCheck residue_check_32(const Fn& v, const Fn& u) {
  constexpr int K = 6;
  std::array<double, K> h{};
  std::array<cplx, K> T{};
  for (int i = 0; i < K; ++i) {
    h[i] = 0.2 / std::pow(2.0, i);
    T[i] = h[i] * pairing_def31(v, u, 1.0 + h[i]).value;
  }
  cplx prev = T[K - 1];
  double diff = 0.0;
  for (int m = 1; m < K; ++m) {
    for (int i = K - 1; i >= m; --i) T[i] = (h[i - m] * T[i] - h[i] * T[i - 1]) / (h[i - m] - h[i]);
    diff = std::abs(T[K - 1] - prev);
    prev = T[K - 1];
  }
  double lo = std::max(v.lo, u.lo), hi = std::min(v.hi, u.hi);
  cplx ip = 0.0;
  if (hi > lo) ip = integrate_compact([&](double x) { return std::conj(v(x)) * u(x); }, lo, hi, fine_rule()).value;
  return {{T[K - 1], diff}, ip, std::abs(T[K - 1] - ip)};
}

}  // namespace pdarith
