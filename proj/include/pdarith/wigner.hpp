#pragma once

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <numbers>
#include <vector>

#include "quad.hpp"
#include "testfn.hpp"

namespace pdarith {

struct Interval {
  double lo, hi;
  bool empty() const { return !(hi > lo); }
};

// t-range where conj(v)(x + t) u(x - t) can be nonzero.
inline Interval wig_t_interval(const Fn& v, const Fn& u, double x) {
  return {std::max(v.lo - x, x - u.hi), std::min(v.hi - x, x - u.lo)};
}

inline Interval wig_x_window(const Fn& v, const Fn& u) { return {0.5 * (v.lo + u.lo), 0.5 * (v.hi + u.hi)}; }

inline Estimate wig(const Fn& v, const Fn& u, double x, double xi, const PanelRule& rule = {}) {
  Interval I = wig_t_interval(v, u, x);
  if (I.empty()) return {};
  auto h = [&](double t) {
    cplx a = v(x + t);
    if (a == 0.0) return a;
    cplx b = u(x - t);
    if (b == 0.0) return b;
    double ph = 2.0 * std::numbers::pi * xi * t;
    return std::conj(a) * b * cplx(std::cos(ph), std::sin(ph));
  };
  PanelRule r = rule;
  r.init_panels = std::max(r.init_panels, (int)std::ceil(std::abs(xi) * (I.hi - I.lo) / 4.0));
  return integrate_compact(h, I.lo, I.hi, r);
}

inline Estimate wig(const TestFunction& v, const TestFunction& u, double x, double xi, const PanelRule& rule = {}) {
  return wig(fn(v), fn(u), x, xi, rule);
}

namespace detail {

struct FftwBuffer {
  fftw_complex* p = nullptr;
  explicit FftwBuffer(int n) : p(fftw_alloc_complex(n)) {}
  ~FftwBuffer() { fftw_free(p); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
};

// Planning is not thread-safe in FFTW; execution with new-array execute is.
inline fftw_plan backward_plan(int M) {
  static std::mutex mu;
  static std::map<int, fftw_plan> plans;
  std::lock_guard<std::mutex> lock(mu);
  auto it = plans.find(M);
  if (it != plans.end()) return it->second;
  FftwBuffer a(M), b(M);
  fftw_plan p = fftw_plan_dft_1d(M, a.p, b.p, FFTW_BACKWARD, FFTW_ESTIMATE);
  plans[M] = p;
  return p;
}

}  // namespace detail

// Wig(v,u)(x, k/P) for k = 0..M-1 (negative k at M+k), by the trapezoid rule
// on t-samples folded mod P. Error is the alias Wig(x, (k +- M)/P).
inline std::vector<cplx> wig_row(const Fn& v, const Fn& u, double x, double P, int M) {
  std::vector<cplx> out(M, 0.0);
  Interval I = wig_t_interval(v, u, x);
  if (I.empty()) return out;
  double dt = P / M;
  detail::FftwBuffer in(M), res(M);
  for (int m = 0; m < M; ++m) in.p[m][0] = in.p[m][1] = 0.0;
  long m0 = (long)std::ceil(I.lo / dt), m1 = (long)std::floor(I.hi / dt);
  for (long m = m0; m <= m1; ++m) {
    double t = m * dt;
    cplx a = v(x + t);
    if (a == 0.0) continue;
    cplx h = std::conj(a) * u(x - t);
    long idx = ((m % M) + M) % M;
    in.p[idx][0] += h.real();
    in.p[idx][1] += h.imag();
  }
  fftw_execute_dft(detail::backward_plan(M), in.p, res.p);
  for (int k = 0; k < M; ++k) out[k] = dt * cplx(res.p[k][0], res.p[k][1]);
  return out;
}

// int Wig(v,u)(x, xi) d xi against conj(v)(x) u(x). The xi-range doubles until
// the last doubling changes the result by less than tol/4.
struct MarginalResult {
  Estimate integral;
  cplx direct;
  double residual;
};

inline MarginalResult wig_marginal_check(const Fn& v, const Fn& u, double x, double tol = 1e-8) {
  cplx direct = std::conj(v(x)) * u(x);
  Interval I = wig_t_interval(v, u, x);
  if (I.empty()) return {{}, direct, std::abs(direct)};
  PanelRule rule;
  rule.rel_tol = 1e-12;
  auto W = [&](double xi) { return wig(v, u, x, xi, rule).value; };
  double X = 16.0;
  Estimate total;
  for (double a = -X; a < X; a += 4.0) total += integrate_compact(W, a, a + 4.0, rule);
  for (int it = 0; it < 10; ++it) {
    Estimate add;
    for (double a = X; a < 2 * X; a += 4.0) {
      add += integrate_compact(W, a, a + 4.0, rule);
      add += integrate_compact(W, -a - 4.0, -a, rule);
    }
    total += add;
    X *= 2;
    if (std::abs(add.value) < tol / 4) {
      total.err += std::abs(add.value);
      break;
    }
  }
  return {total, direct, std::abs(total.value - direct)};
}

// (1 + x d/dx + xi d/dxi) Wig(v,u) against Wig(v', x u) + Wig(x v, u').
struct EulerCheck {
  cplx lhs, rhs;
  double residual;
};

inline EulerCheck euler_apply_check(const TestFunction& v, const TestFunction& u, double x, double xi,
                                    double h = 1e-2) {
  PanelRule rule;
  rule.rel_tol = 1e-14;
  rule.abs_tol = 1e-17;
  Fn fv = fn(v), fu = fn(u);
  auto W = [&](double a, double b) { return wig(fv, fu, a, b, rule).value; };
  auto d4 = [&](auto g) { return (-g(2 * h) + 8.0 * g(h) - 8.0 * g(-h) + g(-2 * h)) / (12.0 * h); };
  cplx dx = d4([&](double d) { return W(x + d, xi); });
  cplx dxi = d4([&](double d) { return W(x, xi + d); });
  cplx lhs = W(x, xi) + x * dx + xi * dxi;
  cplx rhs = wig(fn(v, 1), times_power(fu, 1), x, xi, rule).value + wig(times_power(fv, 1), fn(u, 1), x, xi, rule).value;
  return {lhs, rhs, std::abs(lhs - rhs)};
}

// Symplectic Fourier transform of Wig(v,u), evaluated as a truncated 2D
// integral, against Wig(v, u(-.)) at (-x, -xi). The literal comparison at
// (x, xi) is reported alongside.
struct SympPoint {
  double x, xi;
  cplx transform, reflected, literal;
};
struct SympReport {
  std::vector<SympPoint> points;
  double max_residual = 0.0;
  double max_literal_residual = 0.0;
};

inline SympReport symp_fourier_check(const Fn& v, const Fn& u, const std::vector<std::pair<double, double>>& pts,
                                     double eta_max = 24.0) {
  SympReport rep;
  Fn uc = dilated(u, -1.0);
  Interval X = wig_x_window(v, u);
  if (X.empty()) {
    for (auto [x, xi] : pts) rep.points.push_back({x, xi, 0.0, 0.0, 0.0});
    return rep;
  }
  PanelRule rule;
  rule.rel_tol = 1e-9;
  // y nodes over the x-window, eta on a uniform grid (trapezoid; W decays)
  FixedGrid gy = fixed_grid(X.lo, X.hi, 8, 16);
  double deta = 1.0 / 16.0;
  int ne = (int)std::ceil(eta_max / deta);
  std::vector<std::vector<cplx>> Wt(gy.x.size(), std::vector<cplx>(2 * ne + 1));
  for (std::size_t i = 0; i < gy.x.size(); ++i)
    for (int k = -ne; k <= ne; ++k) Wt[i][k + ne] = wig(v, u, gy.x[i], k * deta, rule).value;
  for (auto [x, xi] : pts) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < gy.x.size(); ++i) {
      cplx row = 0.0;
      for (int k = -ne; k <= ne; ++k) {
        double ph = 2.0 * std::numbers::pi * (x * k * deta - gy.x[i] * xi);
        row += Wt[i][k + ne] * cplx(std::cos(ph), std::sin(ph));
      }
      s += gy.w[i] * deta * row;
    }
    cplx refl = wig(v, uc, -x, -xi, rule).value;
    cplx lit = wig(v, uc, x, xi, rule).value;
    rep.points.push_back({x, xi, s, refl, lit});
    rep.max_residual = std::max(rep.max_residual, std::abs(s - refl));
    rep.max_literal_residual = std::max(rep.max_literal_residual, std::abs(s - lit));
  }
  return rep;
}

}  // namespace pdarith
