#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "quad.hpp"

namespace pdarith {

enum class Family { plain_bump, flattened_bump };
enum class Parity { even, none };

// exp(-1/((z-a)(b-z))) on (a, b), optionally times exp(-1/(z-c)^2), evaluated
// at z = scale * x + shift and multiplied by amp.
struct TestFunction {
  Family family = Family::plain_bump;
  Parity parity = Parity::none;
  double a = -1.0, b = 1.0;
  std::optional<double> flat;  // in z coordinates
  double scale = 1.0, shift = 0.0, amp = 1.0;

  double lo() const { return scale > 0 ? (a - shift) / scale : (b - shift) / scale; }
  double hi() const { return scale > 0 ? (b - shift) / scale : (a - shift) / scale; }
  std::vector<double> flat_points() const {
    if (!flat) return {};
    return {(*flat - shift) / scale};
  }
  double operator()(double x) const;
};

namespace detail {

// Value and first two z-derivatives of the bump profile.
inline std::array<double, 3> bump_jet(const TestFunction& f, double z, int k) {
  if (!(z > f.a && z < f.b)) return {0.0, 0.0, 0.0};
  if (f.flat && z == *f.flat) return {0.0, 0.0, 0.0};
  double p = (z - f.a) * (f.b - z);
  double dp = f.a + f.b - 2.0 * z;
  double g = -1.0 / p, g1 = dp / (p * p), g2 = -2.0 / (p * p) - 2.0 * dp * dp / (p * p * p);
  if (f.flat) {
    double d = z - *f.flat;
    double d2 = d * d;
    g += -1.0 / d2;
    if (k >= 1) g1 += 2.0 / (d2 * d);
    if (k >= 2) g2 += -6.0 / (d2 * d2);
  }
  if (g < -745.0) return {0.0, 0.0, 0.0};
  double e = std::exp(g);
  return {e, e * g1, e * (g2 + g1 * g1)};
}

}  // namespace detail

inline double eval_deriv(const TestFunction& f, double x, int k) {
  if (k < 0 || k > 2) throw std::invalid_argument("eval_deriv: order must be 0, 1 or 2");
  double z = f.scale * x + f.shift;
  auto j = detail::bump_jet(f, z, k);
  return f.amp * std::pow(f.scale, k) * j[k];
}

inline double TestFunction::operator()(double x) const { return eval_deriv(*this, x, 0); }

inline TestFunction canonical_v(bool flattened = false) {
  TestFunction f;
  f.a = 1.0;
  f.b = 2.0 * std::numbers::sqrt2;
  if (flattened) {
    f.family = Family::flattened_bump;
    f.flat = 2.0;
  }
  return f;
}

inline TestFunction canonical_u(bool flattened = false) {
  TestFunction f;
  f.parity = Parity::even;
  if (flattened) {
    f.family = Family::flattened_bump;
    f.flat = 0.0;
  }
  return f;
}

inline TestFunction rescale_uQ(const TestFunction& u, double Q, double eps) {
  if (Q < 1 || eps < 0) throw std::invalid_argument("rescale_uQ: Q >= 1, eps >= 0");
  TestFunction r = u;
  double l = std::pow(Q, eps);
  r.scale *= l;
  r.amp *= std::sqrt(l);
  return r;
}

// Type-erased compactly supported function, so algorithms can take products,
// derivatives and rescalings of the canonical families.
struct Fn {
  std::function<cplx(double)> f;
  double lo = 0.0, hi = 0.0;
  std::vector<double> flat;

  cplx operator()(double x) const { return (x < lo || x > hi) ? cplx(0.0) : f(x); }
  bool zero() const { return !(hi > lo); }
};

inline Fn fn(const TestFunction& t, int k = 0) {
  return {[t, k](double x) { return cplx(eval_deriv(t, x, k)); }, t.lo(), t.hi(), t.flat_points()};
}

inline Fn zero_fn() { return {[](double) { return cplx(0.0); }, 0.0, 0.0, {}}; }

inline Fn scaled(const Fn& g, cplx alpha) {
  return {[g, alpha](double x) { return alpha * g(x); }, g.lo, g.hi, g.flat};
}

inline Fn times_power(const Fn& g, int p) {
  return {[g, p](double x) {
            cplx v = g(x);
            return v == 0.0 ? v : v * std::pow(x, p);
          },
          g.lo, g.hi, g.flat};
}

// x -> g(lambda x).
inline Fn dilated(const Fn& g, double lambda) {
  if (lambda == 0.0) throw std::invalid_argument("dilated: lambda != 0");
  double l = g.lo / lambda, h = g.hi / lambda;
  std::vector<double> fl;
  for (double p : g.flat) fl.push_back(p / lambda);
  return {[g, lambda](double x) { return g(lambda * x); }, std::min(l, h), std::max(l, h), fl};
}

inline Fn shifted(const Fn& g, double d) {
  std::vector<double> fl;
  for (double p : g.flat) fl.push_back(p + d);
  return {[g, d](double x) { return g(x - d); }, g.lo + d, g.hi + d, fl};
}

inline Fn sum(const Fn& g, const Fn& h) {
  if (g.zero()) return h;
  if (h.zero()) return g;
  return {[g, h](double x) { return g(x) + h(x); }, std::min(g.lo, h.lo), std::max(g.hi, h.hi), {}};
}

inline bool flat_at(const Fn& g, double x) {
  for (double p : g.flat)
    if (p == x) return true;
  return false;
}

struct HomogComponent {
  cplx mu;
  cplx c_mu;
  cplx operator()(double y) const { return c_mu * std::pow(std::abs(y), -mu - 0.5); }
};

// c(mu) = (1/2pi) int_0^inf r^{mu - 1/2} u(r) dr, computed in s = log r.
inline Estimate mellin_c(const Fn& u, cplx mu, const PanelRule& rule = {}) {
  if (u.zero() || u.hi <= 0.0) return {};
  double top = std::log(u.hi);
  cplx a = mu + 0.5;
  auto g = [&](double s) {
    double r = std::exp(s);
    cplx v = u(r);
    return v == 0.0 ? v : std::exp(a * s) * v;
  };
  auto osc = [&](double a0, double b0) {  // start with panels that resolve the oscillation
    PanelRule r = rule;
    r.init_panels = std::max(r.init_panels, (int)std::ceil(std::abs(a.imag()) * (b0 - a0) / 20.0));
    return integrate_compact(g, a0, b0, r);
  };
  Estimate out;
  if (u.lo > 0.0) {
    out = osc(std::log(u.lo), top);
  } else {
    cplx u0 = u(0.0);
    if (u0 == 0.0) {
      // near 0 the integrand is at least as small as r^{a+1}
      double smin = a.real() > -1.0 ? std::max(-2000.0, -45.0 / (a.real() + 1.0)) : -40.0;
      out = osc(smin, top);
    } else {
      if (a.real() <= 0.0) throw std::domain_error("mellin_c: Re mu > -1/2 needed when u(0) != 0");
      double smin = std::max(-2000.0, -41.5 / a.real());
      out = osc(smin, top);
      cplx tail = u0 * std::exp(a * smin) / a;
      out.value += tail;
      out.err += std::abs(tail) * std::exp(smin) + 1e-18;
    }
  }
  return (1.0 / (2.0 * std::numbers::pi)) * out;
}

inline HomogComponent homog_component(const Fn& u, cplx mu) { return {mu, mellin_c(u, mu).value}; }

// int_{-T}^{T} c(i lambda) |y|^{-i lambda - 1/2} d lambda, the vertical-line
// inversion of mellin_c (for even u this is u(y)).
inline Estimate mellin_reconstruct(const Fn& u, double y, double T, const VerticalOptions& opt = {}) {
  if (y == 0.0) throw std::domain_error("mellin_reconstruct: y != 0");
  double ly = std::log(std::abs(y));
  auto f = [&](cplx mu) {
    cplx c = mellin_c(u, mu, opt.rule).value;
    return c * std::exp((-mu - 0.5) * ly);
  };
  return integrate_vertical(f, 0.0, T, opt);
}

}  // namespace pdarith
