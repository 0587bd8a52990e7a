#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "arith.hpp"
#include "eisenstein.hpp"
#include "forms.hpp"
#include "quad.hpp"
#include "testfn.hpp"
#include "zeta.hpp"

namespace pdarith {

inline constexpr double kReferenceResidue = 12.0 / (std::numbers::pi * std::numbers::pi);

struct GrowthFit {
  double exponent = 0.0;
  double intercept = 0.0;
  double stderr_exponent = 0.0;
  double r_squared = 1.0;
  int used = 0;
  int excluded_zero = 0;
};

// Least squares of log|value| against log Q; zero values are skipped.
inline GrowthFit growth_fit(const std::vector<std::pair<double, cplx>>& data) {
  std::vector<double> xs, ys;
  GrowthFit g;
  for (auto& [q, val] : data) {
    if (val == 0.0) {
      ++g.excluded_zero;
      continue;
    }
    xs.push_back(std::log(q));
    ys.push_back(std::log(std::abs(val)));
  }
  g.used = (int)xs.size();
  if (g.used == 0) throw std::domain_error("growth_fit: all values are zero");
  if (g.used == 1) {
    g.intercept = ys[0];
    return g;
  }
  double n = g.used, mx = 0, my = 0;
  for (int i = 0; i < g.used; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (int i = 0; i < g.used; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) {
    g.intercept = my;
    return g;
  }
  g.exponent = sxy / sxx;
  g.intercept = my - g.exponent * mx;
  double sse = std::max(0.0, syy - g.exponent * sxy);
  g.r_squared = syy == 0.0 ? 1.0 : 1.0 - sse / syy;
  if (g.used > 2) g.stderr_exponent = std::sqrt(sse / (n - 2) / sxx);
  return g;
}

struct SeriesTerms {
  std::vector<std::pair<double, cplx>> terms;  // (Q, form value)
  double term_err = 0.0;
};

// sum_Q Q^{-s} L_Q with a tail bound from the fitted growth |L_Q| <= C Q^g:
// sum_{Q > X} C Q^{g - sigma} <= C X^{g + 1 - sigma} / (sigma - g - 1).
inline Estimate sum_series(const SeriesTerms& t, cplx s, i64 X) {
  cplx acc = 0.0;
  double err = 0.0;
  for (auto it = t.terms.rbegin(); it != t.terms.rend(); ++it) {
    cplx w = std::exp(-s * std::log(it->first));
    acc += w * it->second;
    err += std::abs(w) * t.term_err;
  }
  double g = 1.0;
  int nz = 0;
  for (auto& [q, v] : t.terms)
    if (v != 0.0) ++nz;
  if (nz >= 3) g = growth_fit(t.terms).exponent;
  double C = 0.0;
  for (auto& [q, v] : t.terms) C = std::max(C, std::abs(v) * std::pow(q, -g));
  double sig = s.real();
  if (C > 0.0) {
    if (sig > g + 1.0)
      err += C * std::pow((double)X, g + 1.0 - sig) / (sig - g - 1.0);
    else
      err = std::numeric_limits<double>::infinity();
  }
  return {acc, err};
}

inline SeriesTerms F0_terms(const Fn& v, const Fn& u, i64 X, const LatticeOptions& opt = {}) {
  SeriesTerms t;
  for (i64 Q : squarefree_odd_upto(X)) {
    auto L = lattice_form(v, u, LatticeSymbolSpec::T_inf_over_2(), Q, opt);
    t.terms.push_back({(double)Q, L.value});
    t.term_err = std::max(t.term_err, L.err);
  }
  return t;
}

inline Estimate F0_series(const Fn& v, const Fn& u, cplx s, i64 X, const LatticeOptions& opt = {}) {
  return sum_series(F0_terms(v, u, X, opt), s, X);
}

// A(nu) = (1 - 2^{-nu})^{-1} / zeta(nu).
inline cplx odd_mobius_factor(cplx nu) {
  return 1.0 / ((1.0 - std::exp(-nu * std::numbers::ln2)) * zeta_complex(nu).value);
}

inline Estimate F0_integral(const Fn& v, const Fn& u, cplx s, double T, const VerticalOptions& opt = {}) {
  if (s.real() <= 2.0) throw std::domain_error("F0_integral: Re s > 2 required");
  if (v.zero() || u.zero()) return {};
  auto f = [&](cplx nu) {
    cplx k = pairing_kernel320(v, u, nu).value;
    if (k == 0.0) return k;
    return f_kernel(s - nu).value * odd_mobius_factor(nu) * k;
  };
  VerticalOptions vo = opt;
  vo.check_decay = false;
  return (1.0 / (2.0 * std::numbers::pi)) * integrate_vertical(f, 1.0, T, vo);
}

inline SeriesTerms Feps_terms(const Fn& v, const TestFunction& u, double eps, i64 X) {
  SeriesTerms t;
  for (i64 Q : squarefree_odd_upto(X)) {
    auto uq = fn(rescale_uQ(u, (double)Q, eps));
    t.terms.push_back({(double)Q, arithmetic_side_inf_odd(v, uq, Q).value});
  }
  t.term_err = 1e-15;
  return t;
}

inline Estimate Feps_series(const Fn& v, const TestFunction& u, cplx s, double eps, i64 X) {
  if (eps < 0) throw std::invalid_argument("Feps_series: eps >= 0");
  return sum_series(Feps_terms(v, u, eps, X), s, X);
}

inline Estimate H_eps(const Fn& v, const Fn& u, cplx s, cplx nu, double eps, double T_mu,
                      const VerticalOptions& opt = {}) {
  if (std::abs((s - nu).real() - 1.0) < 1e-12) throw std::domain_error("H_eps: f is singular on the line");
  if (eps == 0.0) {
    auto P = pairing_mellin910(v, u, nu, T_mu, opt);
    return f_kernel(s - nu).value * P;
  }
  auto f = [&](cplx mu) { return f_kernel(s - nu + eps * mu).value * phi(v, u, nu, mu, opt.rule).value; };
  return integrate_vertical(f, 0.0, T_mu, opt);
}

struct FepsGrid {
  double T = 150.0;           // |Im nu| cutoff
  double lambda_max = 100.0;  // |Im mu| cutoff
  double h_lambda = 0.1;
  double h_y_target = 0.5;
  int w_panels_per_unit = 3;
};

namespace detail {

struct FepsParts {
  cplx value;
  cplx coarse;  // every other node in both directions
  double edge;  // integrand size at the truncation edges
};

// Both vertical integrals by the trapezoid rule on uniform grids (the
// integrands are analytic and decaying). Im(eps mu) - Im(nu) then lives on one
// uniform grid, so f is evaluated once per grid point; J(nu, i lambda) for all
// grid pairs is a single matrix product over a fixed w-grid.
inline FepsParts feps_grid(const Fn& v, const Fn& u, cplx s, double eps, double c, const FepsGrid& g) {
  const double hl = g.h_lambda;
  int m = eps > 0 ? std::max(1, (int)std::lround(g.h_y_target / (eps * hl))) : 1;
  const double hy = eps > 0 ? m * eps * hl : g.h_y_target;
  int L = (int)std::ceil(g.lambda_max / hl), Y = (int)std::ceil(g.T / hy);
  int nl = 2 * L + 1, ny = 2 * Y + 1;

  std::vector<cplx> cl(nl);
  for (int l = -L; l <= L; ++l) cl[l + L] = mellin_c(u, cplx(0.0, l * hl)).value;

  // w-grid for the Phi kernel
  double S = std::acosh(v.hi / 2.0);
  double W = std::log(2.0 * std::sinh(S));
  double wmin = std::log(1e-17) / 1.5;
  int panels = (int)std::ceil((W - wmin) * g.w_panels_per_unit * std::max(1.0, g.lambda_max / 30.0));
  FixedGrid gw = fixed_grid(wmin, W, panels, 32);
  int nw = (int)gw.x.size();
  cplx ginf = std::conj(v(2.0)) / 2.0;

  Eigen::MatrixXcd A(ny, nw), B(nw, nl);
  std::vector<cplx> nus(ny);
  for (int i = -Y; i <= Y; ++i) nus[i + Y] = cplx(c, i * hy);
  for (int n = 0; n < nw; ++n) {
    double w = gw.x[n], ew = std::exp(w);
    double sp = std::asinh(ew / 2.0);
    double ch = 2.0 * std::cosh(sp);
    cplx vb = std::conj(v(ch)) / ch;
    double amp = gw.w[n] * std::exp(0.5 * w);
    for (int i = 0; i < ny; ++i) {
      cplx e1 = std::exp(nus[i] * sp), e2 = std::exp(-nus[i] * sp);
      A(i, n) = amp * ((e1 * vb - ginf) + (e2 * vb - ginf));
    }
    for (int l = -L; l <= L; ++l) {
      double ph = -l * hl * w;
      B(n, l + L) = cplx(std::cos(ph), std::sin(ph));
    }
  }
  Eigen::MatrixXcd J = A * B;
  for (int l = -L; l <= L; ++l) {
    cplx a1 = cplx(0.5, -l * hl);  // 1 - a with a = i lambda + 1/2
    cplx closed = 2.0 * ginf * std::exp(a1 * W) / a1;
    for (int i = 0; i < ny; ++i) J(i, l + L) += closed;
  }

  // f(s - nu + i eps lambda) with Im part eps*lambda - y on one grid
  std::vector<cplx> fz;
  int zoff = 0;
  if (eps > 0) {
    zoff = L + m * Y;
    fz.resize(2 * zoff + 1);
    for (int q = -zoff; q <= zoff; ++q) fz[q + zoff] = f_kernel(s - c + cplx(0.0, eps * hl * q)).value;
  } else {
    fz.resize(ny);
    for (int i = -Y; i <= Y; ++i) fz[i + Y] = f_kernel(s - nus[i + Y]).value;
  }
  auto fval = [&](int i, int l) { return eps > 0 ? fz[l - m * i + zoff] : fz[i + Y]; };

  cplx full = 0.0, coarse = 0.0;
  double edge = 0.0;
  for (int i = -Y; i <= Y; ++i) {
    cplx H = 0.0, Hc = 0.0;
    for (int l = -L; l <= L; ++l) {
      cplx t = fval(i, l) * cl[l + L] * J(i + Y, l + L);
      H += t;
      if (l % 2 == 0) Hc += t;
      if (std::abs(l) == L) edge += std::abs(t) * hl * hy;
    }
    cplx a = odd_mobius_factor(nus[i + Y]);
    full += a * H * hl;
    if (i % 2 == 0) coarse += a * Hc * 2.0 * hl;
    if (std::abs(i) == Y) edge += std::abs(a * H) * hl * hy;
  }
  double k = hy / (2.0 * std::numbers::pi);
  return {full * k, coarse * 2.0 * k, edge / (2.0 * std::numbers::pi)};
}

}  // namespace detail

inline Estimate Feps_integral(const Fn& v, const Fn& u, cplx s, double eps, double c, const FepsGrid& grid = {}) {
  if (c <= 1.0 || s.real() <= c + 1.0) throw std::domain_error("Feps_integral: c > 1 and Re s > c + 1 required");
  if (eps < 0) throw std::invalid_argument("Feps_integral: eps >= 0");
  if (v.zero() || u.zero() || v.hi <= 2.0) return {};
  auto p = detail::feps_grid(v, u, s, eps, c, grid);
  return {p.value, std::abs(p.value - p.coarse) + p.edge};
}

inline double kappa_f() { return f_residue_at_1().value.real(); }

// -kappa int_{Re mu = 0} (1 - 2^{-s+1-eps mu})^{-1} / zeta(s-1+eps mu)
// Phi(s-1+eps mu, mu) d mu, with d mu = i d lambda.
inline Estimate G_eps(const Fn& v, const Fn& u, cplx s, double eps, double T_mu, const VerticalOptions& opt = {}) {
  double kappa = kappa_f();
  auto f = [&](cplx mu) {
    cplx nu = s - 1.0 + eps * mu;
    auto z = zeta_complex(nu);
    if (std::abs(z.value) < 1e-8) throw std::domain_error("G_eps: zeta nearly vanishes on the line");
    cplx a = 1.0 / ((1.0 - std::exp(-nu * std::numbers::ln2)) * z.value);
    return a * phi(v, u, nu, mu, opt.rule).value;
  };
  return cplx(0.0, -kappa) * integrate_vertical(f, 0.0, T_mu, opt);
}

inline Estimate G0_integral(const Fn& v, const Fn& u, cplx s, double T_mu, const VerticalOptions& opt = {}) {
  return G_eps(v, u, s, 0.0, T_mu, opt);
}

inline Estimate G0_closed(const Fn& v, const Fn& u, cplx s) {
  double kappa = kappa_f();
  cplx nu = s - 1.0;
  auto z = zeta_complex(nu);
  if (std::abs(z.value) < 1e-8) throw std::domain_error("G0: zeta(s-1) nearly vanishes");
  cplx a = 1.0 / ((1.0 - std::exp(-nu * std::numbers::ln2)) * z.value);
  return cplx(0.0, -kappa) * a * pairing_kernel320(v, u, nu);
}

enum class GrowthRoute { lattice, arithmetic };

// |(v | Psi(Q^{2 i pi E} T_{inf/2}) u)| over squarefree odd Q.
inline std::vector<std::pair<double, cplx>> growth_data(const Fn& v, const Fn& u, const std::vector<i64>& Qs,
                                                        GrowthRoute route, const LatticeOptions& opt = {}) {
  std::vector<std::pair<double, cplx>> d;
  for (i64 Q : Qs) {
    cplx val = route == GrowthRoute::lattice ? lattice_form(v, u, LatticeSymbolSpec::T_inf_over_2(), Q, opt).value
                                             : arithmetic_side_inf_odd(v, u, Q).value;
    d.push_back({(double)Q, val});
  }
  return d;
}

inline GrowthFit growth_fit(const Fn& v, const Fn& u, const std::vector<i64>& Qs,
                            GrowthRoute route = GrowthRoute::arithmetic) {
  if (Qs.size() < 8) throw std::invalid_argument("growth_fit: at least 8 values of Q");
  return growth_fit(growth_data(v, u, Qs, route));
}

}  // namespace pdarith
