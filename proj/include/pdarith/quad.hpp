#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <queue>
#include <stdexcept>
#include <vector>

namespace pdarith {

using cplx = std::complex<double>;

// A complex value with an absolute error bound.
struct Estimate {
  cplx value{0.0, 0.0};
  double err = 0.0;

  Estimate() = default;
  Estimate(cplx v, double e = 0.0) : value(v), err(e) {}

  Estimate& operator+=(const Estimate& o) {
    value += o.value;
    err += o.err;
    return *this;
  }
  friend Estimate operator+(Estimate a, const Estimate& b) { return a += b; }
  friend Estimate operator-(Estimate a, const Estimate& b) {
    a.value -= b.value;
    a.err += b.err;
    return a;
  }
  friend Estimate operator*(cplx s, Estimate a) {
    a.value *= s;
    a.err *= std::abs(s);
    return a;
  }
};

struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PanelRule {
  int order = 32;
  double rel_tol = 1e-10;
  double abs_tol = 1e-15;
  int max_panels = 20000;
  int init_panels = 1;
};

struct GLNodes {
  std::vector<double> x;  // on [-1, 1]
  std::vector<double> w;
};

namespace detail {

inline GLNodes compute_gl(int n) {
  GLNodes r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    double p0 = 1.0, p1 = z;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (z * p1 - p0) / (z * z - 1.0);
    r.x[i] = z;
    r.w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return r;
}

}  // namespace detail

inline const GLNodes& gl_nodes(int n) {
  static const std::array<GLNodes, 65> table = [] {
    std::array<GLNodes, 65> t;
    for (int k = 1; k <= 64; ++k) t[k] = detail::compute_gl(k);
    return t;
  }();
  if (n < 1 || n > 64) throw std::invalid_argument("gl order out of range");
  return table[n];
}

namespace detail {

template <class F>
cplx gl_panel(const F& f, double a, double b, const GLNodes& g, double* l1 = nullptr) {
  double h = 0.5 * (b - a), m = 0.5 * (a + b);
  cplx s = 0.0;
  double sa = 0.0;
  for (std::size_t i = 0; i < g.x.size(); ++i) {
    cplx v = cplx(f(m + h * g.x[i]));
    s += g.w[i] * v;
    sa += g.w[i] * std::abs(v);
  }
  if (l1) *l1 = sa * std::abs(h);
  return s * h;
}

struct Panel {
  double a, b;
  cplx val;
  double err;
  double l1;  // int |f| over the panel, for the roundoff floor
  bool operator<(const Panel& o) const { return err < o.err; }
};

}  // namespace detail

// Adaptive composite Gauss-Legendre on [a, b]. Error per panel is the
// difference between the order p and order p/2 rules.
template <class F>
Estimate integrate_compact(const F& f, double a, double b, const PanelRule& rule = {}) {
  if (!(b > a)) return {};
  if (rule.order < 8 || rule.order > 64) throw std::invalid_argument("panel order out of range");
  const GLNodes& hi = gl_nodes(rule.order);
  const GLNodes& lo = gl_nodes(rule.order / 2);
  auto make = [&](double x0, double x1) {
    double l1 = 0.0;
    cplx vh = detail::gl_panel(f, x0, x1, hi, &l1);
    cplx vl = detail::gl_panel(f, x0, x1, lo);
    return detail::Panel{x0, x1, vh, std::abs(vh - vl), l1};
  };
  std::priority_queue<detail::Panel> heap;
  cplx total = 0.0;
  double err = 0.0, l1 = 0.0;
  int n0 = std::max(1, rule.init_panels);
  for (int i = 0; i < n0; ++i) {
    double x0 = a + (b - a) * i / n0, x1 = (i + 1 == n0) ? b : a + (b - a) * (i + 1) / n0;
    auto p = make(x0, x1);
    total += p.val;
    err += p.err;
    l1 += p.l1;
    heap.push(p);
  }
  int count = n0;
  // below ~64 eps int|f| the estimate is rounding noise; cancelling integrands
  // cannot do better
  auto floor = [&] { return 64.0 * std::numeric_limits<double>::epsilon() * l1; };
  while (err > std::max({rule.abs_tol, rule.rel_tol * std::abs(total), floor()})) {
    if (count >= rule.max_panels) throw QuadratureError("integrate_compact: max_panels exceeded");
    auto p = heap.top();
    heap.pop();
    double m = 0.5 * (p.a + p.b);
    if (!(m > p.a && m < p.b)) {
      heap.push(p);
      break;
    }
    auto l = make(p.a, m), r = make(m, p.b);
    total += l.val + r.val - p.val;
    err += l.err + r.err - p.err;
    l1 += l.l1 + r.l1 - p.l1;
    heap.push(l);
    heap.push(r);
    ++count;
  }
  // Re-sum in positional order so the result does not depend on heap order.
  std::vector<detail::Panel> ps;
  ps.reserve(heap.size());
  while (!heap.empty()) {
    ps.push_back(heap.top());
    heap.pop();
  }
  std::sort(ps.begin(), ps.end(), [](auto& x, auto& y) { return x.a < y.a; });
  cplx s = 0.0;
  double e = 0.0;
  for (auto& p : ps) {
    s += p.val;
    e += p.err;
  }
  return {s, e + 4.0 * std::numeric_limits<double>::epsilon() * l1};
}

struct VerticalOptions {
  PanelRule rule{};
  double block = 4.0;       // width of the blocks the line is cut into
  bool check_decay = true;  // throw when the outermost block is not small
};

// Integral of f(c + i y) dy over [-T, T], i.e. (1/i) times the contour
// integral. The outermost pair of blocks serves as the tail proxy, plus a
// power-law extrapolation past T.
template <class F>
Estimate integrate_vertical(const F& f, double c, double T, const VerticalOptions& opt = {}) {
  if (!(T > 0)) return {};
  int nb = std::max(1, (int)std::ceil(T / opt.block));
  double h = T / nb;
  auto g = [&](double y) { return cplx(f(cplx(c, y))); };
  std::vector<Estimate> pos(nb), neg(nb);
  for (int i = 0; i < nb; ++i) {
    pos[i] = integrate_compact(g, i * h, (i + 1) * h, opt.rule);
    neg[i] = integrate_compact(g, -(i + 1) * h, -i * h, opt.rule);
  }
  Estimate total;
  for (int i = nb - 1; i >= 0; --i) total += neg[i];
  for (int i = 0; i < nb; ++i) total += pos[i];
  double tail = std::abs(pos[nb - 1].value) + std::abs(neg[nb - 1].value);
  if (opt.check_decay && nb >= 4) {
    double peak = 0.0;
    for (int i = 0; i < nb; ++i) peak = std::max(peak, std::abs(pos[i].value) + std::abs(neg[i].value));
    if (tail > 0.5 * peak && tail > opt.rule.abs_tol)
      throw QuadratureError("integrate_vertical: integrand not decaying");
  }
  // beyond T: fit |block| ~ y^{-p} to the last two blocks and integrate
  if (nb >= 2 && tail > 0) {
    double prev = std::abs(pos[nb - 2].value) + std::abs(neg[nb - 2].value);
    double y1 = (nb - 1.5) * h, y2 = (nb - 0.5) * h;
    double p = std::log(prev / tail) / std::log(y2 / y1);
    if (p > 1.0) total.err += tail / h * std::pow(y2 / T, p) * T / (p - 1.0);
  }
  total.err += tail;
  return total;
}

// Fixed composite Gauss-Legendre nodes on [a, b], for callers that evaluate
// many integrands on a shared grid.
struct FixedGrid {
  std::vector<double> x, w;
};

inline FixedGrid fixed_grid(double a, double b, int panels, int order = 32) {
  FixedGrid g;
  const GLNodes& gl = gl_nodes(order);
  double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    double x0 = a + p * h, m = x0 + 0.5 * h;
    for (int i = 0; i < order; ++i) {
      g.x.push_back(m + 0.5 * h * gl.x[i]);
      g.w.push_back(0.5 * h * gl.w[i]);
    }
  }
  return g;
}

}  // namespace pdarith
