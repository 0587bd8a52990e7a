#include <gtest/gtest.h>

#include <numbers>

#include "pdarith/wigner.hpp"

using namespace pdarith;

namespace {
Fn V() { return fn(canonical_v()); }
Fn U() { return fn(canonical_u()); }
}  // namespace

// reference values from mpmath quadrature
TEST(Wig, ReferenceValues) {
  EXPECT_LE(std::abs(wig(V(), U(), 1.2, 0.7).value - cplx(-0.022477319467042039736, -0.027872110870195990086)), 1e-12);
  EXPECT_LE(std::abs(wig(V(), U(), 1.5, -2.3).value - cplx(0.00095189060722847022211, -0.00055253842218856734364)),
            1e-13);
  EXPECT_LE(std::abs(wig(V(), U(), 0.9, 0.0).value - 0.098497386207668145265), 1e-12);
}

TEST(Wig, RefinementOracleAtCentre) {
  PanelRule fine;
  fine.rel_tol = 1e-14;
  fine.init_panels = 64;
  auto a = wig(V(), U(), 1.5, 0.0), b = wig(V(), U(), 1.5, 0.0, fine);
  EXPECT_LE(std::abs(a.value - b.value), 1e-9 * std::abs(b.value));
}

TEST(Wig, OutsideXWindowIsZero) {
  auto X = wig_x_window(V(), U());
  EXPECT_EQ(wig(V(), U(), X.lo - 0.01, 0.3).value, cplx(0.0));
  EXPECT_EQ(wig(V(), U(), X.hi + 0.01, 0.3).value, cplx(0.0));
}

TEST(Wig, SwappingArgumentsConjugates) {
  for (auto [x, xi] : std::vector<std::pair<double, double>>{{1.1, 0.4}, {1.4, -3.0}})
    EXPECT_LE(std::abs(wig(U(), V(), x, xi).value - std::conj(wig(V(), U(), x, xi).value)), 1e-14);
}

TEST(WigRow, MatchesPointwiseQuadrature) {
  double x = 1.2, P = 3.0;
  int M = 4096;
  auto row = wig_row(V(), U(), x, P, M);
  for (int k : {0, 1, 2, 5, -3, -7, 20}) {
    cplx want = wig(V(), U(), x, k / P).value;
    EXPECT_LE(std::abs(row[(k + M) % M] - want), 1e-12) << k;
  }
}

TEST(Marginal, IntegralOverFrequencyIsPointProduct) {
  for (double x : {1.1, 1.4, 1.8}) {
    auto r = wig_marginal_check(V(), U(), x);
    EXPECT_LE(r.residual, 1e-8) << x;
  }
  // same function twice: the marginal is |u(x)|^2
  auto r = wig_marginal_check(U(), U(), 0.3);
  EXPECT_NEAR(r.direct.real(), canonical_u()(0.3) * canonical_u()(0.3), 1e-16);
  EXPECT_LE(r.residual, 1e-8);
}

TEST(EulerOperator, ResidualAndFourthOrderConvergence) {
  auto v = canonical_v(), u = canonical_u();
  for (auto [x, xi] : std::vector<std::pair<double, double>>{{0.5, 0.3}, {1.0, 2.5}, {1.3, 0.0}}) {
    auto a = euler_apply_check(v, u, x, xi, 1e-2), b = euler_apply_check(v, u, x, xi, 2e-2);
    EXPECT_LE(a.residual, 1e-6);
    double order = std::log2(b.residual / a.residual);
    EXPECT_NEAR(order, 4.0, 0.3) << x << "," << xi;
  }
}

TEST(SymplecticFourier, MatchesReflectedWigner) {
  auto rep = symp_fourier_check(V(), U(), {{1.2, 0.5}, {1.5, -1.0}, {0.8, 2.0}});
  EXPECT_LE(rep.max_residual, 1e-6);
  // without the reflection the values differ
  EXPECT_GT(rep.max_literal_residual, 1e-3);
}
