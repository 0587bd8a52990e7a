#include <gtest/gtest.h>

#include <cmath>

#include "pdarith/testfn.hpp"

using namespace pdarith;

TEST(Canonical, SupportAndBoundaryValues) {
  auto v = canonical_v(), u = canonical_u();
  EXPECT_EQ(v(1.0), 0.0);
  EXPECT_EQ(v(3.0), 0.0);
  EXPECT_EQ(v(2.0 * std::sqrt(2.0)), 0.0);
  EXPECT_NEAR(v(2.0), std::exp(-1.0 / (2.0 * std::sqrt(2.0) - 2.0)), 1e-16);
  EXPECT_NEAR(u(0.0), std::exp(-1.0), 1e-16);
  EXPECT_EQ(u(1.0), 0.0);
  EXPECT_EQ(u(-1.0), 0.0);
}

TEST(Canonical, UIsEven) {
  for (auto flat : {false, true}) {
    auto u = canonical_u(flat);
    for (int i = 0; i < 50; ++i) {
      double y = -1.2 + 0.047 * i;
      EXPECT_EQ(u(y), u(-y)) << y;
    }
  }
}

TEST(Canonical, ExactZeroOutsideSupportForAllOrders) {
  for (auto flat : {false, true})
    for (auto f : {canonical_v(flat), canonical_u(flat)})
      for (int k = 0; k <= 2; ++k)
        for (double d : {1e-300, 1e-12, 0.1, 5.0}) {
          EXPECT_EQ(eval_deriv(f, f.lo() - d, k), 0.0);
          EXPECT_EQ(eval_deriv(f, f.hi() + d, k), 0.0);
        }
}

TEST(Canonical, DerivativesMatchFiniteDifferences) {
  for (auto flat : {false, true})
    for (auto f : {canonical_v(flat), canonical_u(flat)}) {
      double span = f.hi() - f.lo();
      for (int i = 1; i < 10; ++i) {
        double x = f.lo() + span * (i + 0.31) / 10.5;
        double h = 1e-4;
        double d1 = (eval_deriv(f, x + h, 0) - eval_deriv(f, x - h, 0)) / (2 * h);
        double d2 = (eval_deriv(f, x + h, 1) - eval_deriv(f, x - h, 1)) / (2 * h);
        double s1 = std::max(1.0, std::abs(eval_deriv(f, x, 1))), s2 = std::max(1.0, std::abs(eval_deriv(f, x, 2)));
        EXPECT_NEAR(eval_deriv(f, x, 1), d1, 1e-5 * s1) << x;
        EXPECT_NEAR(eval_deriv(f, x, 2), d2, 1e-5 * s2) << x;
      }
    }
}

TEST(Canonical, FlatnessAtDeclaredPoints) {
  for (auto f : {canonical_v(true), canonical_u(true)}) {
    ASSERT_EQ(f.flat_points().size(), 1u);
    double x0 = f.flat_points()[0];
    for (int k = 0; k <= 2; ++k) EXPECT_EQ(eval_deriv(f, x0, k), 0.0);
    double sup = 0;
    for (int i = 0; i <= 2000; ++i) sup = std::max(sup, f(f.lo() + (f.hi() - f.lo()) * i / 2000.0));
    for (double h = 1e-2; h <= 1e-1; h *= 1.2)
      for (double s : {-1.0, 1.0}) EXPECT_LE(f(x0 + s * h), std::exp(-1.0 / (2 * h * h)) * sup) << h;
  }
}

TEST(RescaleUQ, IdentityAtEpsZero) {
  auto u = canonical_u();
  auto r = rescale_uQ(u, 15, 0.0);
  for (double y : {-0.7, 0.0, 0.3}) EXPECT_EQ(r(y), u(y));
}

TEST(RescaleUQ, PreservesL2AndScalesValueAtZero) {
  auto u = canonical_u();
  auto norm2 = [](const TestFunction& f) {
    return integrate_compact([&](double x) { return f(x) * f(x); }, f.lo(), f.hi()).value.real();
  };
  double n0 = norm2(u);
  for (double Q : {3.0, 15.0, 101.0})
    for (double eps : {0.25, 0.5}) {
      auto r = rescale_uQ(u, Q, eps);
      EXPECT_NEAR(norm2(r), n0, 1e-11);
      EXPECT_NEAR(r(0.0), std::pow(Q, eps / 2) * u(0.0), 1e-15);
    }
  EXPECT_THROW(rescale_uQ(u, 0.5, 0.1), std::invalid_argument);
}

TEST(FnCombinators, SupportsTrackTransforms) {
  Fn u = fn(canonical_u());
  Fn d = dilated(u, -2.0);
  EXPECT_DOUBLE_EQ(d.lo, -0.5);
  EXPECT_DOUBLE_EQ(d.hi, 0.5);
  EXPECT_EQ(d(0.25), u(-0.5));
  Fn s = shifted(u, 3.0);
  EXPECT_EQ(s(3.2), u(0.2));
  EXPECT_TRUE(zero_fn().zero());
  EXPECT_EQ(times_power(u, 2)(0.5), u(0.5) * 0.25);
}

// mellin_c reference values are from mpmath quadrature
TEST(MellinC, ReferenceValues) {
  Fn u = fn(canonical_u());
  EXPECT_LE(std::abs(mellin_c(u, 0.5).value - 0.035331905272692061081), 1e-13);
  EXPECT_LE(std::abs(mellin_c(u, {0, 3}).value - cplx(-0.0086987821744951235129, -0.0047876132594772908289)), 1e-13);
  EXPECT_LE(std::abs(mellin_c(u, {0.2, -1}).value - cplx(0.0046658178625601578146, 0.031055341817080910368)), 1e-12);
}

TEST(MellinC, ZeroFunction) { EXPECT_EQ(mellin_c(zero_fn(), 0.3).value, cplx(0.0)); }

TEST(MellinC, ConjugationSymmetry) {
  for (auto flat : {false, true}) {
    Fn u = fn(canonical_u(flat));
    for (cplx mu : {cplx(0, 2.5), cplx(-0.2, 7), cplx(0.3, -1)})
      EXPECT_LE(std::abs(mellin_c(u, std::conj(mu)).value - std::conj(mellin_c(u, mu).value)), 1e-15);
  }
}

TEST(MellinC, HalfIsPlainIntegral) {
  Fn u = fn(canonical_u(true));
  auto direct = integrate_compact([&](double r) { return u(r); }, 0.0, 1.0);
  EXPECT_NEAR(mellin_c(u, 0.5).value.real(), direct.value.real() / (2 * std::numbers::pi), 1e-14);
}

// Super-polynomial decay: the local exponent keeps growing along the line.
TEST(MellinC, FlattenedDecaySteepens) {
  Fn u = fn(canonical_u(true));
  auto slope = [&](double a) {
    return std::log2(std::abs(mellin_c(u, {0, a}).value) / std::abs(mellin_c(u, {0, 2 * a}).value));
  };
  double s40 = slope(40), s160 = slope(160);
  EXPECT_GT(s160, 8.0);
  EXPECT_GT(s160, s40 + 2.0);
}

TEST(MellinC, PlainURequiresRightHalfPlane) {
  EXPECT_THROW(mellin_c(fn(canonical_u()), -1.0), std::domain_error);
  EXPECT_NO_THROW(mellin_c(fn(canonical_u(true)), -1.0));
}

TEST(MellinReconstruct, FlattenedRecoversValue) {
  auto U = canonical_u(true);
  Fn u = fn(U);
  auto r = mellin_reconstruct(u, 0.5, 200.0);
  EXPECT_NEAR(r.value.real(), U(0.5), 1e-6);
  EXPECT_NEAR(r.value.imag(), 0.0, 1e-6);
  auto out = mellin_reconstruct(u, 1.5, 200.0);
  EXPECT_NEAR(std::abs(out.value), 0.0, 1e-6);
  EXPECT_THROW(mellin_reconstruct(u, 0.0, 10.0), std::domain_error);
}

TEST(MellinReconstruct, HeightHalvingWithinError) {
  Fn u = fn(canonical_u(true));
  auto a = mellin_reconstruct(u, 0.5, 100.0), b = mellin_reconstruct(u, 0.5, 200.0);
  EXPECT_LE(std::abs(a.value - b.value), a.err + 1e-12);
}
