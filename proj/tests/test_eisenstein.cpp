#include <gtest/gtest.h>

#include "pdarith/eisenstein.hpp"

using namespace pdarith;

namespace {
Fn V(bool f = false) { return fn(canonical_v(f)); }
Fn U(bool f = false) { return fn(canonical_u(f)); }
}  // namespace

// mpmath quadrature of the s-integral
TEST(Kernel, ReferenceValues) {
  EXPECT_LE(std::abs(pairing_kernel320(V(), U(), 2.5).value - 0.071972143362838433102), 1e-13);
  EXPECT_LE(std::abs(pairing_kernel320(V(), U(), 2.2).value - 0.070171889571872430177), 1e-13);
  EXPECT_LE(std::abs(pairing_kernel320(V(), U(), {3, 4}).value - cplx(0.052145808942830502507, 0.02565715469950603398)),
            1e-13);
  EXPECT_LE(std::abs(pairing_kernel320(V(), U(), {1, 3}).value - cplx(0.054956611197799933442, 0.0064084094308151671926)),
            1e-13);
}

TEST(Kernel, MeanValueProperty) {
  for (cplx nu : {cplx(2.5), cplx(0.3, 5), cplx(-1, -2)}) EXPECT_LE(kernel320_mean_value_residual(V(), U(), nu), 1e-8);
}

TEST(Kernel, ZeroAndSupportClass) {
  EXPECT_EQ(pairing_kernel320(zero_fn(), U(), 2.0).value, cplx(0.0));
  EXPECT_THROW(pairing_kernel320(U(), U(), 2.0), std::domain_error);
}

TEST(Def31, AgreesWithKernel) {
  for (cplx nu : {cplx(2.2), cplx(2.5), cplx(3, 4)}) {
    auto a = pairing_kernel320(V(), U(), nu), b = pairing_def31(V(), U(), nu);
    EXPECT_LE(std::abs(a.value - b.value), 1e-6 * std::abs(a.value)) << nu;
  }
  EXPECT_THROW(pairing_def31(V(), U(), 1.0), std::domain_error);
}

TEST(Def31, FrequencyCutoffDoublingWithinError) {
  Def31Options o;
  o.xi_max = 128;
  auto a = pairing_def31(V(), U(), 2.5, o), b = pairing_def31(V(), U(), 2.5);
  EXPECT_LE(std::abs(a.value - b.value), a.err + 1e-12);
}

TEST(Residue, LimitIsInnerProduct) {
  auto r = residue_check_32(U(), U());
  EXPECT_NEAR(r.inner_product.real(), 0.13308612084499427156, 1e-12);
  EXPECT_LE(r.residual, 1e-4);
  // disjoint interiors
  TestFunction w;
  w.a = 2.0;
  w.b = 3.0;
  auto z = residue_check_32(fn(w), U());
  EXPECT_EQ(z.inner_product, cplx(0.0));
  EXPECT_LE(std::abs(z.limit.value), 1e-12);
}

TEST(Phi, ConjugationSymmetry) {
  for (auto [nu, mu] : std::vector<std::pair<cplx, cplx>>{{{2.5, 1}, {0, 3}}, {{1.5, -2}, {-0.3, 1}}}) {
    cplx a = phi(V(), U(), std::conj(nu), std::conj(mu)).value, b = std::conj(phi(V(), U(), nu, mu).value);
    EXPECT_LE(std::abs(a - b), 1e-14 * std::max(1.0, std::abs(b)));
  }
  EXPECT_THROW(phi(V(), U(), 2.0, 0.5), std::domain_error);
  EXPECT_EQ(phi(V(), zero_fn(), 2.0, 0.0).value, cplx(0.0));
}

TEST(Phi, DecayBoundedByMellinEnvelope) {
  Fn v = V(true), u = U(true);
  for (double lam : {5.0, 20.0, 60.0}) {
    double p = std::abs(phi(v, u, 2.5, {0, lam}).value), c = std::abs(mellin_c(u, {0, lam}).value);
    double J = std::abs(phi_kernel(v, 2.5, {0, lam}).value);
    EXPECT_LE(p, c * J * (1 + 1e-12));
    EXPECT_LE(J, 10.0);  // the kernel factor stays bounded on the line
  }
}

TEST(Mellin910, ReconstructsPairing) {
  for (bool flat : {false, true})
    for (cplx nu : {cplx(2.5), cplx(1, 3)}) {
      auto k = pairing_kernel320(V(flat), U(flat), nu), m = pairing_mellin910(V(flat), U(flat), nu, 60.0);
      EXPECT_LE(std::abs(k.value - m.value), 1e-6) << nu << " flat=" << flat;
    }
}

TEST(Recursion, ReportIsProducedForFlattenedPair) {
  auto r = recursion_914_report(canonical_v(true), canonical_u(true), 2.0, -2.0);
  EXPECT_TRUE(std::isfinite(std::abs(r.lhs)));
  EXPECT_TRUE(std::isfinite(std::abs(r.rhs)));
  EXPECT_NE(r.lhs, cplx(0.0));
  EXPECT_THROW(recursion_914_report(canonical_v(true), canonical_u(true), 2.0, -1.0), std::domain_error);
}

TEST(Recursion, ZeroUGivesZeroSides) {
  TestFunction z = canonical_u(true);
  z.amp = 0.0;
  auto r = recursion_914_report(canonical_v(true), z, 2.0, -2.0);
  EXPECT_EQ(r.lhs, cplx(0.0));
  EXPECT_EQ(r.rhs, cplx(0.0));
}

// The identity itself, at a height where the vertical tail is negligible.
TEST(CombDecomposition, ConvergesWithHeight) {
  auto a = comb_decomp_check(V(), U(), LatticeSymbolSpec::comb(), 2.0, 480.0);
  EXPECT_LE(a.residual, 1e-7);
  auto b = comb_decomp_check(V(), U(), LatticeSymbolSpec::T_N(15, false), 2.0, 480.0);
  EXPECT_LE(b.residual, 1e-7);
  EXPECT_THROW(comb_decomp_check(V(), U(), LatticeSymbolSpec::T_N(15), 2.0, 60.0), std::invalid_argument);
  EXPECT_THROW(comb_decomp_check(V(), U(), LatticeSymbolSpec::comb(), 1.0, 60.0), std::domain_error);
}

TEST(CombDecomposition, ZeroFunction) {
  auto r = comb_decomp_check(zero_fn(), U(), LatticeSymbolSpec::comb(), 2.0, 20.0);
  EXPECT_EQ(r.contour.value, cplx(0.0));
  EXPECT_EQ(r.lattice.value, cplx(0.0));
}
