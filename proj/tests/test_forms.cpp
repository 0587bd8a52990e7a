#include <gtest/gtest.h>

#include <sstream>

#include "pdarith/forms.hpp"

using namespace pdarith;

namespace {

Fn V() { return fn(canonical_v()); }
Fn U() { return fn(canonical_u()); }

// a pair outside the single-shell support class, with overlapping supports
Fn Vg() {
  TestFunction t;
  t.a = 0.3;
  t.b = 1.7;
  return fn(t);
}
Fn Ug() {
  TestFunction t;
  t.a = -0.8;
  t.b = 0.5;
  return fn(t);
}

// Poisson-dual form of the T_N lattice sum:
// sum_{T|N} mu(T) sum_{j,l} conj(v)(Tj/Q + lQ/T) u(Tj/Q - lQ/T).
cplx dual_oracle(const Fn& v, const Fn& u, i64 N, i64 Q) {
  cplx s = 0.0;
  for (i64 T : divisors(N)) {
    int m = mobius(T);
    if (!m) continue;
    double t = (double)T, q = (double)Q;
    i64 j0 = (i64)std::floor((v.lo + u.lo) * q / (2 * t)) - 1, j1 = (i64)std::ceil((v.hi + u.hi) * q / (2 * t)) + 1;
    i64 l0 = (i64)std::floor((v.lo - u.hi) * t / (2 * q)) - 1, l1 = (i64)std::ceil((v.hi - u.lo) * t / (2 * q)) + 1;
    for (i64 j = j0; j <= j1; ++j)
      for (i64 l = l0; l <= l1; ++l) {
        double x = t * j / q + l * q / t, y = t * j / q - l * q / t;
        s += (double)m * std::conj(v(x)) * u(y);
      }
  }
  return s;
}

}  // namespace

TEST(LatticeForm, MatchesPoissonDualCanonical) {
  for (auto [N, Q] : std::vector<std::pair<i64, i64>>{{1, 1}, {15, 1}, {15, 3}, {15, 5}, {105, 7}}) {
    auto l = lattice_form(V(), U(), LatticeSymbolSpec::T_N(N), Q);
    cplx want = dual_oracle(V(), U(), N, Q);
    EXPECT_LE(std::abs(l.value - want), 1e-10 * (1 + std::abs(want))) << N << "," << Q;
  }
}

TEST(LatticeForm, MatchesPoissonDualGenericPair) {
  for (auto [N, Q] : std::vector<std::pair<i64, i64>>{{1, 1}, {3, 1}, {15, 3}, {21, 7}}) {
    auto l = lattice_form(Vg(), Ug(), LatticeSymbolSpec::T_N(N), Q);
    cplx want = dual_oracle(Vg(), Ug(), N, Q);
    EXPECT_LE(std::abs(l.value - want), 1e-10 * (1 + std::abs(want))) << N << "," << Q;
  }
}

TEST(LatticeForm, CombWithAndWithoutOrigin) {
  auto full = lattice_form(Vg(), Ug(), LatticeSymbolSpec::comb_full(), 1);
  auto punct = lattice_form(Vg(), Ug(), LatticeSymbolSpec::comb(), 1);
  EXPECT_LE(std::abs(full.value - dual_oracle(Vg(), Ug(), 1, 1)), 1e-10);
  EXPECT_LE(std::abs(full.value - punct.value - wig(Vg(), Ug(), 0.0, 0.0).value), 1e-10);
}

TEST(LatticeForm, ZeroFunctionAndBadQ) {
  EXPECT_EQ(lattice_form(zero_fn(), U(), LatticeSymbolSpec::comb(), 1).value, cplx(0.0));
  EXPECT_THROW(lattice_form(V(), U(), LatticeSymbolSpec::comb(), 0), std::invalid_argument);
}

TEST(LatticeForm, KCapEnforced) {
  LatticeOptions o;
  o.k_cap = 32;
  EXPECT_THROW(lattice_form(V(), U(), LatticeSymbolSpec::comb(), 1, o), QuadratureError);
}

TEST(ThetaMap, SingleTermAndPeriodicity) {
  auto t = theta_map(U(), 3);
  EXPECT_EQ(t.modulus, 18);
  for (i64 n = -8; n <= 8; ++n) EXPECT_NEAR(std::abs(t(n) - U()(n / 3.0)), 0.0, 1e-16) << n;
  for (i64 n = 0; n < 18; ++n) EXPECT_EQ(t(n), t(n + 18));
  EXPECT_TRUE(theta_map(zero_fn(), 3).values.empty());
}

TEST(FN, EulerProductEqualsDft) {
  for (i64 N : {1, 3, 15, 105})
    for (i64 j = 0; j < N; ++j)
      for (i64 s = 0; s < N; ++s)
        EXPECT_EQ(f_N(factorize(N), j, s, FNMethod::euler_product), f_N(factorize(N), j, s, FNMethod::dft))
            << N << " " << j << " " << s;
}

TEST(CoeffTable, ClosedFormEqualsDft) {
  for (auto [R, Q] : std::vector<std::pair<i64, i64>>{{1, 3}, {3, 1}, {3, 5}, {1, 15}, {5, 3}, {1, 1}}) {
    auto a = coeff_table(R, Q, TableMethod::c71), b = coeff_table(R, Q, TableMethod::dft);
    EXPECT_EQ(a.entries, b.entries) << R << "," << Q;
  }
}

TEST(CoeffTable, CapAndDomain) {
  EXPECT_THROW(coeff_table(1, 33), std::length_error);
  EXPECT_THROW(coeff_table(1, 9), std::invalid_argument);
}

TEST(CoeffTable, CsvLayout) {
  auto t = coeff_table(1, 3);
  std::ostringstream os;
  write_csv(t, os);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "R,Q,N");
  std::getline(is, line);
  EXPECT_EQ(line, "1,3,3");
  std::getline(is, line);
  EXPECT_EQ(line, "m,n,value");
  int rows = 0;
  while (std::getline(is, line)) {
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 2);
    ++rows;
  }
  int nonzero = 0;
  for (auto e : t.entries) nonzero += e != 0;
  EXPECT_EQ(rows, nonzero);
}

TEST(FiniteForm, EqualsLatticeForm) {
  for (auto [R, Q] : std::vector<std::pair<i64, i64>>{{5, 3}, {1, 15}, {15, 1}}) {
    auto f = finite_form(V(), U(), R, Q);
    auto l = lattice_form(V(), U(), LatticeSymbolSpec::T_N(R * Q), Q);
    EXPECT_LE(std::abs(f.value - l.value), 1e-8 * (1 + std::abs(l.value))) << R << "," << Q;
  }
  auto f = finite_form(Vg(), Ug(), 5, 3);
  EXPECT_LE(std::abs(f.value - dual_oracle(Vg(), Ug(), 15, 3)), 1e-10);
}

TEST(ArithmeticSide, EqualsLatticeForm) {
  for (auto [Q, R] : std::vector<std::pair<i64, i64>>{{1, 1}, {3, 5}, {5, 3}}) {
    auto l = lattice_form(V(), U(), LatticeSymbolSpec::T_N(R * Q), Q);
    auto a = arithmetic_side(V(), U(), R, Q);
    EXPECT_LE(std::abs(l.value - a.value), 1e-8 * std::abs(a.value)) << Q << "," << R;
  }
  for (i64 Q : {1, 3, 15}) {
    auto l = lattice_form(V(), U(), LatticeSymbolSpec::T_inf_over_2(), Q);
    auto a = arithmetic_side_inf_odd(V(), U(), Q);
    EXPECT_LE(std::abs(l.value - a.value), 1e-8 * std::abs(a.value)) << Q;
  }
}

TEST(ArithmeticSide, FlattenedPairVanishes) {
  Fn v = fn(canonical_v(true)), u = fn(canonical_u(true));
  // rounding noise only
  EXPECT_LE(std::abs(arithmetic_side(v, u, 1, 1).value), 1e-14);
  EXPECT_LE(std::abs(arithmetic_side_inf_odd(v, u, 15).value), 1e-14);
}

TEST(ArithmeticSide, SupportClassEnforced) {
  EXPECT_TRUE(support_class_ok(V(), U()));
  EXPECT_FALSE(support_class_ok(Vg(), Ug()));
  EXPECT_THROW(arithmetic_side(Vg(), Ug(), 1, 1), std::domain_error);
}

TEST(FormLemma83, EqualsLatticeFormAtQOne) {
  for (i64 N : {1, 3, 15}) {
    auto a = form_lemma83(Vg(), Ug(), N);
    auto b = lattice_form(Vg(), Ug(), LatticeSymbolSpec::T_N(N), 1);
    EXPECT_LE(std::abs(a.value - b.value), 1e-10) << N;
  }
}

TEST(Reflection, ExhaustiveAndSampled) {
  EXPECT_EQ(check_thm81(1, 3, 0).max_discrepancy, 0);
  EXPECT_EQ(check_thm81(3, 1, 0).max_discrepancy, 0);
  EXPECT_EQ(check_thm81(5, 3, 0).max_discrepancy, 0);
  auto r = check_thm81(19, 3, 10000);
  EXPECT_EQ(r.max_discrepancy, 0);
  EXPECT_EQ(r.checked, 10000);
}

TEST(Reflection, DilatedFormWithSign) {
  auto r = check_eq82(V(), U(), 19, 3);
  EXPECT_LE(r.residual, 1e-8);
  EXPECT_GT(r.residual_without_sign, 1e-3);
  EXPECT_THROW(check_eq82(V(), U(), 5, 3), std::invalid_argument);
}
