#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "thp/operators.hpp"

using namespace thp;
using E = OperatorExpr;

namespace {

CoeffWindow random_window(std::mt19937_64& rng, int lo, int hi) {
  std::normal_distribution<double> n01;
  CoeffWindow w(lo, hi);
  for (auto& z : w.coeffs) z = cplx(n01(rng), n01(rng));
  return w;
}

double max_diff(const CoeffWindow& x, const CoeffWindow& y, int from, int to) {
  double m = 0.0;
  for (int n = from; n <= to; ++n) m = std::max(m, std::abs(x.at(n) - y.at(n)));
  return m;
}

RationalSymbol decay_symbol(double rho, double phase) {
  // Poles at rho and 1/rho give coefficients decaying like rho^|n| both ways.
  return make_symbol(ZpkSpec{cplx(1.0, 0.2), 0, {std::polar(0.3, phase), std::polar(2.5, -phase)},
                             {std::polar(rho, phase + 1.0), std::polar(1.0 / rho, phase - 2.0)}});
}

}  // namespace

TEST(Truncate, ShiftMatrix) {
  auto m = truncate(RationalSymbol::monomial(1), std::nullopt, 3).entries();
  for (int k = 0; k < 3; ++k)
    for (int j = 0; j < 3; ++j) EXPECT_EQ(m(k, j), cplx(k == j + 1 ? 1.0 : 0.0));
}

TEST(Truncate, HankelOfT) {
  auto m = truncate(std::nullopt, RationalSymbol::monomial(1), 2).entries();
  EXPECT_EQ(m(0, 0), cplx(1.0));
  EXPECT_EQ(m(0, 1), cplx(0.0));
  EXPECT_EQ(m(1, 0), cplx(0.0));
  EXPECT_EQ(m(1, 1), cplx(0.0));
}

TEST(Truncate, IdentityWhenHankelSymbolConstant) {
  auto one = RationalSymbol::constant(1.0);
  auto m = truncate(one, one, 7).entries();
  EXPECT_NEAR((m - Eigen::MatrixXcd::Identity(7, 7)).norm(), 0.0, 1e-15);
}

TEST(Truncate, TallSectionExtendsRows) {
  auto g = decay_symbol(0.5, 0.4);
  auto tall = truncate(g, g.tilde(), 10, 6);
  auto big = truncate(g, g.tilde(), 16);
  EXPECT_EQ(tall.rows(), 16);
  EXPECT_NEAR((tall.tall - big.entries().leftCols(10)).norm(), 0.0, 1e-14);
}

TEST(Apply, ToeplitzOfTInverseKillsConstants) {
  auto y = apply(E::toeplitz(RationalSymbol::monomial(-1)), CoeffWindow::unit(0), 16);
  EXPECT_EQ(y.sup_norm(), 0.0);
}

TEST(Apply, ShiftCompositionIsIdentityOnAnalytic) {
  std::mt19937_64 rng(0x5EED);
  auto x = random_window(rng, 0, 40);
  auto e = E::toeplitz(RationalSymbol::monomial(-1)) * E::toeplitz(RationalSymbol::monomial(1));
  auto y = apply(e, x, 64);
  EXPECT_EQ(max_diff(x, y, -64, 64), 0.0);
}

TEST(Apply, FlipIsInvolution) {
  std::mt19937_64 rng(0x5EED);
  auto x = random_window(rng, -20, 30);
  auto once = apply(E::flip(), x, 40);
  EXPECT_EQ(once[-31], x[30]);
  auto twice = apply(E::flip(), once, 40);
  EXPECT_EQ(max_diff(x, twice, -40, 40), 0.0);
}

TEST(Apply, ProjectionsSplitTheSequence) {
  std::mt19937_64 rng(0x5EED);
  auto x = random_window(rng, -10, 10);
  auto y = apply(E::proj_p() + E::proj_q(), x, 12);
  EXPECT_EQ(max_diff(x, y, -12, 12), 0.0);
  auto p = apply(E::proj_p(), x, 12);
  EXPECT_EQ(p[-1], cplx{});
  EXPECT_EQ(p[0], x[0]);
}

TEST(Apply, CoefficientFunctional) {
  std::mt19937_64 rng(0x5EED);
  auto x = random_window(rng, -5, 9);
  for (int j : {0, 1, 4}) {
    auto y = apply(coefficient_functional(j), x, 12);
    EXPECT_EQ(y[0], x[j]);
    EXPECT_EQ(y.sup_norm(1, 12), 0.0);
    EXPECT_EQ(y.sup_norm(-12, -1), 0.0);
  }
}

TEST(Apply, MatchesDenseTruncation) {
  std::mt19937_64 rng(0x5EED);
  auto a = decay_symbol(0.6, 0.2), b = decay_symbol(0.4, 1.1);
  const int N = 50;
  auto dense = truncate(a, b, N).entries();
  auto x = random_window(rng, 0, N - 1);
  Eigen::VectorXcd xv(N);
  for (int j = 0; j < N; ++j) xv(j) = x[j];
  Eigen::VectorXcd ref = dense * xv;
  auto y = apply(toeplitz_plus_hankel(a, b), x, N);
  for (int k = 0; k < N; ++k) EXPECT_NEAR(std::abs(y[k] - ref(k)), 0.0, 1e-12);
  EXPECT_LT(y.error_bound, 1e-10);
}

TEST(Apply, WidomIdentities) {
  std::mt19937_64 rng(0x5EED);
  auto a = decay_symbol(0.5, 0.3), b = decay_symbol(0.5, 2.0);
  auto x = random_window(rng, 0, 128);
  auto first = E::toeplitz(a * b) - E::toeplitz(a) * E::toeplitz(b) - E::hankel(a) * E::hankel(b.tilde());
  auto second = E::hankel(a * b) - E::toeplitz(a) * E::hankel(b) - E::hankel(a) * E::toeplitz(b.tilde());
  EXPECT_LT(apply(first, x, 128).sup_norm(-64, 64), 1e-8);
  EXPECT_LT(apply(second, x, 128).sup_norm(-64, 64), 1e-8);
}

TEST(ToeplitzInverse, MonomialAndPlusSymbol) {
  auto right = toeplitz_inverse_expr(RationalSymbol::monomial(-1), Side::right);
  auto y = apply(right, CoeffWindow::unit(3), 10);
  EXPECT_NEAR(std::abs(y[4] - 1.0), 0.0, 1e-15);
  auto g = RationalSymbol::one_minus_t(0.5);
  auto inv = toeplitz_inverse_expr(g, Side::two_sided);
  auto z = apply(inv, CoeffWindow::unit(0), 20);
  for (int n = 0; n <= 20; ++n) EXPECT_NEAR(std::abs(z[n] - std::pow(0.5, n)), 0.0, 1e-15);
}

TEST(ToeplitzInverse, WrongSide) {
  try {
    toeplitz_inverse_expr(RationalSymbol::monomial(1), Side::right);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::WrongIndexForSide);
  }
  EXPECT_THROW(toeplitz_inverse_expr(RationalSymbol::monomial(-1), Side::left), Error);
  EXPECT_THROW(toeplitz_inverse_expr(RationalSymbol::monomial(2), Side::two_sided), Error);
}

TEST(ToeplitzInverse, AgreesWithDenseSolve) {
  std::mt19937_64 rng(0x5EED);
  auto a = RationalSymbol::zpk(1.0, 0, {2.0}, {});
  auto g = a / a.tilde();
  auto e = toeplitz_inverse_expr(g, Side::two_sided);
  auto x = random_window(rng, 0, 63);
  auto y = apply(e, x, 128);
  auto back = apply(E::toeplitz(g) * e, x, 128);
  EXPECT_LT(max_diff(back, x, 0, 64), 1e-9);
  const int N = 256;
  auto dense = truncate(g, std::nullopt, N).entries();
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(N);
  for (int j = 0; j < 64; ++j) rhs(j) = x[j];
  Eigen::VectorXcd sol = dense.partialPivLu().solve(rhs);
  for (int k = 0; k < 64; ++k) EXPECT_NEAR(std::abs(sol(k) - y[k]), 0.0, 1e-9);
}

TEST(ToeplitzInverse, OneSidedInverses) {
  std::mt19937_64 rng(0x5EED);
  auto h = decay_symbol(0.5, 0.7);
  auto x = random_window(rng, 0, 40);
  const auto right_sym = h * RationalSymbol::monomial(-2);  // index 2
  auto r = toeplitz_inverse_expr(right_sym, Side::right);
  EXPECT_LT(max_diff(apply(E::toeplitz(right_sym) * r, x, 64), x, 0, 64), 1e-10);
  const auto left_sym = h * RationalSymbol::monomial(3);  // index -3
  auto l = toeplitz_inverse_expr(left_sym, Side::left);
  EXPECT_LT(max_diff(apply(l * E::toeplitz(left_sym), x, 64), x, 0, 64), 1e-10);
}

TEST(DenseSection, MatchesTruncation) {
  auto a = decay_symbol(0.5, 0.1), b = decay_symbol(0.3, 0.9);
  auto m = dense_section(toeplitz_plus_hankel(a, b), 20, 20);
  EXPECT_NEAR((m - truncate(a, b, 20).entries()).norm(), 0.0, 1e-12);
}
