#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "thp/symbol.hpp"

using namespace thp;

namespace {

// Trapezoidal quadrature on N equispaced points; aliasing error ~ rho^N.
cplx dft_coefficient(const RationalSymbol& g, int n, int N = 4096) {
  cplx acc{};
  for (int k = 0; k < N; ++k) {
    const double th = 2.0 * std::numbers::pi * k / N;
    const cplx t = std::polar(1.0, th);
    acc += g(t) * std::polar(1.0, -n * th);
  }
  return acc / static_cast<double>(N);
}

cplx random_root(std::mt19937_64& rng, bool inside) {
  std::uniform_real_distribution<double> arg(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> r_in(0.1, 0.8), r_out(1.3, 4.0);
  return std::polar(inside ? r_in(rng) : r_out(rng), arg(rng));
}

}  // namespace

TEST(Symbol, ZerosAndPolesAtOriginFoldIntoPower) {
  auto g = RationalSymbol::zpk(2.0, 1, {0.0, 0.5}, {0.0, 0.0, 3.0});
  EXPECT_EQ(g.power(), 0);
  EXPECT_EQ(g.zeros().size(), 1u);
  EXPECT_EQ(g.poles().size(), 1u);
}

TEST(Symbol, CancellingPairsAreRemoved) {
  auto g = RationalSymbol::zpk(1.0, 0, {0.5, 2.0}, {0.5 + 1e-12, 3.0});
  EXPECT_EQ(g.zeros().size(), 1u);
  EXPECT_NEAR(std::abs(g.zeros()[0] - 2.0), 0.0, 1e-15);
}

TEST(Symbol, RejectsPoleOnCircleAndZeroGain) {
  try {
    make_symbol(ZpkSpec{1.0, 0, {}, {std::polar(1.0, 0.3)}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PoleOnCircle);
  }
  try {
    make_symbol(ZpkSpec{0.0, 0, {}, {}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroGain);
  }
}

TEST(Symbol, LaurentInputMatchesZpk) {
  // (1 - 0.5/t) / (1 - 0.25 t)
  auto g = laurent({{0, 1.0}, {-1, -0.5}}, {{0, 1.0}, {1, -0.25}});
  auto h = RationalSymbol::one_minus_tinv(0.5) / RationalSymbol::one_minus_t(0.25);
  EXPECT_TRUE(approx_equal(g, h));
}

TEST(Symbol, TildeAndBarOfMonomial) {
  const cplx i{0.0, 1.0};
  auto g = RationalSymbol::monomial(1, i);
  auto b = g.bar();
  EXPECT_TRUE(approx_equal(b, RationalSymbol::monomial(-1, -i)));
  EXPECT_TRUE(approx_equal(g.tilde(), RationalSymbol::monomial(-1, i)));
}

TEST(Symbol, InvolutionsMatchPointValues) {
  std::mt19937_64 rng(0x5EED);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<cplx> z, p;
    for (int k = 0; k < 3; ++k) z.push_back(random_root(rng, k % 2 == 0));
    for (int k = 0; k < 2; ++k) p.push_back(random_root(rng, k % 2 == 1));
    auto g = make_symbol(ZpkSpec{cplx(0.7, -0.4), trial % 3 - 1, z, p});
    EXPECT_TRUE(approx_equal(g.tilde().tilde(), g));
    EXPECT_TRUE(approx_equal(g.bar().bar(), g));
    for (double th : {0.1, 1.7, 3.0, 5.5}) {
      const cplx t = std::polar(1.0, th);
      EXPECT_NEAR(std::abs(g.tilde()(t) - g(1.0 / t)), 0.0, 1e-10 * std::abs(g(1.0 / t)) + 1e-12);
      EXPECT_NEAR(std::abs(g.bar()(t) - std::conj(g(t))), 0.0, 1e-10 * std::abs(g(t)) + 1e-12);
    }
  }
}

TEST(Symbol, WindingCountsInsideRoots) {
  auto g = make_symbol(ZpkSpec{1.0, -2, {0.5, 0.3, 3.0}, {0.2, 5.0}});
  EXPECT_EQ(winding_number(g), -2 + 2 - 1);
  try {
    winding_number(make_symbol(ZpkSpec{1.0, 0, {cplx(0.0, 1.0)}, {}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroOnCircle);
  }
}

TEST(Symbol, FourierCoefficientsMatchQuadrature) {
  std::mt19937_64 rng(0x5EED);
  for (int trial = 0; trial < 15; ++trial) {
    std::vector<cplx> z, p;
    const int nz = trial % 4, np = 1 + trial % 3;
    for (int k = 0; k < nz; ++k) z.push_back(random_root(rng, k % 2 == 1));
    for (int k = 0; k < np; ++k) p.push_back(random_root(rng, k % 2 == 0));
    if (trial % 5 == 0) p.push_back(p.front());  // double pole
    auto g = make_symbol(ZpkSpec{cplx(1.2, 0.3), trial % 5 - 2, z, p});
    auto w = fourier_coefficients(g, -12, 12);
    const double scale = std::max(1.0, w.sup_norm());
    for (int n = -12; n <= 12; ++n)
      EXPECT_NEAR(std::abs(w[n] - dft_coefficient(g, n)), 0.0, 1e-11 * scale) << "trial " << trial << " n " << n;
  }
}

TEST(Symbol, GeometricExampleCoefficients) {
  // (1 - gamma/t)/(1 - gamma t): coefficient 1 at 0 less gamma^2 correction.
  const double gamma = 0.5;
  auto a = RationalSymbol::one_minus_tinv(gamma) / RationalSymbol::one_minus_t(gamma);
  auto w = fourier_coefficients(a, -3, 5);
  EXPECT_NEAR(std::abs(w[-1] - (-gamma)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(w[0] - (1.0 - gamma * gamma)), 0.0, 1e-14);
  for (int n = 1; n <= 5; ++n)
    EXPECT_NEAR(std::abs(w[n] - (1.0 - gamma * gamma) * std::pow(gamma, n)), 0.0, 1e-14);
  EXPECT_EQ(std::abs(w[-2]), 0.0);
}

TEST(Symbol, SupportCoversTail) {
  auto g = make_symbol(ZpkSpec{1.0, 1, {0.3}, {0.6, 1.8}});
  auto s = coefficient_support(g);
  EXPECT_LE(s.tail_l1, 1e-13);
  auto wide = fourier_coefficients(g, s.lo - 200, s.hi + 200);
  double outside = 0.0;
  for (int n = wide.lo; n <= wide.hi; ++n)
    if (n < s.lo || n > s.hi) outside += std::abs(wide[n]);
  EXPECT_LE(outside, 1e-13);
  EXPECT_LE(outside, s.tail_l1 * 1.0001 + 1e-300);
}

TEST(Symbol, LaurentPolynomialSupportIsExact) {
  auto g = laurent({{-2, 1.0}, {0, 3.0}, {3, -1.0}});
  auto s = coefficient_support(g);
  EXPECT_EQ(s.lo, -2);
  EXPECT_EQ(s.hi, 3);
  EXPECT_EQ(s.tail_l1, 0.0);
}

TEST(Symbol, SupportCoversRepeatedPoles) {
  // Only higher-order poles on each side: (1 - 0.5/t)^-2 and (1 - 0.4 t)^-3.
  const auto inner = RationalSymbol::one_minus_tinv(0.5);
  const auto outer = RationalSymbol::one_minus_t(0.4);
  for (const auto& g : {(inner * inner).inverse(), (outer * outer * outer).inverse(),
                        (inner * inner * outer * outer).inverse() * RationalSymbol::monomial(3)}) {
    auto s = coefficient_support(g);
    EXPECT_LE(s.tail_l1, 1e-13);
    auto wide = fourier_coefficients(g, s.lo - 300, s.hi + 300);
    double inside = 0.0, outside = 0.0;
    for (int n = wide.lo; n <= wide.hi; ++n) (n < s.lo || n > s.hi ? outside : inside) += std::abs(wide[n]);
    EXPECT_GT(inside, 1.0);
    EXPECT_LE(outside, 1e-13);
  }
}
