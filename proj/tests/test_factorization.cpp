#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "thp/pair.hpp"

using namespace thp;

namespace {

constexpr double gamma_ = 0.5;

RationalSymbol gamma_a(double g = gamma_) {
  return RationalSymbol::one_minus_tinv(g) / RationalSymbol::one_minus_t(g);
}

RationalSymbol random_symbol(std::mt19937_64& rng, int max_roots = 3) {
  std::uniform_real_distribution<double> arg(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> r_in(0.05, 0.85), r_out(1.2, 5.0), u(-1.0, 1.0);
  std::uniform_int_distribution<int> count(0, max_roots), pw(-2, 2), coin(0, 1);
  std::vector<cplx> z, p;
  for (int k = count(rng); k > 0; --k) z.push_back(std::polar(coin(rng) ? r_in(rng) : r_out(rng), arg(rng)));
  for (int k = count(rng); k > 0; --k) p.push_back(std::polar(coin(rng) ? r_in(rng) : r_out(rng), arg(rng)));
  return make_symbol(ZpkSpec{cplx(u(rng), u(rng)) + cplx(1.5, 0.0), pw(rng), z, p});
}

}  // namespace

TEST(WienerHopf, GeometricExample) {
  auto f = wiener_hopf(gamma_a());
  EXPECT_TRUE(approx_equal(f.minus, RationalSymbol::one_minus_tinv(gamma_)));
  EXPECT_EQ(f.index_m, 0);
  EXPECT_TRUE(approx_equal(f.plus, RationalSymbol::one_minus_t(gamma_).inverse()));
}

TEST(WienerHopf, MonomialAndSquare) {
  auto f = wiener_hopf(RationalSymbol::monomial(-2));
  EXPECT_TRUE(f.minus.is_constant());
  EXPECT_EQ(f.index_m, -2);
  EXPECT_TRUE(f.plus.is_constant());
  auto a = gamma_a();
  auto d = a * a * RationalSymbol::monomial(-2);
  auto fd = wiener_hopf(d);
  auto m = RationalSymbol::one_minus_tinv(gamma_);
  EXPECT_TRUE(approx_equal(fd.minus, m * m));
  EXPECT_EQ(fd.index_m, -2);
  auto p = RationalSymbol::one_minus_t(gamma_);
  EXPECT_TRUE(approx_equal(fd.plus, (p * p).inverse()));
}

TEST(WienerHopf, RoundTripAndFactorLocation) {
  std::mt19937_64 rng(0x5EED);
  for (int trial = 0; trial < 200; ++trial) {
    auto g = random_symbol(rng);
    auto f = wiener_hopf(g);
    EXPECT_TRUE(approx_equal(f.minus * RationalSymbol::monomial(f.index_m) * f.plus, g));
    EXPECT_EQ(-f.index_m, -winding_number(g));
    for (const auto& r : f.plus.zeros()) EXPECT_GT(std::abs(r), 1.0);
    for (const auto& r : f.plus.poles()) EXPECT_GT(std::abs(r), 1.0);
    for (const auto& r : f.minus.zeros()) EXPECT_LT(std::abs(r), 1.0);
    for (const auto& r : f.minus.poles()) EXPECT_LT(std::abs(r), 1.0);
    EXPECT_EQ(f.plus.power(), 0);
    // minus(inf) = 1: numerator and denominator degrees balance after t^power.
    EXPECT_EQ(f.minus.power() + static_cast<int>(f.minus.zeros().size()) - static_cast<int>(f.minus.poles().size()), 0);
    EXPECT_NEAR(std::abs(f.minus.gain() - 1.0), 0.0, 1e-15);
  }
}

TEST(MatchingFactorization, Constants) {
  auto one = matching_factorization(RationalSymbol::constant(1.0));
  EXPECT_EQ(one.sigma, 1);
  EXPECT_EQ(one.index_n, 0);
  auto neg = matching_factorization(RationalSymbol::constant(-1.0));
  EXPECT_EQ(neg.sigma, -1);
  EXPECT_NEAR(std::abs(neg.plus(0.0) + 1.0), 0.0, 1e-15);
}

TEST(MatchingFactorization, GeometricD) {
  auto a = gamma_a();
  auto f = matching_factorization(a * a * RationalSymbol::monomial(-2));
  EXPECT_EQ(f.sigma, 1);
  EXPECT_EQ(f.index_n, 2);
  auto p = RationalSymbol::one_minus_t(gamma_);
  EXPECT_TRUE(approx_equal(f.plus, (p * p).inverse()));
}

TEST(MatchingFactorization, RejectsNonMatching) {
  try {
    matching_factorization(RationalSymbol::one_minus_t(0.5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotMatchingFunction);
  }
}

TEST(MatchingFactorization, RandomMatchingFunctions) {
  std::mt19937_64 rng(0x5EED);
  for (int trial = 0; trial < 100; ++trial) {
    auto h = random_symbol(rng);
    const double s = trial % 2 ? -1.0 : 1.0;
    auto g = s * RationalSymbol::monomial(trial % 5 - 2) * h / h.tilde();
    auto f = matching_factorization(g);
    auto rebuilt = static_cast<double>(f.sigma) * f.plus * RationalSymbol::monomial(-f.index_n) / f.plus.tilde();
    EXPECT_TRUE(approx_equal(rebuilt, g));
    EXPECT_EQ(f.index_n, -winding_number(g));
    EXPECT_EQ(matching_factorization(-g).sigma, -f.sigma);
    if (f.index_n == 0) {
      EXPECT_NEAR(std::abs(g(1.0) - static_cast<double>(f.sigma)), 0.0, 1e-9);
    }
  }
}

TEST(Antisymmetric, TableExamples) {
  auto t2 = antisymmetric_factorization(RationalSymbol::monomial(2));
  EXPECT_TRUE(approx_equal(t2.plus, RationalSymbol::constant(1.0)));
  EXPECT_EQ(t2.half_index, 1);
  auto tinv = antisymmetric_factorization(RationalSymbol::monomial(-1));
  EXPECT_TRUE(approx_equal(tinv.plus, RationalSymbol::zpk(1.0, 0, {}, {-1.0})));
  EXPECT_EQ(tinv.half_index, 0);
  auto neg = antisymmetric_factorization(RationalSymbol::constant(-1.0));
  EXPECT_TRUE(approx_equal(neg.plus, RationalSymbol::zpk(1.0, 0, {1.0}, {-1.0})));
  EXPECT_EQ(neg.half_index, 0);
}

TEST(Antisymmetric, AllBranchesReproduce) {
  std::mt19937_64 rng(0x5EED);
  for (int trial = 0; trial < 80; ++trial) {
    auto h = random_symbol(rng, 2);
    const double s = (trial / 2) % 2 ? -1.0 : 1.0;
    auto g = s * RationalSymbol::monomial(trial % 7 - 3) * h / h.tilde();
    auto f = antisymmetric_factorization(g);
    auto rebuilt = f.plus * RationalSymbol::monomial(2 * f.half_index) / f.plus.tilde();
    EXPECT_TRUE(approx_equal(rebuilt, g)) << trial;
    const auto weighted = RationalSymbol::zpk(1.0, 0, {-1.0}, {}) * f.plus;
    const auto weighted_inv = RationalSymbol::zpk(-1.0, 0, {1.0}, {}) / f.plus;
    for (const auto& p : weighted.poles()) EXPECT_GT(std::abs(p), 1.0);
    for (const auto& p : weighted_inv.poles()) EXPECT_GT(std::abs(p), 1.0);
  }
}

TEST(SubordinatedPair, Examples) {
  auto a = gamma_a();
  auto aa = subordinated_pair(a, a);
  EXPECT_TRUE(approx_equal(aa.c, RationalSymbol::constant(1.0)));
  EXPECT_TRUE(approx_equal(aa.d, a / a.tilde()));

  auto ge = subordinated_pair(a, a * RationalSymbol::monomial(-2));
  EXPECT_TRUE(approx_equal(ge.c, RationalSymbol::monomial(2)));
  EXPECT_TRUE(approx_equal(ge.d, a * a * RationalSymbol::monomial(-2)));
  EXPECT_EQ(ge.kappa1, -2);
  EXPECT_EQ(ge.kappa2, 2);

  auto simple = subordinated_pair(RationalSymbol::constant(1.0), RationalSymbol::monomial(1));
  EXPECT_TRUE(approx_equal(simple.c, RationalSymbol::monomial(-1)));
  EXPECT_TRUE(approx_equal(simple.d, RationalSymbol::monomial(1)));
  EXPECT_EQ(simple.kappa1, 1);
  EXPECT_EQ(simple.kappa2, -1);
  EXPECT_EQ(simple.sigma_c, 1);
  EXPECT_EQ(simple.sigma_d, 1);
}

TEST(SubordinatedPair, RejectsNonMatching) {
  try {
    subordinated_pair(RationalSymbol::one_minus_t(0.5), RationalSymbol::constant(1.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotMatching);
  }
}

TEST(SubordinatedPair, AdjointSwapsIndicesAndKeepsSignatures) {
  std::mt19937_64 rng(0x5EED);
  for (int trial = 0; trial < 40; ++trial) {
    auto a = random_symbol(rng, 2);
    auto g = random_symbol(rng, 2);
    auto b = a * RationalSymbol::monomial(trial % 5 - 2) * g / g.tilde() * cplx(trial % 3 ? 1.0 : -1.0);
    auto m = subordinated_pair(a, b);
    auto adj = adjoint(m);
    EXPECT_EQ(adj.kappa1, -m.kappa2);
    EXPECT_EQ(adj.kappa2, -m.kappa1);
    EXPECT_TRUE(approx_equal(adj.c, m.d.bar()));
    EXPECT_TRUE(approx_equal(adj.d, m.c.bar()));
    EXPECT_EQ(adj.sigma_c, m.sigma_d);
    EXPECT_EQ(adj.sigma_d, m.sigma_c);
    EXPECT_EQ(m.kappa1 + m.kappa2, -2 * winding_number(a));
  }
}
