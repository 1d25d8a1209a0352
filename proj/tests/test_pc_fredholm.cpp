#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "thp/classify.hpp"
#include "thp/pc_fredholm.hpp"

using namespace thp;

namespace {

constexpr double pi = std::numbers::pi;

PCSymbol i_minus_i() { return PCSymbol::piecewise_constant({{0.0, cplx(0.0, 1.0)}, {pi, cplx(0.0, -1.0)}}); }

RationalSymbol random_symbol(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> arg(0.0, 2.0 * pi);
  std::uniform_real_distribution<double> r_in(0.05, 0.7), r_out(1.4, 5.0), u(-1.0, 1.0);
  std::uniform_int_distribution<int> count(0, 2), coin(0, 1);
  std::vector<cplx> z, p;
  for (int k = count(rng); k > 0; --k) z.push_back(std::polar(coin(rng) ? r_in(rng) : r_out(rng), arg(rng)));
  for (int k = count(rng); k > 0; --k) p.push_back(std::polar(coin(rng) ? r_in(rng) : r_out(rng), arg(rng)));
  return make_symbol(ZpkSpec{cplx(u(rng), u(rng)) + cplx(1.5, 0.0), 0, z, p});
}

}  // namespace

TEST(Arc, EmptyWhenEndpointsCoincide) { EXPECT_TRUE(arc_points(1.0, 1.0, 0.3, 16).empty()); }

TEST(Arc, HalfIsSegment) {
  auto pts = arc_points(0.0, 1.0, 0.5, 33);
  for (std::size_t k = 1; k + 1 < pts.size(); ++k) {
    EXPECT_NEAR(pts[k].imag(), 0.0, 1e-14);
    EXPECT_GT(pts[k].real(), 0.0);
    EXPECT_LT(pts[k].real(), 1.0);
  }
}

TEST(Arc, DefiningRelation) {
  auto pts = arc_points(0.0, 1.0, 0.25, 64);
  ASSERT_EQ(pts.size(), 64u);
  EXPECT_EQ(pts.front(), cplx(0.0));
  EXPECT_EQ(pts.back(), cplx(1.0));
  for (std::size_t k = 1; k + 1 < pts.size(); ++k) {
    const double turns = std::arg((pts[k] - 0.0) / (pts[k] - 1.0)) / (2.0 * pi);
    EXPECT_LT(frac_distance(turns - 0.25), 1e-10);
  }
}

TEST(Conditions, ContinuousMonomial) {
  auto c = PCSymbol::from_rational(RationalSymbol::monomial(-2));
  for (double p : {1.5, 2.0, 3.0, 7.0}) EXPECT_TRUE(fredholm_conditions(c, c, p).fredholm);
}

TEST(Conditions, PiecewiseConstantIMinusI) {
  auto c = i_minus_i();
  auto one = PCSymbol::from_rational(RationalSymbol::constant(1.0));
  auto v2 = fredholm_conditions(c, one, 2.0);
  EXPECT_FALSE(v2.fredholm);
  // c-(1) = -i gives 3/4 against 1/2 + 1/4; c-(-1) = i gives 1/4 against 1/4.
  auto bad = v2.violated();
  ASSERT_EQ(bad.size(), 2u);
  EXPECT_EQ(bad[0].name, "endpoint+1");
  EXPECT_EQ(bad[0].function, "c");
  EXPECT_NEAR(bad[0].value, -0.25, 1e-15);
  EXPECT_EQ(bad[1].name, "endpoint-1");
  EXPECT_NEAR(bad[1].value, 0.25, 1e-15);
  auto v3 = fredholm_conditions(c, one, 3.0);
  EXPECT_TRUE(v3.fredholm);
  for (const auto& chk : v3.checks) EXPECT_GT(chk.distance, 0.05);
}

TEST(Conditions, PerturbationFlipsOneClause) {
  // A jump on the upper half circle whose ratio sits on the excluded ray 1/p.
  const double p = 2.0;
  auto build = [](double phase) {
    const cplx v = std::polar(1.0, phase);
    return PCSymbol::piecewise_constant(
        {{0.0, 1.0}, {pi / 2, v}, {pi, 1.0 / v}, {3 * pi / 2, 1.0}});
  };
  auto one = PCSymbol::from_rational(RationalSymbol::constant(1.0));
  // c-(tau) / c+(tau) = 1 / v, so arg = -phase; -phase = 2 pi / p mod 2 pi.
  auto on = fredholm_conditions(build(-pi), one, p);
  auto off = fredholm_conditions(build(-pi + 0.1), one, p);
  int jumps_on = 0, jumps_off = 0;
  for (const auto& chk : on.checks)
    if (chk.name == "jump" && chk.violated) ++jumps_on;
  for (const auto& chk : off.checks)
    if (chk.name == "jump" && chk.violated) ++jumps_off;
  EXPECT_EQ(jumps_on, 1);
  EXPECT_EQ(jumps_off, 0);
  EXPECT_EQ(on.violated().size(), off.violated().size() + 1);
}

TEST(Index, MonomialExample) {
  auto c = PCSymbol::from_rational(RationalSymbol::monomial(-2));
  EXPECT_EQ(sharp_curve(c, 2.0).winding, -1);
  EXPECT_EQ(be_index(c, c, 2.0), 0);
}

TEST(Index, TrivialPair) {
  auto one = PCSymbol::from_rational(RationalSymbol::constant(1.0));
  EXPECT_EQ(be_index(one, one, 2.0), 0);
}

TEST(Index, GammaExample) {
  auto a = RationalSymbol::one_minus_tinv(0.5) / RationalSymbol::one_minus_t(0.5);
  auto m = subordinated_pair(a, a * RationalSymbol::monomial(-2));
  EXPECT_EQ(be_index(PCSymbol::from_rational(m.c), PCSymbol::from_rational(m.d.tilde()), 2.0), 0);
}

TEST(Index, IMinusIAtThree) {
  auto c = i_minus_i();
  auto one = PCSymbol::from_rational(RationalSymbol::constant(1.0));
  ASSERT_TRUE(fredholm_conditions(c, one, 3.0).fredholm);
  const int coarse = be_index(c, one, 3.0);
  const int fine = be_index(c, one, 3.0, {4096, 512});
  EXPECT_EQ(coarse, fine);
}

TEST(Index, AgreesWithKernelDimensionsOnRationalPairs) {
  std::mt19937_64 rng(0x5EED);
  std::uniform_int_distribution<int> pw(-3, 3), coin(0, 1);
  int checked = 0;
  while (checked < 25) {
    auto a = random_symbol(rng) * RationalSymbol::monomial(pw(rng) / 2);
    auto h = random_symbol(rng);
    MatchingPairAnalysis m;
    try {
      m = subordinated_pair(a, a * RationalSymbol::monomial(pw(rng)) * h / h.tilde() * cplx(coin(rng) ? 1.0 : -1.0));
    } catch (const Error&) {
      continue;
    }
    ++checked;
    const int index = static_cast<int>(kernel(m).size()) - static_cast<int>(cokernel(m).size());
    auto c = PCSymbol::from_rational(m.c), dt = PCSymbol::from_rational(m.d.tilde());
    for (double p : {1.5, 2.0, 3.0}) {
      ASSERT_TRUE(fredholm_conditions(c, dt, p).fredholm);
      EXPECT_EQ(be_index(c, dt, p), index) << checked << " p=" << p;
      EXPECT_EQ(be_index(c, dt, p, {4096, 512}), be_index(c, dt, p));
    }
  }
}

TEST(Index, CurveThroughOriginIsReported) {
  auto c = i_minus_i();
  try {
    sharp_curve(c, 2.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CurveThroughOrigin);
  }
}
