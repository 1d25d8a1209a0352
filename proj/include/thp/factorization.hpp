#pragma once

// Wiener-Hopf factorization, the signed factorization of matching functions,
// and the antisymmetric factorization with the (1 +- t) weights.

#include <cmath>
#include <string>

#include "thp/symbol.hpp"

namespace thp {

/// g = minus * t^index_m * plus with minus(inf) = 1.
struct WHFactorization {
  RationalSymbol minus;
  int index_m = 0;
  RationalSymbol plus;
};

/// g = sigma * plus * t^(-index_n) * tilde(plus)^(-1).
struct MatchingFactorization {
  int sigma = 1;
  int index_n = 0;
  RationalSymbol plus;
};

/// g = plus * t^(2 half_index) * tilde(plus)^(-1).
struct AntisymFactorization {
  RationalSymbol plus;
  int half_index = 0;
};

inline constexpr double signature_snap = 1e-6;

inline WHFactorization wiener_hopf(const RationalSymbol& g) {
  g.require_invertible("Wiener-Hopf factorization needs a symbol invertible on the circle");
  std::vector<cplx> zin, zout, pin, pout;
  for (const auto& z : g.zeros()) (std::abs(z) < 1.0 ? zin : zout).push_back(z);
  for (const auto& p : g.poles()) (std::abs(p) < 1.0 ? pin : pout).push_back(p);
  const int shift = static_cast<int>(zin.size()) - static_cast<int>(pin.size());
  WHFactorization f;
  // (t - z) = t (1 - z/t) for |z| < 1; the outside roots keep the original gain,
  // so plus(0) = gain * prod(-z) / prod(-p).
  f.minus = RationalSymbol::zpk(1.0, -shift, zin, pin);
  f.index_m = g.power() + shift;
  f.plus = RationalSymbol::zpk(g.gain(), 0, zout, pout);
  return f;
}

inline bool is_matching_function(const RationalSymbol& g, double eps = tol::match) {
  return approx_equal(g, g.tilde().inverse(), eps);
}

inline MatchingFactorization matching_factorization(const RationalSymbol& g) {
  if (!is_matching_function(g)) fail(ErrorCode::NotMatchingFunction, "g * tilde(g) is not identically 1");
  const auto wh = wiener_hopf(g);
  const cplx s = wh.plus(0.0);
  int sigma = 0;
  if (std::abs(s - 1.0) <= signature_snap) sigma = 1;
  else if (std::abs(s + 1.0) <= signature_snap) sigma = -1;
  else fail(ErrorCode::SignatureNotUnimodular, "plus factor at 0 is not +-1");
  const auto expected_minus = static_cast<double>(sigma) * wh.plus.tilde().inverse();
  if (!approx_equal(wh.minus, expected_minus))
    fail(ErrorCode::NotMatchingFunction, "minus factor differs from sigma / tilde(plus)");
  // Fix the signature exactly; the remaining gain error stays within the snap.
  const RationalSymbol plus = RationalSymbol::zpk(wh.plus.gain() * (static_cast<double>(sigma) / s), 0,
                                                  wh.plus.zeros(), wh.plus.poles());
  return {sigma, -wh.index_m, plus};
}

namespace detail {

inline bool poles_in_closed_disk(const RationalSymbol& g) {
  if (g.power() < 0) return true;
  for (const auto& p : g.poles())
    if (std::abs(p) <= 1.0 + tol::circle) return true;
  return false;
}

}  // namespace detail

inline AntisymFactorization antisymmetric_factorization(const RationalSymbol& g) {
  const auto mf = matching_factorization(g);
  const int w = -mf.index_n;
  const bool odd = (w % 2) != 0;
  const auto one_plus_t = RationalSymbol::zpk(1.0, 0, {-1.0}, {});
  const auto one_minus_t = RationalSymbol::zpk(-1.0, 0, {1.0}, {});
  AntisymFactorization f;
  if (mf.sigma == 1 && !odd) {
    f = {mf.plus, w / 2};
  } else if (mf.sigma == 1) {
    f = {mf.plus / one_plus_t, (w + 1) / 2};
  } else if (!odd) {
    f = {mf.plus * one_minus_t / one_plus_t, w / 2};
  } else {
    f = {mf.plus * one_minus_t, (w - 1) / 2};
  }
  const auto rebuilt = f.plus * RationalSymbol::monomial(2 * f.half_index) / f.plus.tilde();
  if (!approx_equal(rebuilt, g))
    fail(ErrorCode::NotMatchingFunction, "antisymmetric factorization does not reproduce the symbol");
  if (detail::poles_in_closed_disk(one_plus_t * f.plus) || detail::poles_in_closed_disk(one_minus_t / f.plus))
    fail(ErrorCode::NotMatchingFunction, "antisymmetric plus factor violates the weight conditions");
  return f;
}

}  // namespace thp
