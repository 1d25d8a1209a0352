#pragma once

// Matching pairs (a, b) with a * tilde(a) = b * tilde(b) and their subordinated
// pair c = a / b, d = a / tilde(b).

#include "thp/factorization.hpp"

namespace thp {

struct MatchingPairAnalysis {
  RationalSymbol a, b, c, d;
  int kappa1 = 0;  // ind T(c)
  int kappa2 = 0;  // ind T(d)
  int sigma_c = 1;
  int sigma_d = 1;
  MatchingFactorization fc, fd;
};

inline bool is_matching_pair(const RationalSymbol& a, const RationalSymbol& b, double eps = tol::match) {
  return approx_equal(a * a.tilde(), b * b.tilde(), eps);
}

inline MatchingPairAnalysis subordinated_pair(const RationalSymbol& a, const RationalSymbol& b) {
  if (!a.invertible_on_circle() || !b.invertible_on_circle())
    fail(ErrorCode::SymbolNotInvertibleOnCircle, "matching pair symbols must be invertible on the circle");
  if (!is_matching_pair(a, b)) fail(ErrorCode::NotMatching, "a * tilde(a) differs from b * tilde(b)");
  MatchingPairAnalysis m;
  m.a = a;
  m.b = b;
  m.c = a / b;
  m.d = a / b.tilde();
  m.fc = matching_factorization(m.c);
  m.fd = matching_factorization(m.d);
  m.kappa1 = -winding_number(m.c);
  m.kappa2 = -winding_number(m.d);
  m.sigma_c = m.fc.sigma;
  m.sigma_d = m.fd.sigma;
  return m;
}

/// The pair (bar a, bar tilde b), whose operator is the adjoint of T(a) + H(b).
/// Its subordinated pair is (bar d, bar c) and its indices are (-kappa2, -kappa1).
inline MatchingPairAnalysis adjoint(const MatchingPairAnalysis& m) {
  return subordinated_pair(m.a.bar(), m.b.tilde().bar());
}

}  // namespace thp
