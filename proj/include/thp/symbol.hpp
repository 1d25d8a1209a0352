#pragma once

// Rational symbols on the unit circle in zero-pole-gain form, their algebra,
// and exact Fourier coefficients by partial fractions.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <map>
#include <numeric>
#include <tuple>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "thp/error.hpp"

namespace thp {

using cplx = std::complex<double>;

namespace tol {
/// Poles (and, where invertibility is needed, zeros) closer than this to the
/// unit circle, relative to their modulus, are rejected.
inline constexpr double circle = 1e-9;
/// Zero/pole pairs closer than this cancel during canonicalization.
inline constexpr double cancel = 1e-10;
/// Canonical-form equality tolerance for gains, zeros and poles.
inline constexpr double match = 1e-9;
/// Fourier coefficient tails below this (l1 norm) are dropped.
inline constexpr double tail = 1e-14;
/// Roots of smaller modulus are folded into the power of t.
inline constexpr double origin = 1e-14;
/// Poles closer than this (relative) are merged into one repeated pole.
inline constexpr double cluster = 1e-6;
}  // namespace tol

/// Fourier coefficients f_n for n = lo..hi.
struct CoeffWindow {
  int lo = 0;
  int hi = 0;
  std::vector<cplx> coeffs = {cplx{}};
  /// Geometric rate of the tail beyond the window (0 for finite support).
  double decay_ratio = 0.0;
  /// Sup-norm error bound accumulated by the operations that produced it.
  double error_bound = 0.0;

  CoeffWindow() = default;
  CoeffWindow(int lo_, int hi_)
      : lo(lo_), hi(hi_), coeffs(static_cast<std::size_t>(hi_ - lo_ + 1)) {
    if (hi_ < lo_) fail(ErrorCode::InvalidConfig, "coefficient window with hi < lo");
  }

  std::size_t size() const { return coeffs.size(); }

  cplx at(int n) const {
    return (n < lo || n > hi) ? cplx{} : coeffs[static_cast<std::size_t>(n - lo)];
  }
  cplx& operator[](int n) { return coeffs[static_cast<std::size_t>(n - lo)]; }
  const cplx& operator[](int n) const { return coeffs[static_cast<std::size_t>(n - lo)]; }

  double sup_norm() const { return sup_norm(lo, hi); }
  double sup_norm(int from, int to) const {
    double m = 0.0;
    for (int n = std::max(from, lo); n <= std::min(to, hi); ++n) m = std::max(m, std::abs((*this)[n]));
    return m;
  }

  CoeffWindow restricted(int from, int to) const {
    CoeffWindow out(from, to);
    for (int n = from; n <= to; ++n) out[n] = at(n);
    out.decay_ratio = decay_ratio;
    out.error_bound = error_bound;
    return out;
  }

  /// Multiplication by t^m.
  CoeffWindow shifted(int m) const {
    CoeffWindow out = *this;
    out.lo += m;
    out.hi += m;
    return out;
  }

  static CoeffWindow unit(int n, cplx value = 1.0) {
    CoeffWindow w(n, n);
    w[n] = value;
    return w;
  }
};

inline CoeffWindow operator+(const CoeffWindow& x, const CoeffWindow& y) {
  CoeffWindow out(std::min(x.lo, y.lo), std::max(x.hi, y.hi));
  for (int n = out.lo; n <= out.hi; ++n) out[n] = x.at(n) + y.at(n);
  out.error_bound = x.error_bound + y.error_bound;
  out.decay_ratio = std::max(x.decay_ratio, y.decay_ratio);
  return out;
}

inline CoeffWindow operator*(cplx s, const CoeffWindow& x) {
  CoeffWindow out = x;
  for (auto& v : out.coeffs) v *= s;
  out.error_bound *= std::abs(s);
  return out;
}

inline CoeffWindow operator-(const CoeffWindow& x, const CoeffWindow& y) { return x + (-1.0) * y; }

namespace detail {

inline bool root_less(const cplx& x, const cplx& y) {
  const double ax = std::abs(x), ay = std::abs(y);
  if (ax != ay) return ax < ay;
  return std::arg(x) < std::arg(y);
}

inline bool near_circle(const cplx& z) {
  return std::abs(std::abs(z) - 1.0) < tol::circle * std::max(1.0, std::abs(z));
}

inline bool roots_close(const cplx& x, const cplx& y, double eps) {
  return std::abs(x - y) <= eps * std::max(1.0, std::abs(x));
}

// Ascending coefficients of prod (t - r).
inline std::vector<cplx> poly_from_roots(const std::vector<cplx>& roots) {
  std::vector<cplx> p{1.0};
  for (const auto& r : roots) {
    std::vector<cplx> next(p.size() + 1);
    for (std::size_t i = 0; i < p.size(); ++i) {
      next[i + 1] += p[i];
      next[i] -= r * p[i];
    }
    p = std::move(next);
  }
  return p;
}

inline cplx poly_eval(const std::vector<cplx>& p, cplx t) {
  cplx acc{};
  for (std::size_t i = p.size(); i-- > 0;) acc = acc * t + p[i];
  return acc;
}

/// Roots of the polynomial with ascending coefficients p (p.back() != 0),
/// via companion-matrix eigenvalues followed by Newton polishing.
inline std::vector<cplx> poly_roots(const std::vector<cplx>& p) {
  const int deg = static_cast<int>(p.size()) - 1;
  if (deg <= 0) return {};
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -p[static_cast<std::size_t>(i)] / p.back();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  std::vector<cplx> dp(p.size() - 1);
  for (std::size_t i = 1; i < p.size(); ++i) dp[i - 1] = static_cast<double>(i) * p[i];
  std::vector<cplx> roots;
  for (int i = 0; i < deg; ++i) {
    cplx r = solver.eigenvalues()(i);
    for (int it = 0; it < 3; ++it) {
      const cplx f = poly_eval(p, r), df = poly_eval(dp, r);
      if (std::abs(df) == 0.0) break;
      const cplx step = f / df;
      if (!(std::abs(poly_eval(p, r - step)) < std::abs(f))) break;
      r -= step;
    }
    roots.push_back(r);
  }
  return roots;
}

}  // namespace detail

/// g(t) = gain * t^power * prod(t - zeros) / prod(t - poles), kept in canonical
/// form: no roots at the origin, no cancelling zero/pole pairs, roots sorted by
/// (modulus, argument). Boundedness on the circle is not a class invariant:
/// make_symbol and compose enforce it, while intermediate factors (for example
/// antisymmetric plus factors with a pole at -1) may be unbounded.
class RationalSymbol {
 public:
  RationalSymbol() = default;

  static RationalSymbol zpk(cplx gain, int power, std::vector<cplx> zeros, std::vector<cplx> poles) {
    RationalSymbol g;
    g.gain_ = gain;
    g.power_ = power;
    g.zeros_ = std::move(zeros);
    g.poles_ = std::move(poles);
    g.canonicalize();
    return g;
  }

  static RationalSymbol constant(cplx c) { return zpk(c, 0, {}, {}); }
  static RationalSymbol monomial(int m, cplx gain = 1.0) { return zpk(gain, m, {}, {}); }
  /// 1 - alpha t
  static RationalSymbol one_minus_t(cplx alpha) {
    if (alpha == cplx{}) return constant(1.0);
    return zpk(-alpha, 0, {1.0 / alpha}, {});
  }
  /// 1 - alpha / t
  static RationalSymbol one_minus_tinv(cplx alpha) { return zpk(1.0, -1, {alpha}, {}); }

  cplx gain() const { return gain_; }
  int power() const { return power_; }
  const std::vector<cplx>& zeros() const { return zeros_; }
  const std::vector<cplx>& poles() const { return poles_; }

  bool is_constant() const { return power_ == 0 && zeros_.empty() && poles_.empty(); }

  bool bounded_on_circle() const {
    return std::none_of(poles_.begin(), poles_.end(), detail::near_circle);
  }
  bool invertible_on_circle() const {
    return bounded_on_circle() && std::none_of(zeros_.begin(), zeros_.end(), detail::near_circle);
  }

  void require_bounded(const std::string& context) const {
    if (!bounded_on_circle()) fail(ErrorCode::PoleOnCircle, context);
  }
  void require_invertible(const std::string& context) const {
    require_bounded(context);
    if (!invertible_on_circle()) fail(ErrorCode::ZeroOnCircle, context);
  }

  cplx operator()(cplx t) const {
    for (const auto& p : poles_)
      if (std::abs(t - p) <= 1e-14 * std::max(1.0, std::abs(p)))
        fail(ErrorCode::EvalAtPole, "evaluation at a pole");
    if (power_ < 0 && t == cplx{}) fail(ErrorCode::EvalAtPole, "evaluation at t = 0");
    cplx v = gain_ * std::pow(t, power_);
    for (const auto& z : zeros_) v *= (t - z);
    for (const auto& p : poles_) v /= (t - p);
    return v;
  }

  RationalSymbol inverse() const { return zpk(1.0 / gain_, -power_, poles_, zeros_); }

  /// g(1/t).
  RationalSymbol tilde() const {
    cplx gain = gain_;
    std::vector<cplx> z, p;
    for (const auto& r : zeros_) {
      gain *= -r;
      z.push_back(1.0 / r);
    }
    for (const auto& r : poles_) {
      gain /= -r;
      p.push_back(1.0 / r);
    }
    const int power = -power_ - static_cast<int>(zeros_.size()) + static_cast<int>(poles_.size());
    return zpk(gain, power, std::move(z), std::move(p));
  }

  /// Conjugated polynomial coefficients: t -> conj(g(conj t)).
  RationalSymbol conj_coefficients() const {
    std::vector<cplx> z, p;
    for (const auto& r : zeros_) z.push_back(std::conj(r));
    for (const auto& r : poles_) p.push_back(std::conj(r));
    return zpk(std::conj(gain_), power_, std::move(z), std::move(p));
  }

  /// The symbol whose values on the circle are conj(g(t)).
  RationalSymbol bar() const { return conj_coefficients().tilde(); }

  RationalSymbol operator-() const { return zpk(-gain_, power_, zeros_, poles_); }

  friend RationalSymbol operator*(const RationalSymbol& f, const RationalSymbol& g) {
    std::vector<cplx> z = f.zeros_, p = f.poles_;
    z.insert(z.end(), g.zeros_.begin(), g.zeros_.end());
    p.insert(p.end(), g.poles_.begin(), g.poles_.end());
    return zpk(f.gain_ * g.gain_, f.power_ + g.power_, std::move(z), std::move(p));
  }
  friend RationalSymbol operator/(const RationalSymbol& f, const RationalSymbol& g) {
    std::vector<cplx> z = f.zeros_, p = f.poles_;
    z.insert(z.end(), g.poles_.begin(), g.poles_.end());
    p.insert(p.end(), g.zeros_.begin(), g.zeros_.end());
    return zpk(f.gain_ / g.gain_, f.power_ - g.power_, std::move(z), std::move(p));
  }
  friend RationalSymbol operator*(cplx s, const RationalSymbol& g) { return RationalSymbol::constant(s) * g; }
  friend RationalSymbol operator*(const RationalSymbol& g, cplx s) { return s * g; }

  /// Largest geometric rate of the Fourier coefficients (0 for Laurent polynomials).
  double decay_ratio() const {
    double r = 0.0;
    for (const auto& p : poles_) {
      const double m = std::abs(p);
      r = std::max(r, m < 1.0 ? m : 1.0 / m);
    }
    return r;
  }

 private:
  void canonicalize() {
    if (!(std::abs(gain_) > 0.0) || !std::isfinite(std::abs(gain_)))
      fail(ErrorCode::ZeroGain, "symbol gain must be finite and nonzero");
    auto fold = [](std::vector<cplx>& roots) {
      int folded = 0;
      std::vector<cplx> kept;
      for (const auto& r : roots) {
        if (std::abs(r) < tol::origin) ++folded;
        else kept.push_back(r);
      }
      roots = std::move(kept);
      return folded;
    };
    power_ += fold(zeros_);
    power_ -= fold(poles_);
    std::vector<bool> pole_used(poles_.size(), false);
    std::vector<cplx> z_kept;
    for (const auto& z : zeros_) {
      std::size_t best = poles_.size();
      double best_dist = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < poles_.size(); ++j) {
        if (pole_used[j]) continue;
        const double dist = std::abs(z - poles_[j]);
        if (dist < best_dist) {
          best_dist = dist;
          best = j;
        }
      }
      if (best < poles_.size() && best_dist <= tol::cancel * std::max(1.0, std::abs(z))) {
        // The discarded pair contributes (z - p)/(z - p) ~ 1 away from z.
        pole_used[best] = true;
      } else {
        z_kept.push_back(z);
      }
    }
    std::vector<cplx> p_kept;
    for (std::size_t j = 0; j < poles_.size(); ++j)
      if (!pole_used[j]) p_kept.push_back(poles_[j]);
    zeros_ = std::move(z_kept);
    poles_ = std::move(p_kept);
    std::sort(zeros_.begin(), zeros_.end(), detail::root_less);
    std::sort(poles_.begin(), poles_.end(), detail::root_less);
  }

  cplx gain_{1.0};
  int power_ = 0;
  std::vector<cplx> zeros_;
  std::vector<cplx> poles_;
};

/// Multiset equality of roots plus gain/power agreement within eps.
inline bool approx_equal(const RationalSymbol& f, const RationalSymbol& g, double eps = tol::match) {
  if (f.power() != g.power()) return false;
  auto same_roots = [eps](const std::vector<cplx>& x, const std::vector<cplx>& y) {
    if (x.size() != y.size()) return false;
    std::vector<bool> used(y.size(), false);
    for (const auto& r : x) {
      std::size_t best = y.size();
      double best_dist = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < y.size(); ++j) {
        if (used[j]) continue;
        const double dist = std::abs(r - y[j]);
        if (dist < best_dist) {
          best_dist = dist;
          best = j;
        }
      }
      if (best == y.size() || best_dist > eps * std::max(1.0, std::abs(r))) return false;
      used[best] = true;
    }
    return true;
  };
  if (!same_roots(f.zeros(), g.zeros()) || !same_roots(f.poles(), g.poles())) return false;
  return std::abs(f.gain() - g.gain()) <= eps * std::max(1.0, std::abs(f.gain()));
}

// ---------------------------------------------------------------------------
// Construction

using LaurentPoly = std::map<int, cplx>;

struct ZpkSpec {
  cplx gain{1.0};
  int power = 0;
  std::vector<cplx> zeros;
  std::vector<cplx> poles;
};

/// Ratio of two Laurent polynomials keyed by degree.
struct LaurentSpec {
  LaurentPoly num;
  LaurentPoly den{{0, 1.0}};
};

using SymbolSpec = std::variant<ZpkSpec, LaurentSpec>;

namespace detail {

struct RootedLaurent {
  cplx leading;
  int low_degree;
  std::vector<cplx> roots;
};

inline RootedLaurent root_laurent(const LaurentPoly& poly, const char* which) {
  int lo = 0, hi = 0;
  bool any = false;
  for (const auto& [deg, c] : poly) {
    if (c == cplx{}) continue;
    if (!any) lo = hi = deg;
    lo = std::min(lo, deg);
    hi = std::max(hi, deg);
    any = true;
  }
  if (!any) fail(ErrorCode::ZeroGain, std::string("Laurent ") + which + " polynomial is identically zero");
  std::vector<cplx> asc(static_cast<std::size_t>(hi - lo + 1));
  for (const auto& [deg, c] : poly)
    if (c != cplx{}) asc[static_cast<std::size_t>(deg - lo)] = c;
  return {asc.back(), lo, poly_roots(asc)};
}

}  // namespace detail

/// Canonical, validated symbol. Laurent ratios are root-solved; the roots are
/// the only inexact step.
inline RationalSymbol make_symbol(const SymbolSpec& spec) {
  RationalSymbol g;
  if (const auto* z = std::get_if<ZpkSpec>(&spec)) {
    g = RationalSymbol::zpk(z->gain, z->power, z->zeros, z->poles);
  } else {
    const auto& l = std::get<LaurentSpec>(spec);
    const auto num = detail::root_laurent(l.num, "numerator");
    const auto den = detail::root_laurent(l.den, "denominator");
    g = RationalSymbol::zpk(num.leading / den.leading, num.low_degree - den.low_degree, num.roots, den.roots);
  }
  g.require_bounded("symbol has a pole on the unit circle");
  return g;
}

inline RationalSymbol laurent(const LaurentPoly& num, const LaurentPoly& den = {{0, 1.0}}) {
  return make_symbol(LaurentSpec{num, den});
}

enum class ComposeOp { mul, div };

/// Validated product or quotient.
inline RationalSymbol compose(ComposeOp op, const RationalSymbol& a, const RationalSymbol& b) {
  RationalSymbol r = op == ComposeOp::mul ? a * b : a / b;
  r.require_bounded("composed symbol has a pole on the unit circle");
  return r;
}

enum class Involution { tilde, bar };

inline RationalSymbol involution(Involution kind, const RationalSymbol& g) {
  return kind == Involution::tilde ? g.tilde() : g.bar();
}

inline cplx evaluate(const RationalSymbol& g, cplx t) { return g(t); }

/// power + #zeros inside - #poles inside. The Toeplitz index is its negative.
inline int winding_number(const RationalSymbol& g) {
  g.require_invertible("winding number needs a symbol invertible on the circle");
  int w = g.power();
  for (const auto& z : g.zeros()) w += std::abs(z) < 1.0 ? 1 : 0;
  for (const auto& p : g.poles()) w -= std::abs(p) < 1.0 ? 1 : 0;
  return w;
}

// ---------------------------------------------------------------------------
// Fourier coefficients

namespace detail {

struct PoleTerm {
  cplx pole;
  int multiplicity;
  std::vector<cplx> residues;  // residues[j-1] multiplies 1/(t - pole)^j
};

// gain * t^power * (poly(t) + sum residues / (t - pole)^j)
struct PartialFractions {
  cplx gain;
  int power;
  std::vector<cplx> poly;
  std::vector<PoleTerm> terms;
};

inline PartialFractions partial_fractions(const RationalSymbol& g) {
  PartialFractions pf{g.gain(), g.power(), {}, {}};

  std::vector<std::pair<cplx, int>> clusters;
  {
    std::vector<bool> used(g.poles().size(), false);
    for (std::size_t i = 0; i < g.poles().size(); ++i) {
      if (used[i]) continue;
      cplx sum = g.poles()[i];
      int count = 1;
      used[i] = true;
      for (std::size_t j = i + 1; j < g.poles().size(); ++j) {
        if (!used[j] && roots_close(g.poles()[i], g.poles()[j], tol::cluster)) {
          used[j] = true;
          sum += g.poles()[j];
          ++count;
        }
      }
      clusters.emplace_back(sum / static_cast<double>(count), count);
    }
  }

  const std::vector<cplx> num = poly_from_roots(g.zeros());
  std::vector<cplx> den{1.0};
  for (const auto& [p, m] : clusters) {
    std::vector<cplx> root_list(static_cast<std::size_t>(m), p);
    const auto factor = poly_from_roots(root_list);
    std::vector<cplx> next(den.size() + factor.size() - 1);
    for (std::size_t i = 0; i < den.size(); ++i)
      for (std::size_t j = 0; j < factor.size(); ++j) next[i + j] += den[i] * factor[j];
    den = std::move(next);
  }

  if (num.size() >= den.size()) {
    std::vector<cplx> rem = num;
    pf.poly.assign(num.size() - den.size() + 1, cplx{});
    for (std::size_t k = pf.poly.size(); k-- > 0;) {
      const cplx q = rem[k + den.size() - 1];
      pf.poly[k] = q;
      for (std::size_t j = 0; j < den.size(); ++j) rem[k + j] -= q * den[j];
    }
  }

  for (std::size_t k = 0; k < clusters.size(); ++k) {
    const auto [pk, mk] = clusters[k];
    const auto order = static_cast<std::size_t>(mk);
    // Taylor coefficients of num at pk by repeated synthetic division.
    std::vector<cplx> series(order, cplx{});
    {
      std::vector<cplx> work = num;
      for (std::size_t i = 0; i < order && !work.empty(); ++i) {
        std::vector<cplx> quotient(work.size() > 1 ? work.size() - 1 : 0);
        cplx acc{};
        for (std::size_t j = work.size(); j-- > 0;) {
          acc = acc * pk + work[j];
          if (j > 0) quotient[j - 1] = acc;
        }
        series[i] = acc;
        work = std::move(quotient);
      }
    }
    for (std::size_t l = 0; l < clusters.size(); ++l) {
      if (l == k) continue;
      const cplx delta = pk - clusters[l].first;
      const int ml = clusters[l].second;
      // (u + delta)^(-ml) = delta^(-ml) sum_i (-1)^i C(ml+i-1, i) (u/delta)^i
      std::vector<cplx> factor(order);
      cplx scale = std::pow(delta, -ml);
      double binom = 1.0;
      for (std::size_t i = 0; i < order; ++i) {
        factor[i] = scale * binom * ((i % 2) ? -1.0 : 1.0);
        binom = binom * static_cast<double>(ml + static_cast<int>(i)) / static_cast<double>(i + 1);
        scale /= delta;
      }
      std::vector<cplx> prod(order, cplx{});
      for (std::size_t i = 0; i < order; ++i)
        for (std::size_t j = 0; i + j < order; ++j) prod[i + j] += series[i] * factor[j];
      series = std::move(prod);
    }
    PoleTerm term{pk, mk, std::vector<cplx>(order)};
    for (int j = 1; j <= mk; ++j) term.residues[static_cast<std::size_t>(j - 1)] = series[static_cast<std::size_t>(mk - j)];
    pf.terms.push_back(std::move(term));
  }
  return pf;
}

// Adds scale * [coefficients of 1/(t - p)^j] at indices m = first..last
// (indices relative to the t^power shift) into out[offset + m].
inline void add_inverse_power(std::vector<cplx>& out, int offset, int first, int last, cplx p, int j, cplx scale) {
  if (first > last || scale == cplx{}) return;
  if (std::abs(p) > 1.0) {
    // (-1)^j C(m+j-1, j-1) p^(-m-j), m >= 0
    const int start = std::max(first, 0);
    if (start > last) return;
    double binom = 1.0;
    for (int i = 1; i < j; ++i) binom = binom * static_cast<double>(start + i) / static_cast<double>(i);
    cplx pw = std::pow(p, -(start + j));
    const cplx inv = 1.0 / p;
    const double sgn = (j % 2) ? -1.0 : 1.0;
    for (int m = start; m <= last; ++m) {
      out[static_cast<std::size_t>(offset + m)] += scale * sgn * binom * pw;
      pw *= inv;
      if (std::abs(pw) < 1e-300) break;
      binom = binom * static_cast<double>(m + j) / static_cast<double>(m + 1);
    }
  } else {
    // C(-m-1, j-1) p^(-m-j), m <= -j ; iterate k = -m - j >= 0 downward in m.
    const int start = std::min(last, -j);
    if (start < first) return;
    int k = -start - j;
    double binom = 1.0;
    for (int i = 1; i < j; ++i) binom = binom * static_cast<double>(k + i) / static_cast<double>(i);
    cplx pw = std::pow(p, k);
    for (int m = start; m >= first; --m) {
      out[static_cast<std::size_t>(offset + m)] += scale * binom * pw;
      pw *= p;
      if (std::abs(pw) < 1e-300) break;
      ++k;
      binom = binom * static_cast<double>(k + j - 1) / static_cast<double>(k);
    }
  }
}

inline double binom_double(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * static_cast<double>(n - k + i) / static_cast<double>(i);
  return b;
}

}  // namespace detail

/// Exact coefficients g_n, n = lo..hi, by partial fractions: poles outside the
/// disk feed nonnegative indices, poles inside feed negative indices.
inline CoeffWindow fourier_coefficients(const RationalSymbol& g, int lo, int hi) {
  g.require_bounded("Fourier coefficients of a symbol with a pole on the unit circle");
  CoeffWindow w(lo, hi);
  w.decay_ratio = g.decay_ratio();
  const auto pf = detail::partial_fractions(g);
  // Relative index m = n - power.
  const int first = lo - pf.power, last = hi - pf.power;
  std::vector<cplx> acc(static_cast<std::size_t>(hi - lo + 1));
  const int offset = -first;
  for (int m = std::max(first, 0); m <= std::min(last, static_cast<int>(pf.poly.size()) - 1); ++m)
    acc[static_cast<std::size_t>(offset + m)] += pf.poly[static_cast<std::size_t>(m)];
  for (const auto& term : pf.terms)
    for (int j = 1; j <= term.multiplicity; ++j)
      detail::add_inverse_power(acc, offset, first, last, term.pole, j, term.residues[static_cast<std::size_t>(j - 1)]);
  for (int n = lo; n <= hi; ++n) w[n] = pf.gain * acc[static_cast<std::size_t>(n - lo)];
  return w;
}

struct SymbolSupport {
  int lo = 0;
  int hi = 0;
  /// Bound on the l1 norm of the coefficients outside [lo, hi].
  double tail_l1 = 0.0;
};

/// Smallest index range outside which the coefficient tail has l1 norm at most
/// tail_tol * max(1, largest scaled residue).
inline SymbolSupport coefficient_support(const RationalSymbol& g, double tail_tol = tol::tail) {
  g.require_bounded("coefficient support of a symbol with a pole on the unit circle");
  const auto pf = detail::partial_fractions(g);
  // Number of kept terms in one direction, and the l1 bound of the dropped rest.
  // Distance k counts m = k forward (outside poles) and m = -1 - k backward.
  auto reach = [&](bool outside) {
    std::vector<std::tuple<double, int, double>> parts;  // rho, j, |coef|
    double scale = 1.0;
    for (const auto& t : pf.terms) {
      const double m = std::abs(t.pole);
      if ((m > 1.0) != outside) continue;
      const double rho = outside ? 1.0 / m : m;
      for (int j = 1; j <= t.multiplicity; ++j) {
        const double c = std::abs(pf.gain * t.residues[static_cast<std::size_t>(j - 1)]);
        parts.emplace_back(rho, j, c);
        scale = std::max(scale, c);
      }
    }
    if (parts.empty()) return std::pair<int, double>{0, 0.0};
    auto envelope = [&](int k) {
      double e = 0.0;
      for (const auto& [rho, j, c] : parts) {
        if (outside) e += c * detail::binom_double(k + j - 1, j - 1) * std::pow(rho, k + j);
        else e += c * detail::binom_double(k, j - 1) * std::pow(rho, k + 1 - j);
      }
      return e;
    };
    double rho_max = 0.0;
    int j_max = 1;
    for (const auto& p : parts) {
      rho_max = std::max(rho_max, std::get<0>(p));
      j_max = std::max(j_max, std::get<1>(p));
    }
    // Backward terms of order j start j - 1 steps away from the power.
    const int first_k = outside ? 0 : j_max - 1;
    constexpr int cap = 1 << 16;
    for (int k = first_k; k < cap; ++k) {
      const double e = envelope(k);
      if (e == 0.0) return std::pair<int, double>{k, 0.0};
      const double e_next = envelope(k + 1);
      if (e_next < e) {
        const double ratio = std::max(e_next / e, rho_max);
        const double tail = e / (1.0 - ratio);
        if (tail <= tail_tol * scale) return std::pair<int, double>{k, tail};
      }
    }
    fail(ErrorCode::TruncationTooSmall, "coefficient tail does not decay within 2^16 terms");
  };
  const auto [kf, fwd_tail] = reach(true);
  const auto [kb, bwd_tail] = reach(false);
  const int poly_hi = static_cast<int>(pf.poly.size()) - 1;
  int lo_rel = kb > 0 ? -kb : 0;
  int hi_rel = std::max(poly_hi, kf - 1);
  if (hi_rel < lo_rel) hi_rel = lo_rel;
  SymbolSupport s;
  s.lo = pf.power + lo_rel;
  s.hi = pf.power + hi_rel;
  s.tail_l1 = fwd_tail + bwd_tail;
  return s;
}

/// Coefficients over the symbol's own support.
inline CoeffWindow symbol_window(const RationalSymbol& g, double tail_tol = tol::tail) {
  const auto s = coefficient_support(g, tail_tol);
  auto w = fourier_coefficients(g, s.lo, s.hi);
  w.error_bound = s.tail_l1;
  return w;
}

}  // namespace thp
