#pragma once

// Fredholm criterion and index for T(a) + H(b) with piecewise continuous
// matching data, expressed through c and d~ on the upper half circle.

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "thp/symbol.hpp"

namespace thp {

namespace tol {
inline constexpr double angle = 1e-9;
}

/// A function on the unit circle given piecewise on angle intervals
/// [from, to] covering [0, 2 pi]. Each piece is continuous on its closed
/// interval, so evaluating it at an endpoint gives the one-sided limit.
struct PCPiece {
  double from = 0.0, to = 0.0;
  std::function<cplx(double)> value;  // angle -> value
};

struct Jump {
  double angle = 0.0;
  cplx minus, plus;  // limits from smaller and larger angles
};

class PCSymbol {
 public:
  PCSymbol() = default;
  explicit PCSymbol(std::vector<PCPiece> pieces) : pieces_(std::move(pieces)) {
    if (pieces_.empty()) fail(ErrorCode::InvalidConfig, "piecewise symbol without pieces");
    if (std::abs(pieces_.front().from) > 1e-12 || std::abs(pieces_.back().to - 2.0 * std::numbers::pi) > 1e-12)
      fail(ErrorCode::InvalidConfig, "pieces must cover [0, 2 pi]");
    for (std::size_t k = 1; k < pieces_.size(); ++k)
      if (std::abs(pieces_[k].from - pieces_[k - 1].to) > 1e-12)
        fail(ErrorCode::InvalidConfig, "pieces must be contiguous");
  }

  static PCSymbol from_rational(const RationalSymbol& g) {
    g.require_invertible("piecewise symbol must be nonzero and bounded on the circle");
    return PCSymbol({{0.0, 2.0 * std::numbers::pi, [g](double th) { return g(std::polar(1.0, th)); }}});
  }

  /// Constant values on consecutive intervals; `starts` holds the left end of
  /// each interval, beginning with 0.
  static PCSymbol piecewise_constant(const std::vector<std::pair<double, cplx>>& starts) {
    std::vector<PCPiece> pieces;
    for (std::size_t k = 0; k < starts.size(); ++k) {
      const double to = k + 1 < starts.size() ? starts[k + 1].first : 2.0 * std::numbers::pi;
      const cplx v = starts[k].second;
      pieces.push_back({starts[k].first, to, [v](double) { return v; }});
    }
    return PCSymbol(std::move(pieces));
  }

  const std::vector<PCPiece>& pieces() const { return pieces_; }

  cplx limit_plus(double th) const {
    for (const auto& p : pieces_)
      if (th >= p.from - 1e-14 && th < p.to - 1e-14) return p.value(th);
    return pieces_.front().value(pieces_.front().from);  // wraps around at 2 pi
  }
  cplx limit_minus(double th) const {
    if (th <= 1e-14) return pieces_.back().value(pieces_.back().to);
    for (const auto& p : pieces_)
      if (th > p.from + 1e-14 && th <= p.to + 1e-14) return p.value(th);
    return pieces_.back().value(pieces_.back().to);
  }

  /// Boundaries in the open upper half circle where the limits differ.
  std::vector<Jump> upper_jumps() const {
    std::vector<Jump> out;
    for (std::size_t k = 1; k < pieces_.size(); ++k) {
      const double th = pieces_[k].from;
      if (th <= 0.0 || th >= std::numbers::pi) continue;
      const cplx m = pieces_[k - 1].value(th), p = pieces_[k].value(th);
      if (std::abs(m - p) > tol::angle * std::max(1.0, std::abs(m))) out.push_back({th, m, p});
    }
    return out;
  }

  /// Nonzero everywhere on the sampling grid.
  bool nonvanishing(int samples = 2048) const {
    for (const auto& p : pieces_)
      for (int k = 0; k <= samples; ++k)
        if (std::abs(p.value(p.from + (p.to - p.from) * k / samples)) < tol::origin) return false;
    return true;
  }

 private:
  std::vector<PCPiece> pieces_;
};

inline double frac_distance(double x) { return std::abs(x - std::round(x)); }

/// Whether 0 lies on the arc from z1 to z2 with parameter theta.
inline bool arc_through_origin(cplx z1, cplx z2, double theta) {
  if (std::abs(z1) < tol::origin || std::abs(z2) < tol::origin) return true;
  if (std::abs(z1 - z2) <= tol::angle * std::max(1.0, std::abs(z1))) return false;
  return frac_distance(std::arg(z1 / z2) / (2.0 * std::numbers::pi) - theta) < tol::angle;
}

/// Points of the arc {z : arg((z - z1) / (z - z2)) = 2 pi theta mod 2 pi} from
/// z1 to z2, endpoints included. Empty when z1 = z2.
inline std::vector<cplx> arc_points(cplx z1, cplx z2, double theta, int samples) {
  std::vector<cplx> out;
  if (samples < 2) fail(ErrorCode::InvalidConfig, "arc needs at least two samples");
  if (std::abs(z1 - z2) <= tol::angle * std::max(1.0, std::abs(z1))) return out;
  const cplx dir = std::polar(1.0, 2.0 * std::numbers::pi * theta);
  out.reserve(static_cast<std::size_t>(samples));
  out.push_back(z1);
  for (int k = 1; k + 1 < samples; ++k) {
    // w = (z - z1) / (z - z2) runs along the ray r dir, r = s / (1 - s).
    const double s = static_cast<double>(k) / (samples - 1);
    const cplx w = (s / (1.0 - s)) * dir;
    out.push_back((z1 - w * z2) / (1.0 - w));
  }
  out.push_back(z2);
  return out;
}


struct ClauseCheck {
  std::string name;      // endpoint+1, endpoint-1 or jump
  std::string function;  // "c" or "d~"
  double angle = 0.0;    // location on the circle
  double value = 0.0;    // (1/2 pi) arg of the tested quantity
  double excluded = 0.0; // the excluded residue class
  double distance = 0.0; // distance to the class modulo 1
  bool violated = false;
};

struct FredholmVerdict {
  bool fredholm = true;
  std::vector<ClauseCheck> checks;
  std::vector<ClauseCheck> violated() const {
    std::vector<ClauseCheck> v;
    for (const auto& c : checks)
      if (c.violated) v.push_back(c);
    return v;
  }
};

inline double dual_exponent(double p) { return p / (p - 1.0); }

namespace detail {

inline double arg_turns(cplx z) { return std::arg(z) / (2.0 * std::numbers::pi); }

inline void pc_checks(const PCSymbol& f, const std::string& name, double p, FredholmVerdict& v) {
  auto add = [&](std::string clause, double angle, cplx z, double excluded) {
    ClauseCheck c;
    c.name = std::move(clause);
    c.function = name;
    c.angle = angle;
    c.value = arg_turns(z);
    c.excluded = excluded;
    c.distance = frac_distance(c.value - excluded);
    c.violated = c.distance < tol::angle;
    if (c.violated) v.fredholm = false;
    v.checks.push_back(c);
  };
  add("endpoint+1", 0.0, f.limit_minus(0.0), 0.5 + 0.5 / p);
  add("endpoint-1", std::numbers::pi, f.limit_minus(std::numbers::pi), 0.5 / p);
  for (const auto& j : f.upper_jumps()) add("jump", j.angle, j.minus / j.plus, 1.0 / p);
}

}  // namespace detail

/// Conditions on c at exponent p and on d~ at the dual exponent q.
inline FredholmVerdict fredholm_conditions(const PCSymbol& c, const PCSymbol& d_tilde, double p) {
  if (!(p > 1.0)) fail(ErrorCode::InvalidConfig, "exponent p must exceed 1");
  FredholmVerdict v;
  detail::pc_checks(c, "c", p, v);
  detail::pc_checks(d_tilde, "d~", dual_exponent(p), v);
  return v;
}

enum class SegmentKind { smooth, arc };

inline std::string to_string(SegmentKind k) { return k == SegmentKind::smooth ? "smooth" : "arc"; }

struct ClosedCurve {
  std::vector<cplx> points;
  std::vector<SegmentKind> kinds;
  std::vector<double> cumulative_arg;  // filled by winding computation
  int winding = 0;
};

struct CurveOptions {
  int smooth_samples = 2048;
  int arc_samples = 256;
};

namespace detail {

inline void append(ClosedCurve& c, const std::vector<cplx>& pts, SegmentKind k) {
  for (const auto& z : pts) {
    c.points.push_back(z);
    c.kinds.push_back(k);
  }
}

inline void compute_winding(ClosedCurve& c) {
  if (c.points.empty()) return;
  double total = 0.0;
  c.cumulative_arg.assign(c.points.size(), 0.0);
  for (std::size_t k = 0; k < c.points.size(); ++k) {
    if (std::abs(c.points[k]) < tol::origin) fail(ErrorCode::CurveThroughOrigin, "curve passes through the origin");
    if (k == 0) continue;
    const double step = std::arg(c.points[k] / c.points[k - 1]);
    if (std::abs(step) >= std::numbers::pi - 1e-9)
      fail(ErrorCode::CurveThroughOrigin, "argument increment reaches pi: curve crosses the origin or is undersampled");
    total += step;
    c.cumulative_arg[k] = total;
  }
  const double turns = total / (2.0 * std::numbers::pi);
  if (frac_distance(turns) > 1e-6) fail(ErrorCode::CurveThroughOrigin, "curve is not closed");
  c.winding = static_cast<int>(std::lround(turns));
}

}  // namespace detail

/// The closed curve f^{#,r}: f over the upper half circle from f+(1) to
/// f-(-1) with arcs A(f-(tau), f+(tau); 1/r) at jumps, closed by
/// A(f-(-1), 1; 1/(2r)) and A(1, f+(1); 1/2 + 1/(2r)).
inline ClosedCurve sharp_curve(const PCSymbol& f, double r, const CurveOptions& opts = {}) {
  ClosedCurve c;
  const double pi = std::numbers::pi;
  auto checked_arc = [&](cplx z1, cplx z2, double theta) {
    if (arc_through_origin(z1, z2, theta)) fail(ErrorCode::CurveThroughOrigin, "arc passes through the origin");
    return arc_points(z1, z2, theta, opts.arc_samples);
  };
  for (const auto& piece : f.pieces()) {
    if (piece.from >= pi) break;
    const double to = std::min(piece.to, pi);
    if (!c.points.empty()) {
      const cplx left = c.points.back(), right = piece.value(piece.from);
      auto arc = checked_arc(left, right, 1.0 / r);
      if (!arc.empty()) detail::append(c, {arc.begin() + 1, arc.end() - 1}, SegmentKind::arc);
    }
    std::vector<cplx> pts;
    for (int k = 0; k <= opts.smooth_samples; ++k) pts.push_back(piece.value(piece.from + (to - piece.from) * k / opts.smooth_samples));
    detail::append(c, pts, SegmentKind::smooth);
  }
  const cplx end = c.points.back(), start = c.points.front();
  auto close1 = checked_arc(end, 1.0, 0.5 / r);
  if (!close1.empty()) detail::append(c, {close1.begin() + 1, close1.end()}, SegmentKind::arc);
  else if (std::abs(end - 1.0) > 0.0) detail::append(c, {cplx(1.0)}, SegmentKind::arc);
  auto close2 = checked_arc(1.0, start, 0.5 + 0.5 / r);
  if (!close2.empty()) detail::append(c, {close2.begin() + 1, close2.end()}, SegmentKind::arc);
  else if (std::abs(start - 1.0) > 0.0) detail::append(c, {start}, SegmentKind::arc);
  detail::compute_winding(c);
  return c;
}

/// ind(T(a) + H(b)) = wind(d~^{#,q}) - wind(c^{#,p}).
inline int be_index(const PCSymbol& c, const PCSymbol& d_tilde, double p, const CurveOptions& opts = {}) {
  return sharp_curve(d_tilde, dual_exponent(p), opts).winding - sharp_curve(c, p, opts).winding;
}

}  // namespace thp
