#pragma once

// Operator expression trees over two-sided coefficient sequences, their exact
// evaluation on finite windows, dense finite sections, and Toeplitz inverses
// built from Wiener-Hopf factors.
//
// A sequence x_n, n in Z, stands for the function sum x_n t^n. The primitives:
//   MulSymbol(g)  convolution with the coefficients of g
//   MulWindow(v)  convolution with a finitely supported coefficient window
//   ProjP / ProjQ keep n >= 0 / n < 0
//   Flip          (Jx)_n = x_{-n-1}
//   Power(m)      multiplication by t^m
//   Toeplitz(g) = P M(g) P,  Hankel(g) = P M(g) Q J.

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "thp/factorization.hpp"
#include "thp/symbol.hpp"

namespace thp {

class OperatorExpr {
 public:
  enum class Kind { Identity, Compose, Sum, Scale, Toeplitz, Hankel, MulSymbol, MulWindow, ProjP, ProjQ, Flip, Power };

  struct Node {
    Kind kind = Kind::Identity;
    std::vector<OperatorExpr> children;  // Compose applies right to left
    std::optional<RationalSymbol> symbol;
    std::optional<CoeffWindow> window;
    cplx scalar{1.0};
    int exponent = 0;
  };

  OperatorExpr() : node_(std::make_shared<const Node>()) {}

  static OperatorExpr identity() { return {}; }
  static OperatorExpr scale(cplx s) {
    Node n;
    n.kind = Kind::Scale;
    n.scalar = s;
    return OperatorExpr(std::move(n));
  }
  static OperatorExpr toeplitz(const RationalSymbol& g) { return symbol_node(Kind::Toeplitz, g); }
  static OperatorExpr hankel(const RationalSymbol& g) { return symbol_node(Kind::Hankel, g); }
  static OperatorExpr mul(const RationalSymbol& g) { return symbol_node(Kind::MulSymbol, g); }
  static OperatorExpr mul_window(CoeffWindow v) {
    Node n;
    n.kind = Kind::MulWindow;
    n.window = std::move(v);
    return OperatorExpr(std::move(n));
  }
  static OperatorExpr proj_p() { return leaf(Kind::ProjP); }
  static OperatorExpr proj_q() { return leaf(Kind::ProjQ); }
  static OperatorExpr flip() { return leaf(Kind::Flip); }
  static OperatorExpr power(int m) {
    Node n;
    n.kind = Kind::Power;
    n.exponent = m;
    return OperatorExpr(std::move(n));
  }

  /// Composition; the last factor acts first.
  static OperatorExpr compose(const std::vector<OperatorExpr>& factors) {
    Node n;
    n.kind = Kind::Compose;
    for (const auto& f : factors) {
      if (f.kind() == Kind::Identity) continue;
      if (f.kind() == Kind::Compose) n.children.insert(n.children.end(), f.children().begin(), f.children().end());
      else n.children.push_back(f);
    }
    if (n.children.empty()) return identity();
    if (n.children.size() == 1) return n.children.front();
    return OperatorExpr(std::move(n));
  }

  static OperatorExpr sum(const std::vector<OperatorExpr>& terms) {
    Node n;
    n.kind = Kind::Sum;
    for (const auto& t : terms) {
      if (t.kind() == Kind::Sum) n.children.insert(n.children.end(), t.children().begin(), t.children().end());
      else n.children.push_back(t);
    }
    if (n.children.empty()) return scale(0.0);
    if (n.children.size() == 1) return n.children.front();
    return OperatorExpr(std::move(n));
  }

  Kind kind() const { return node_->kind; }
  const Node& node() const { return *node_; }
  const std::vector<OperatorExpr>& children() const { return node_->children; }

  friend OperatorExpr operator*(const OperatorExpr& x, const OperatorExpr& y) { return compose({x, y}); }
  friend OperatorExpr operator+(const OperatorExpr& x, const OperatorExpr& y) { return sum({x, y}); }
  friend OperatorExpr operator*(cplx s, const OperatorExpr& x) { return compose({scale(s), x}); }
  friend OperatorExpr operator-(const OperatorExpr& x, const OperatorExpr& y) { return sum({x, -1.0 * y}); }

 private:
  explicit OperatorExpr(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}

  static OperatorExpr leaf(Kind k) {
    Node n;
    n.kind = k;
    return OperatorExpr(std::move(n));
  }
  static OperatorExpr symbol_node(Kind k, const RationalSymbol& g) {
    g.require_bounded("operator symbol has a pole on the unit circle");
    Node n;
    n.kind = k;
    n.symbol = g;
    return OperatorExpr(std::move(n));
  }

  std::shared_ptr<const Node> node_;
};

inline std::string to_string(OperatorExpr::Kind k) {
  using K = OperatorExpr::Kind;
  switch (k) {
    case K::Identity: return "Identity";
    case K::Compose: return "Compose";
    case K::Sum: return "Sum";
    case K::Scale: return "Scale";
    case K::Toeplitz: return "Toeplitz";
    case K::Hankel: return "Hankel";
    case K::MulSymbol: return "MulSymbol";
    case K::MulWindow: return "MulWindow";
    case K::ProjP: return "ProjP";
    case K::ProjQ: return "ProjQ";
    case K::Flip: return "Flip";
    case K::Power: return "Power";
  }
  return "?";
}

/// T(a) + H(b).
inline OperatorExpr toeplitz_plus_hankel(const RationalSymbol& a, const RationalSymbol& b, double sign = 1.0) {
  return OperatorExpr::toeplitz(a) + sign * OperatorExpr::hankel(b);
}

/// The functional x -> x_j placed at index 0.
inline OperatorExpr coefficient_functional(int j) {
  using E = OperatorExpr;
  return E::compose({E::power(1), E::proj_q(), E::power(-1), E::proj_p(), E::power(-j)});
}

// ---------------------------------------------------------------------------
// Evaluation

inline constexpr int max_working_halfwidth = 1 << 17;

/// An expression with symbol coefficient windows precomputed. Evaluation over
/// the working range [-L, L], L = window + reach + 2, is exact on [-window,
/// window] up to the dropped symbol tails (every primitive moves an index by
/// at most its reach in absolute value).
class CompiledExpr {
 public:
  explicit CompiledExpr(OperatorExpr expr, double tail_tol = tol::tail) : expr_(std::move(expr)), tail_tol_(tail_tol) {
    reach_ = prepare(expr_);
  }

  const OperatorExpr& expr() const { return expr_; }
  int reach() const { return reach_; }

  CoeffWindow apply(const CoeffWindow& input, int window) const {
    if (window < 0) fail(ErrorCode::InvalidConfig, "negative window");
    const long long L = static_cast<long long>(window) + reach_ + 2;
    if (L > max_working_halfwidth)
      fail(ErrorCode::TruncationTooSmall, "expression reach exceeds the maximal working window");
    Work x(static_cast<int>(L));
    for (int n = std::max(input.lo, x.lo()); n <= std::min(input.hi, x.hi()); ++n) x[n] = input[n];
    x.err = input.error_bound;
    const Work y = eval(expr_, x);
    CoeffWindow out(-window, window);
    for (int n = -window; n <= window; ++n) out[n] = y[n];
    out.error_bound = y.err;
    out.decay_ratio = input.decay_ratio;
    return out;
  }

 private:
  struct Work {
    explicit Work(int half) : half_(half), v(static_cast<std::size_t>(2 * half + 1)) {}
    int lo() const { return -half_; }
    int hi() const { return half_; }
    cplx& operator[](int n) { return v[static_cast<std::size_t>(n + half_)]; }
    const cplx& operator[](int n) const { return v[static_cast<std::size_t>(n + half_)]; }
    std::pair<int, int> support() const {
      int a = hi() + 1, b = lo() - 1;
      for (int n = lo(); n <= hi(); ++n)
        if ((*this)[n] != cplx{}) {
          a = std::min(a, n);
          b = n;
        }
      return {a, b};
    }
    double sup() const {
      double m = 0.0;
      for (const auto& z : v) m = std::max(m, std::abs(z));
      return m;
    }
    double l1() const {
      double m = 0.0;
      for (const auto& z : v) m += std::abs(z);
      return m;
    }
    int half_;
    std::vector<cplx> v;
    double err = 0.0;
  };

  struct Kernel {
    CoeffWindow coeffs;
    double l1 = 0.0;
    double tail = 0.0;
  };

  int prepare(const OperatorExpr& e) {
    using K = OperatorExpr::Kind;
    const auto& n = e.node();
    switch (n.kind) {
      case K::Identity:
      case K::Scale:
      case K::ProjP:
      case K::ProjQ:
        return 0;
      case K::Flip:
        return 1;
      case K::Power:
        return std::abs(n.exponent);
      case K::Compose: {
        int r = 0;
        for (const auto& c : n.children) r += prepare(c);
        return r;
      }
      case K::Sum: {
        int r = 0;
        for (const auto& c : n.children) r = std::max(r, prepare(c));
        return r;
      }
      case K::Toeplitz:
      case K::Hankel:
      case K::MulSymbol:
      case K::MulWindow: {
        Kernel k;
        if (n.kind == K::MulWindow) {
          k.coeffs = *n.window;
          k.tail = n.window->error_bound;
        } else {
          const auto s = coefficient_support(*n.symbol, tail_tol_);
          k.coeffs = fourier_coefficients(*n.symbol, s.lo, s.hi);
          k.tail = s.tail_l1;
        }
        for (const auto& z : k.coeffs.coeffs) k.l1 += std::abs(z);
        const int r = std::max(std::abs(k.coeffs.lo), std::abs(k.coeffs.hi)) + (n.kind == K::Hankel ? 1 : 0);
        kernels_.emplace(&n, std::move(k));
        return r;
      }
    }
    return 0;
  }

  static Work convolve(const Kernel& k, const Work& x, bool window_error) {
    Work y(x.hi());
    const auto [a, b] = x.support();
    if (a <= b) {
      const int lo = std::max(y.lo(), a + k.coeffs.lo), hi = std::min(y.hi(), b + k.coeffs.hi);
      for (int n = lo; n <= hi; ++n) {
        cplx acc{};
        const int jlo = std::max(a, n - k.coeffs.hi), jhi = std::min(b, n - k.coeffs.lo);
        for (int j = jlo; j <= jhi; ++j) acc += k.coeffs[n - j] * x[j];
        y[n] = acc;
      }
    }
    // Symbol tails are l1-bounded; window errors are entrywise sup bounds.
    const double tail_part = window_error ? k.tail * x.l1() : k.tail * (x.sup() + x.err);
    y.err = k.l1 * x.err + tail_part;
    return y;
  }

  Work eval(const OperatorExpr& e, const Work& x) const {
    using K = OperatorExpr::Kind;
    const auto& n = e.node();
    switch (n.kind) {
      case K::Identity:
        return x;
      case K::Scale: {
        Work y = x;
        for (auto& z : y.v) z *= n.scalar;
        y.err *= std::abs(n.scalar);
        return y;
      }
      case K::ProjP: {
        Work y = x;
        for (int i = y.lo(); i < 0; ++i) y[i] = 0.0;
        return y;
      }
      case K::ProjQ: {
        Work y = x;
        for (int i = 0; i <= y.hi(); ++i) y[i] = 0.0;
        return y;
      }
      case K::Flip: {
        Work y(x.hi());
        for (int i = y.lo(); i <= y.hi(); ++i) {
          const int src = -i - 1;
          if (src >= x.lo() && src <= x.hi()) y[i] = x[src];
        }
        y.err = x.err;
        return y;
      }
      case K::Power: {
        Work y(x.hi());
        for (int i = y.lo(); i <= y.hi(); ++i) {
          const int src = i - n.exponent;
          if (src >= x.lo() && src <= x.hi()) y[i] = x[src];
        }
        y.err = x.err;
        return y;
      }
      case K::Compose: {
        Work y = x;
        for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) y = eval(*it, y);
        return y;
      }
      case K::Sum: {
        Work y(x.hi());
        double err = 0.0;
        for (const auto& c : n.children) {
          const Work t = eval(c, x);
          for (int i = y.lo(); i <= y.hi(); ++i) y[i] += t[i];
          err += t.err;
        }
        y.err = err;
        return y;
      }
      case K::MulSymbol:
      case K::MulWindow:
        return convolve(kernels_.at(&n), x, n.kind == K::MulWindow);
      case K::Toeplitz: {
        Work p = x;
        for (int i = p.lo(); i < 0; ++i) p[i] = 0.0;
        Work y = convolve(kernels_.at(&n), p, false);
        for (int i = y.lo(); i < 0; ++i) y[i] = 0.0;
        return y;
      }
      case K::Hankel: {
        Work q(x.hi());
        for (int i = q.lo(); i < 0; ++i) {
          const int src = -i - 1;
          if (src <= x.hi()) q[i] = x[src];
        }
        q.err = x.err;
        Work y = convolve(kernels_.at(&n), q, false);
        for (int i = y.lo(); i < 0; ++i) y[i] = 0.0;
        return y;
      }
    }
    return x;
  }

  OperatorExpr expr_;
  double tail_tol_;
  int reach_ = 0;
  std::unordered_map<const OperatorExpr::Node*, Kernel> kernels_;
};

/// Evaluates expr on input and returns indices [-window, window]. The result is
/// exact there for finitely supported input, up to error_bound.
inline CoeffWindow apply(const OperatorExpr& expr, const CoeffWindow& input, int window) {
  return CompiledExpr(expr).apply(input, window);
}

// ---------------------------------------------------------------------------
// Dense finite sections

/// Top N x N block of T(a) + H(b), together with `extra_rows` further rows of
/// the infinite matrix (the tall section used for kernel dimension counts).
struct DenseOperator {
  int N = 0;
  Eigen::MatrixXcd tall;

  Eigen::MatrixXcd entries() const { return tall.topRows(N); }
  int rows() const { return static_cast<int>(tall.rows()); }
};

inline DenseOperator truncate(const std::optional<RationalSymbol>& a, const std::optional<RationalSymbol>& b, int N,
                              int extra_rows = 0) {
  if (N < 1) fail(ErrorCode::InvalidConfig, "truncation order must be positive");
  const int rows = N + std::max(0, extra_rows);
  DenseOperator op{N, Eigen::MatrixXcd::Zero(rows, N)};
  if (a) {
    const auto w = fourier_coefficients(*a, -(N - 1), rows - 1);
    for (int k = 0; k < rows; ++k)
      for (int j = 0; j < N; ++j) op.tall(k, j) += w[k - j];
  }
  if (b) {
    const auto w = fourier_coefficients(*b, 1, rows + N - 1);
    for (int k = 0; k < rows; ++k)
      for (int j = 0; j < N; ++j) op.tall(k, j) += w[k + j + 1];
  }
  return op;
}

/// Dense matrix of an expression restricted to analytic inputs 0..cols-1,
/// output rows 0..rows-1.
inline Eigen::MatrixXcd dense_section(const OperatorExpr& expr, int rows, int cols) {
  const CompiledExpr ce(expr);
  Eigen::MatrixXcd m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    const auto y = ce.apply(CoeffWindow::unit(j), std::max(rows, cols));
    for (int k = 0; k < rows; ++k) m(k, j) = y[k];
  }
  return m;
}

// ---------------------------------------------------------------------------
// Toeplitz inverses

enum class Side { two_sided, right, left };

inline std::string to_string(Side s) {
  switch (s) {
    case Side::two_sided: return "two_sided";
    case Side::right: return "right";
    case Side::left: return "left";
  }
  return "?";
}

/// Inverse (two-sided, right or left) of T(g) from the Wiener-Hopf factors of
/// g t^k, where k removes the winding: T^{-1}(g t^k) T(t^k) for ind >= 0 and
/// T(t^{-k}) T^{-1}(g t^{-k}) for ind <= 0.
inline OperatorExpr toeplitz_inverse_expr(const RationalSymbol& g, Side side) {
  using E = OperatorExpr;
  const int index = -winding_number(g);
  if ((side == Side::two_sided && index != 0) || (side == Side::right && index < 0) ||
      (side == Side::left && index > 0))
    fail(ErrorCode::WrongIndexForSide, "Toeplitz index " + std::to_string(index) + " does not admit a " +
                                           to_string(side) + " inverse");
  const auto shifted = g * RationalSymbol::monomial(index);
  const auto wh = wiener_hopf(shifted);
  const E core = E::toeplitz(wh.plus.inverse()) * E::toeplitz(wh.minus.inverse());
  if (index > 0) return core * E::toeplitz(RationalSymbol::monomial(index));
  if (index < 0) return E::toeplitz(RationalSymbol::monomial(index)) * core;
  return core;
}

}  // namespace thp
