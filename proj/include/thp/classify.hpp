#pragma once

// Kernels, cokernels, inverse expressions and the invertibility decision for
// T(a) + H(b) with a rational matching pair (a, b).

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "thp/operators.hpp"
#include "thp/pair.hpp"

namespace thp {

using E = OperatorExpr;

/// Kernel elements as windows on [-window, window]. Each element equals its
/// generator applied to the unit sequence at index 0, so it can be
/// re-evaluated on any window.
struct KernelBasis {
  std::vector<CoeffWindow> elements;
  std::vector<OperatorExpr> generators;
  std::vector<std::string> provenance;
  int window = 0;

  std::size_t size() const { return elements.size(); }
  bool empty() const { return elements.empty(); }
};

enum class RhoReading { tilde_of_plus, plus_of_tilde };

inline std::string to_string(RhoReading r) {
  return r == RhoReading::tilde_of_plus ? "tilde-of-plus" : "plus-of-tilde";
}

struct ClassifyOptions {
  int window = 0;  // 0 picks a window from the decay of the symbols
  double rank_tol = 1e-8;
  RhoReading rho_reading = RhoReading::tilde_of_plus;
  bool with_inverse = true;
};

enum class Status { Invertible, LeftInvertible, RightInvertible, GeneralizedInvertible, NotInvertible, Undetermined };

inline std::string to_string(Status s) {
  switch (s) {
    case Status::Invertible: return "Invertible";
    case Status::LeftInvertible: return "LeftInvertible";
    case Status::RightInvertible: return "RightInvertible";
    case Status::GeneralizedInvertible: return "GeneralizedInvertible";
    case Status::NotInvertible: return "NotInvertible";
    case Status::Undetermined: return "Undetermined";
  }
  return "?";
}

/// Which inverse formula an expression implements.
enum class InverseFormula {
  right_simple,      // (I - H(c~)) Tr(c) T(a~^-1) Tr(d) + H(a^-1) Tr(d)
  generalized_rr,    // generalized inverse with right inverses of T(c), T(d)
  generalized_ll,    // left inverses of T(c), T(d)
  generalized_rl,    // right inverse of T(c), left inverse of T(d)
  mixed_corrected,   // generalized_rl with the projection correction on ker T(c)
  lifted,            // T(t^-n) P0 (lifted right inverse)
};

inline std::string to_string(InverseFormula f) {
  switch (f) {
    case InverseFormula::right_simple: return "right-simple";
    case InverseFormula::generalized_rr: return "generalized[Tr(c),Tr(d)]";
    case InverseFormula::generalized_ll: return "generalized[Tl(c),Tl(d)]";
    case InverseFormula::generalized_rl: return "generalized[Tr(c),Tl(d)]";
    case InverseFormula::mixed_corrected: return "generalized[Tr(c),Tl(d)]+ker-correction";
    case InverseFormula::lifted: return "lifted";
  }
  return "?";
}

struct NecessaryConditions {
  bool applicable = false;  // the indices fall under one of the rules
  bool satisfied = true;
  std::string rule;
};

struct ClassificationReport {
  Status status = Status::Undetermined;
  std::string clause;
  int kappa1 = 0, kappa2 = 0;
  int sigma_c = 1, sigma_d = 1;
  int dim_ker = 0, dim_coker = 0;
  KernelBasis kernel, cokernel;
  std::optional<OperatorExpr> inverse;
  std::optional<InverseFormula> inverse_formula;
  std::optional<cplx> wn_determinant;
  NecessaryConditions necessary;
};

// ---------------------------------------------------------------------------
// Windows and small helpers

namespace detail {

inline double root_decay(const RationalSymbol& g) {
  double r = 0.0;
  auto upd = [&r](const cplx& z) {
    const double m = std::abs(z);
    r = std::max(r, m < 1.0 ? m : 1.0 / m);
  };
  for (const auto& z : g.zeros()) upd(z);
  for (const auto& p : g.poles()) upd(p);
  return r;
}

inline CoeffWindow polynomial(const std::vector<std::pair<int, cplx>>& terms) {
  int lo = 0, hi = 0;
  bool first = true;
  for (const auto& [k, v] : terms) {
    lo = first ? k : std::min(lo, k);
    hi = first ? k : std::max(hi, k);
    first = false;
  }
  CoeffWindow w(lo, hi);
  for (const auto& [k, v] : terms) w[k] += v;
  return w;
}

inline bool is_zero_window(const CoeffWindow& w) {
  return std::all_of(w.coeffs.begin(), w.coeffs.end(), [](const cplx& z) { return z == cplx{}; });
}

inline CoeffWindow evaluate_generator(const OperatorExpr& g, int window) {
  return CompiledExpr(g).apply(CoeffWindow::unit(0), window);
}

inline Eigen::MatrixXcd columns(const std::vector<CoeffWindow>& v, int from, int to) {
  Eigen::MatrixXcd m(to - from + 1, static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i)
    for (int n = from; n <= to; ++n) m(n - from, static_cast<Eigen::Index>(i)) = v[i].at(n);
  return m;
}

inline int numerical_rank(const Eigen::MatrixXcd& m, double tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tol * s(0)) ++r;
  return r;
}

}  // namespace detail

/// Window large enough that kernel elements decay below 1e-16 inside it.
inline int auto_window(const MatchingPairAnalysis& m) {
  const double rho = std::max(detail::root_decay(m.a), detail::root_decay(m.b));
  int w = 64;
  if (rho > 0.0) w = std::max(w, static_cast<int>(std::ceil(std::log(1e-16) / std::log(rho))) + 32);
  w += 4 * (std::abs(m.kappa1) + std::abs(m.kappa2));
  return std::min(w, 8192);
}

inline int resolve_window(const MatchingPairAnalysis& m, const ClassifyOptions& opts) {
  return opts.window > 0 ? opts.window : auto_window(m);
}

// ---------------------------------------------------------------------------
// Bases of the projections on ker T(g)

/// Bases of im P_g^{+-} for a matching g with ind T(g) = n >= 0:
/// n = 2r: g_+^{-1}(t^{r-k-1} +- sigma t^{r+k}), k < r;
/// n = 2r+1: g_+^{-1}(t^{r+k} +- sigma t^{r-k}), k <= r, zero element dropped.
/// Negative index: the kernel is trivial and the basis is empty.
inline KernelBasis projection_basis(const RationalSymbol& g, int sign, int window = 128) {
  KernelBasis basis;
  basis.window = window;
  const auto mf = matching_factorization(g);
  const int n = mf.index_n;
  if (n <= 0) return basis;
  const cplx s = static_cast<double>(sign * mf.sigma);
  const auto inv_plus = E::mul(mf.plus.inverse());
  const std::string tag = std::string("B") + (sign > 0 ? "+" : "-");
  auto push = [&](CoeffWindow seed, int k) {
    if (detail::is_zero_window(seed)) return;
    auto gen = inv_plus * E::mul_window(std::move(seed));
    basis.elements.push_back(detail::evaluate_generator(gen, window));
    basis.generators.push_back(std::move(gen));
    basis.provenance.push_back(tag + "[k=" + std::to_string(k) + "]");
  };
  if (n % 2 == 0) {
    const int r = n / 2;
    for (int k = 0; k < r; ++k) push(detail::polynomial({{r - k - 1, 1.0}, {r + k, s}}), k);
  } else {
    const int r = (n - 1) / 2;
    for (int k = 0; k <= r; ++k) push(detail::polynomial({{r + k, 1.0}, {r - k, s}}), k);
  }
  return basis;
}

// ---------------------------------------------------------------------------
// Transition operators

/// phi_sign = (1/2)[(I - sign J Q c P) Tr(c) T(a~^-1) + sign J Q a~^-1], mapping
/// ker T(d) into ker(T(a) + sign H(b)). Needs kappa1 >= 0.
inline OperatorExpr transition_expr(const MatchingPairAnalysis& m, int sign) {
  if (m.kappa1 < 0) fail(ErrorCode::WrongIndices, "transition operators need ind T(c) >= 0");
  const cplx s = static_cast<double>(sign);
  const auto at_inv = m.a.tilde().inverse();
  const auto x = toeplitz_inverse_expr(m.c, Side::right) * E::toeplitz(at_inv);
  const auto jqcp = E::flip() * E::proj_q() * E::mul(m.c) * E::proj_p();
  const auto jqa = E::flip() * E::proj_q() * E::mul(at_inv);
  return 0.5 * ((E::identity() - s * jqcp) * x + s * jqa);
}

inline CoeffWindow transition_apply(const MatchingPairAnalysis& m, const CoeffWindow& s, int sign, int window = 0) {
  if (window <= 0) window = auto_window(m);
  const auto res = apply(E::toeplitz(m.d), s, window);
  const double scale = std::max(1.0, s.sup_norm());
  if (res.sup_norm(0, window / 2) > 1e-8 * scale) fail(ErrorCode::NotInKernel, "input is not in ker T(d)");
  return apply(transition_expr(m, sign), s, window);
}

// ---------------------------------------------------------------------------
// Kernels

namespace detail {

inline void prune_dependent(KernelBasis& b, double tol) {
  if (b.size() < 2) return;
  Eigen::MatrixXcd m = columns(b.elements, 0, b.window);
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const double nrm = m.col(j).norm();
    if (nrm > 0.0) m.col(j) /= nrm;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(m);
  qr.setThreshold(tol);
  const auto rank = qr.rank();
  if (rank == m.cols()) return;
  KernelBasis kept;
  kept.window = b.window;
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < rank; ++i) idx.push_back(qr.colsPermutation().indices()(i));
  std::sort(idx.begin(), idx.end());
  for (auto i : idx) {
    kept.elements.push_back(b.elements[static_cast<std::size_t>(i)]);
    kept.generators.push_back(b.generators[static_cast<std::size_t>(i)]);
    kept.provenance.push_back(b.provenance[static_cast<std::size_t>(i)]);
  }
  b = std::move(kept);
}

inline KernelBasis kernel_impl(const MatchingPairAnalysis& m, int sign, int window, double tol) {
  KernelBasis out;
  out.window = window;
  if (m.kappa1 >= 0) {
    if (m.kappa2 > 0) {
      const auto sd = projection_basis(m.d, sign, window);
      const auto phi = transition_expr(m, sign);
      for (std::size_t i = 0; i < sd.size(); ++i) {
        auto gen = phi * sd.generators[i];
        out.elements.push_back(evaluate_generator(gen, window));
        out.generators.push_back(std::move(gen));
        out.provenance.push_back("transition(" + sd.provenance[i] + "(d))");
      }
    }
    const auto pc = projection_basis(m.c, -sign, window);
    for (std::size_t i = 0; i < pc.size(); ++i) {
      out.elements.push_back(pc.elements[i]);
      out.generators.push_back(pc.generators[i]);
      out.provenance.push_back(pc.provenance[i] + "(c)");
    }
    prune_dependent(out, tol);
    return out;
  }
  // ker(T(a) + H(b)) = ker(T(a t^-n) + H(b t^n)) intersected with im T(t^n).
  const int n = (-m.kappa1 + 1) / 2;
  const auto lifted = subordinated_pair(m.a * RationalSymbol::monomial(-n), m.b * RationalSymbol::monomial(n));
  const auto inner = kernel_impl(lifted, sign, window + n, tol);
  if (inner.empty()) return out;
  const auto k = static_cast<Eigen::Index>(inner.size());
  Eigen::MatrixXcd constraints(n, k);
  std::vector<double> scale(inner.size());
  for (Eigen::Index i = 0; i < k; ++i) {
    const auto& el = inner.elements[static_cast<std::size_t>(i)];
    scale[static_cast<std::size_t>(i)] = 1.0 / std::max(el.sup_norm(), 1e-300);
    for (int j = 0; j < n; ++j) constraints(j, i) = el.at(j) * scale[static_cast<std::size_t>(i)];
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(constraints, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol) ++rank;
  for (Eigen::Index col = rank; col < k; ++col) {
    std::vector<OperatorExpr> terms;
    for (Eigen::Index i = 0; i < k; ++i) {
      const cplx coef = svd.matrixV()(i, col) * scale[static_cast<std::size_t>(i)];
      if (std::abs(coef) < 1e-15) continue;
      terms.push_back(coef * inner.generators[static_cast<std::size_t>(i)]);
    }
    auto gen = E::power(-n) * E::sum(terms);
    out.elements.push_back(evaluate_generator(gen, window));
    out.generators.push_back(std::move(gen));
    out.provenance.push_back("lift[n=" + std::to_string(n) + "](" + std::to_string(k) + " lifted elements)");
  }
  prune_dependent(out, tol);
  return out;
}

}  // namespace detail

/// Basis of ker(T(a) + sign H(b)).
inline KernelBasis kernel(const MatchingPairAnalysis& m, int sign = 1, const ClassifyOptions& opts = {}) {
  return detail::kernel_impl(m, sign, resolve_window(m, opts), opts.rank_tol);
}

/// Basis of the kernel of the adjoint T(conj a) + sign H(conj b~).
inline KernelBasis cokernel(const MatchingPairAnalysis& m, int sign = 1, const ClassifyOptions& opts = {}) {
  const auto adj = adjoint(m);
  ClassifyOptions o = opts;
  o.window = resolve_window(m, opts);
  return kernel(adj, sign, o);
}

// ---------------------------------------------------------------------------
// The balanced indices (-2n, 2n)

/// Generators of T^{-1}(c t^{-2n}) T(a~^{-1} t^{-n}) d_+^{-1} (t^{n-k-1} + sign sigma(d) t^{n+k}).
inline std::vector<OperatorExpr> omega_generators(const MatchingPairAnalysis& m, int n, int sign = 1) {
  if (n < 1 || m.kappa1 != -2 * n || m.kappa2 != 2 * n)
    fail(ErrorCode::WrongIndices, "omega functions need indices (-2n, 2n)");
  const auto head = toeplitz_inverse_expr(m.c * RationalSymbol::monomial(-2 * n), Side::two_sided) *
                    E::toeplitz(m.a.tilde().inverse() * RationalSymbol::monomial(-n)) *
                    E::mul(m.fd.plus.inverse());
  std::vector<OperatorExpr> gens;
  const cplx s = static_cast<double>(sign * m.sigma_d);
  for (int k = 0; k < n; ++k) gens.push_back(head * E::mul_window(detail::polynomial({{n - k - 1, 1.0}, {n + k, s}})));
  return gens;
}

struct OmegaZero {
  cplx plus;
  cplx minus;
};

/// Zero coefficients of omega^{a,b,+} and omega^{a,b,-} for indices (-2, 2).
inline OmegaZero omega_zero(const MatchingPairAnalysis& m, int window = 256) {
  if (m.kappa1 != -2 || m.kappa2 != 2) fail(ErrorCode::WrongIndices, "omega_zero needs indices (-2, 2)");
  const auto p = detail::evaluate_generator(omega_generators(m, 1, 1).front(), window);
  const auto q = detail::evaluate_generator(omega_generators(m, 1, -1).front(), window);
  return {p.at(0), q.at(0)};
}

struct WnResult {
  Eigen::MatrixXcd matrix;  // (j, k) entry: j-th coefficient of omega_k
  cplx determinant;
  bool nondegenerate = false;
  std::vector<CoeffWindow> omegas;
  std::vector<OperatorExpr> generators;
};

inline WnResult wn_matrix(const MatchingPairAnalysis& m, int n, int window = 256, double tol = 1e-8) {
  WnResult r;
  r.generators = omega_generators(m, n);
  for (const auto& g : r.generators) r.omegas.push_back(detail::evaluate_generator(g, window));
  r.matrix = detail::columns(r.omegas, 0, n - 1);
  r.determinant = r.matrix.determinant();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(r.matrix);
  const auto& s = svd.singularValues();
  r.nondegenerate = s(0) > 0.0 && s(s.size() - 1) > tol * s(0);
  return r;
}

// ---------------------------------------------------------------------------
// Inverse expressions

inline OperatorExpr right_inverse_expr(const MatchingPairAnalysis& m) {
  const auto tr_c = toeplitz_inverse_expr(m.c, Side::right);
  const auto tr_d = toeplitz_inverse_expr(m.d, Side::right);
  return (E::identity() - E::hankel(m.c.tilde())) * tr_c * E::toeplitz(m.a.tilde().inverse()) * tr_d +
         E::hankel(m.a.inverse()) * tr_d;
}

/// -H(c~)(A(I - H(d)) - B H(a~^-1)) + H(a^-1) D (I - H(d)) + T(a^-1) with
/// A = X(c) T(a~^-1) Y(d), B = -X(c), D = Y(d).
inline OperatorExpr generalized_inverse_expr(const MatchingPairAnalysis& m, Side side_c, Side side_d) {
  const auto xc = toeplitz_inverse_expr(m.c, side_c);
  const auto yd = toeplitz_inverse_expr(m.d, side_d);
  const auto at_inv = m.a.tilde().inverse();
  const auto one_minus_hd = E::identity() - E::hankel(m.d);
  const auto A = xc * E::toeplitz(at_inv) * yd;
  const auto B = -1.0 * xc;
  return -1.0 * E::hankel(m.c.tilde()) * (A * one_minus_hd - B * E::hankel(at_inv)) +
         E::hankel(m.a.inverse()) * yd * one_minus_hd + E::toeplitz(m.a.inverse());
}

/// For ind T(c) >= 0 >= ind T(d) the expression above satisfies G A = I + H(c~) Pi
/// with Pi = I - Tr(c) T(c) the projection onto ker T(c). H(c~) acts on ker T(c)
/// as JQcP, so Pi+ = (1/2)(I + H(c~)) Pi projects onto im P_c^+ and
/// (I - Pi+ / 2) G A = I - Pi-, where im Pi- = im P_c^- lies in ker A. The
/// corrected expression is therefore a generalized inverse, and the inverse
/// whenever A is invertible.
inline OperatorExpr mixed_generalized_inverse_expr(const MatchingPairAnalysis& m) {
  if (m.kappa1 < 0 || m.kappa2 > 0) fail(ErrorCode::WrongIndices, "needs ind T(c) >= 0 >= ind T(d)");
  const auto g = generalized_inverse_expr(m, Side::right, Side::left);
  if (m.kappa1 == 0) return g;
  const auto pi = E::identity() - toeplitz_inverse_expr(m.c, Side::right) * E::toeplitz(m.c);
  const auto pi_plus = 0.5 * (E::identity() + E::hankel(m.c.tilde())) * pi;
  return (E::identity() - 0.5 * pi_plus) * g;
}

struct LiftedInverse {
  OperatorExpr expr;
  Eigen::MatrixXcd W;  // (j, i): j-th coefficient of the i-th kernel element of the lifted operator
  KernelBasis lifted_kernel;
};

/// A = C T(t^n) with C = T(a t^-n) + H(b t^n) right-invertible. When A is
/// invertible, A^{-1} = T(t^-n) P0 C_r^{-1} with P0 x = x - sum k_i alpha_i,
/// alpha = W^{-1} (x_0, ..., x_{n-1}), where k_i span ker C.
inline LiftedInverse lifted_inverse_expr(const MatchingPairAnalysis& m, int n, int window = 0, double tol = 1e-8) {
  const auto lifted = subordinated_pair(m.a * RationalSymbol::monomial(-n), m.b * RationalSymbol::monomial(n));
  if (lifted.kappa1 < 0 || lifted.kappa2 < 0)
    fail(ErrorCode::CaseUnsupported, "lifted operator is not right-invertible");
  if (window <= 0) window = auto_window(m);
  LiftedInverse li;
  li.lifted_kernel = detail::kernel_impl(lifted, 1, window, tol);
  if (static_cast<int>(li.lifted_kernel.size()) != n)
    fail(ErrorCode::CaseUnsupported, "lifted kernel dimension differs from the shift");
  li.W = detail::columns(li.lifted_kernel.elements, 0, n - 1);
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(li.W);
  if (!lu.isInvertible()) fail(ErrorCode::CaseUnsupported, "lifted kernel meets im T(t^n)");
  const Eigen::MatrixXcd Winv = lu.inverse();
  std::vector<OperatorExpr> correction;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      correction.push_back(Winv(i, j) * li.lifted_kernel.generators[static_cast<std::size_t>(i)] *
                           coefficient_functional(j));
  const auto p0 = E::identity() - E::sum(correction);
  li.expr = E::toeplitz(RationalSymbol::monomial(-n)) * p0 * right_inverse_expr(lifted);
  return li;
}

// ---------------------------------------------------------------------------
// Decision

inline NecessaryConditions necessary_conditions(const MatchingPairAnalysis& m) {
  NecessaryConditions nc;
  const int k1 = m.kappa1, k2 = m.kappa2;
  if (k1 >= k2 || static_cast<long long>(k1) * k2 >= 0) {
    nc.applicable = true;
    nc.rule = "|k1| <= 1 and |k2| <= 1";
    nc.satisfied = std::abs(k1) <= 1 && std::abs(k2) <= 1;
    return nc;
  }
  nc.applicable = true;
  const bool odd1 = (k1 % 2) != 0, odd2 = (k2 % 2) != 0;
  if (!odd1 && !odd2) {
    nc.rule = "k2 = -k1";
    nc.satisfied = k2 == -k1;
  } else if (odd1 && !odd2) {
    nc.rule = "k2 = -k1 + sigma(c)";
    nc.satisfied = k2 == -k1 + m.sigma_c;
  } else if (!odd1 && odd2) {
    nc.rule = "k2 = -k1 - sigma(d)";
    nc.satisfied = k2 == -k1 - m.sigma_d;
  } else {
    nc.rule = "k2 = -k1 + sigma(c) - sigma(d)";
    nc.satisfied = k2 == -k1 + m.sigma_c - m.sigma_d;
  }
  return nc;
}

namespace detail {

inline std::string sig(int s) { return s > 0 ? "+1" : "-1"; }

/// Tag of the sufficient invertibility condition met by the indices and
/// signatures, if any.
inline std::optional<std::string> sufficient_clause(const MatchingPairAnalysis& m) {
  const int k1 = m.kappa1, k2 = m.kappa2, sc = m.sigma_c, sd = m.sigma_d;
  auto tag = [&](bool with_c, bool with_d) {
    std::string t = "sufficient[k=(" + std::to_string(k1) + "," + std::to_string(k2) + ")";
    if (with_c || with_d) {
      t += ",";
      if (with_c) t += "s(c)=" + sig(sc);
      if (with_c && with_d) t += ",";
      if (with_d) t += "s(d)=" + sig(sd);
    }
    return t + "]";
  };
  if (k1 == 0 && k2 == 0) return tag(false, false);
  if (k1 == 1 && k2 == 0 && sc == 1) return tag(true, false);
  if (k1 == 0 && k2 == 1 && sd == -1) return tag(false, true);
  if (k1 == 1 && k2 == 1 && sc == 1 && sd == -1) return tag(true, true);
  if (k1 == 0 && k2 == -1 && sd == 1) return tag(false, true);
  if (k1 == -1 && k2 == 0 && sc == -1) return tag(true, false);
  if (k1 == -1 && k2 == -1 && sc == -1 && sd == 1) return tag(true, true);
  if (k1 == 1 && k2 == -1 && sc == 1 && sd == 1) return tag(true, true);
  if (k1 == -1 && k2 == 1 && sc == -1 && sd == -1) return tag(true, true);
  return std::nullopt;
}

}  // namespace detail

inline ClassificationReport decide(const MatchingPairAnalysis& m, const ClassifyOptions& opts = {}) {
  ClassificationReport r;
  r.kappa1 = m.kappa1;
  r.kappa2 = m.kappa2;
  r.sigma_c = m.sigma_c;
  r.sigma_d = m.sigma_d;
  ClassifyOptions o = opts;
  o.window = resolve_window(m, opts);
  r.kernel = kernel(m, 1, o);
  r.cokernel = cokernel(m, 1, o);
  r.dim_ker = static_cast<int>(r.kernel.size());
  r.dim_coker = static_cast<int>(r.cokernel.size());
  r.necessary = necessary_conditions(m);
  const auto sufficient = detail::sufficient_clause(m);
  const int k1 = m.kappa1, k2 = m.kappa2;
  auto attach = [&](InverseFormula f, OperatorExpr e) {
    if (!o.with_inverse) return;
    r.inverse = std::move(e);
    r.inverse_formula = f;
  };

  if (k1 >= 0 && k2 >= 0) {
    r.status = r.dim_ker == 0 ? Status::Invertible : Status::RightInvertible;
    r.clause = sufficient.value_or("nonnegative-indices");
    if (o.with_inverse) attach(InverseFormula::right_simple, right_inverse_expr(m));
  } else if (k1 <= 0 && k2 <= 0) {
    r.status = r.dim_coker == 0 ? Status::Invertible : Status::LeftInvertible;
    r.clause = sufficient.value_or("nonpositive-indices");
    if (o.with_inverse) attach(InverseFormula::generalized_ll, generalized_inverse_expr(m, Side::left, Side::left));
  } else if (k1 > 0 && k2 < 0) {
    // A generalized inverse G of A satisfies AGA = A, so it is a left inverse
    // when A is injective and a right inverse when A is onto.
    if (sufficient || (r.dim_ker == 0 && r.dim_coker == 0)) r.status = Status::Invertible;
    else if (r.dim_ker == 0) r.status = Status::LeftInvertible;
    else if (r.dim_coker == 0) r.status = Status::RightInvertible;
    else r.status = Status::GeneralizedInvertible;
    r.clause = sufficient.value_or("mixed-indices[k1>0>k2]");
    if (o.with_inverse) attach(InverseFormula::mixed_corrected, mixed_generalized_inverse_expr(m));
  } else {
    // k1 < 0 < k2
    if (k1 == -k2 && k2 % 2 == 0) {
      const int n = k2 / 2;
      const auto w = wn_matrix(m, n, o.window, o.rank_tol);
      const auto wadj = wn_matrix(adjoint(m), n, o.window, o.rank_tol);
      r.wn_determinant = w.determinant;
      const std::string base = "balanced[n=" + std::to_string(n) + "]";
      if (w.nondegenerate && wadj.nondegenerate) {
        r.status = Status::Invertible;
        r.clause = base + ":W(a,b),W(adjoint)";
        if (o.with_inverse) attach(InverseFormula::lifted, lifted_inverse_expr(m, n, o.window, o.rank_tol).expr);
      } else if (w.nondegenerate) {
        r.status = Status::LeftInvertible;
        r.clause = base + ":W(a,b)";
      } else if (wadj.nondegenerate) {
        r.status = Status::RightInvertible;
        r.clause = base + ":W(adjoint)";
      } else {
        r.status = Status::NotInvertible;
        r.clause = base + ":degenerate";
      }
    } else if (sufficient) {
      r.status = Status::Invertible;
      r.clause = *sufficient;
      if (o.with_inverse) attach(InverseFormula::lifted, lifted_inverse_expr(m, 1, o.window, o.rank_tol).expr);
    } else if (!r.necessary.satisfied) {
      r.status = Status::NotInvertible;
      r.clause = "necessary-violated[" + r.necessary.rule + "]";
    } else {
      r.status = Status::Undetermined;
      r.clause = "mixed-indices[k1<0<k2]";
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Defect numbers from the antisymmetric factorizations of c and d~

struct DefectNumbers {
  int dim_ker = 0;
  int dim_coker = 0;
  int n = 0;  // half index of c
  int m = 0;  // half index of d~
  std::optional<Eigen::MatrixXcd> A;
};

inline DefectNumbers defect_numbers_be(const MatchingPairAnalysis& p, const ClassifyOptions& opts = {}) {
  AntisymFactorization fc, fdt;
  try {
    fc = antisymmetric_factorization(p.c);
    fdt = antisymmetric_factorization(p.d.tilde());
  } catch (const Error& e) {
    fail(ErrorCode::FactorizationUnavailable, e.what());
  }
  DefectNumbers out;
  const int n = fc.half_index, m = fdt.half_index;
  out.n = n;
  out.m = m;
  if (n > 0 && m <= 0) {
    out.dim_ker = 0;
    out.dim_coker = n - m;
  } else if (n <= 0 && m <= 0) {
    out.dim_ker = -n;
    out.dim_coker = -m;
  } else if (n <= 0 && m > 0) {
    out.dim_ker = m - n;
    out.dim_coker = 0;
  } else {
    RationalSymbol x, y;
    if (opts.rho_reading == RhoReading::tilde_of_plus) {
      x = fc.plus.tilde();
      y = fdt.plus.tilde();
    } else {
      x = antisymmetric_factorization(p.c.tilde()).plus;
      y = antisymmetric_factorization(p.d).plus;
    }
    const auto weight = RationalSymbol::zpk(1.0, -1, {-1.0, -1.0}, {});  // (1 + t)(1 + 1/t)
    const auto rho = RationalSymbol::monomial(-m - n) * weight * x * y / p.b;
    if (!rho.bounded_on_circle()) fail(ErrorCode::FactorizationUnavailable, "rho has a pole on the unit circle");
    const auto w = fourier_coefficients(rho, -(m + n), n + m);
    Eigen::MatrixXcd A(n, m);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) A(i, j) = w.at(i - j) + w.at(i + j);
    const int rank = detail::numerical_rank(A, opts.rank_tol);
    out.dim_ker = m - rank;
    out.dim_coker = n - rank;
    out.A = A;
  }
  return out;
}

}  // namespace thp
