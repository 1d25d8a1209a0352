#pragma once

// Dense finite-section oracles: SVD defect counts, interior residuals of
// operator identities, and convergence sweeps over the truncation order.

#include <algorithm>
#include <future>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "thp/classify.hpp"

namespace thp {

struct OracleReport {
  int N = 0;
  std::vector<double> singular_values_tail;         // smallest values of the tall section, ascending
  std::vector<double> coker_singular_values_tail;   // same for the wide section
  int est_dim_ker = 0, est_dim_coker = 0;
  bool unstable = false;
  std::optional<bool> matches_expected;
  std::map<std::string, double> residuals;
};

/// The sections used for defect counting: columns 0..N-1 against rows
/// 0..N+extra-1 (kernel side) and rows 0..N-1 against columns 0..N+extra-1
/// (cokernel side).
struct DenseSections {
  Eigen::MatrixXcd tall, wide;
};

inline DenseSections dense_sections(const RationalSymbol& a, const RationalSymbol& b, int N, int extra) {
  DenseSections s;
  s.tall = truncate(a, b, N, extra).tall;
  s.wide = truncate(a, b, N + extra).entries().topRows(N);
  return s;
}

inline DenseSections dense_sections(const OperatorExpr& e, int N, int extra) {
  DenseSections s;
  const Eigen::MatrixXcd big = dense_section(e, N + extra, N + extra);
  s.tall = big.leftCols(N);
  s.wide = big.topRows(N);
  return s;
}

namespace detail {

struct GapCount {
  int count = 0;
  bool stable = true;
  std::vector<double> ascending;
};

// Counts singular values below tol * s_max. The counted cluster must sit at
// least a factor 10 below the next value; with an empty cluster the smallest
// value must clear the threshold by the same factor.
inline GapCount gap_count(const Eigen::MatrixXcd& m, double tol) {
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
  const Eigen::VectorXd s = svd.singularValues();  // descending
  GapCount g;
  g.ascending.assign(s.data(), s.data() + s.size());
  std::reverse(g.ascending.begin(), g.ascending.end());
  if (s.size() == 0 || s(0) == 0.0) {
    g.stable = false;
    return g;
  }
  const double cut = tol * s(0);
  for (double v : g.ascending)
    if (v < cut) ++g.count;
  const auto n = g.ascending.size();
  if (static_cast<std::size_t>(g.count) == n) g.stable = false;
  else if (g.count == 0) g.stable = g.ascending.front() >= 10.0 * cut;
  else g.stable = g.ascending[g.count] >= 10.0 * g.ascending[g.count - 1];
  return g;
}

inline std::vector<double> head(const std::vector<double>& v, std::size_t k) {
  return {v.begin(), v.begin() + static_cast<std::ptrdiff_t>(std::min(k, v.size()))};
}

}  // namespace detail

/// Near-kernel counts of the tall section and of the adjoint of the wide one.
inline OracleReport svd_defects(const DenseSections& op, std::optional<std::pair<int, int>> expected = std::nullopt,
                                double tol = 1e-8) {
  OracleReport r;
  r.N = static_cast<int>(op.tall.cols());
  const auto k = detail::gap_count(op.tall, tol);
  const auto c = detail::gap_count(op.wide.adjoint(), tol);
  r.est_dim_ker = k.count;
  r.est_dim_coker = c.count;
  r.unstable = !k.stable || !c.stable;
  const std::size_t tail = 2 * static_cast<std::size_t>(std::max(1, k.count + c.count));
  r.singular_values_tail = detail::head(k.ascending, tail);
  r.coker_singular_values_tail = detail::head(c.ascending, tail);
  if (expected) r.matches_expected = expected->first == r.est_dim_ker && expected->second == r.est_dim_coker;
  return r;
}

/// Square sections: the kernel and cokernel counts of the matrix itself.
inline OracleReport svd_defects(const Eigen::MatrixXcd& m, std::optional<std::pair<int, int>> expected = std::nullopt,
                                double tol = 1e-8) {
  return svd_defects(DenseSections{m, m}, expected, tol);
}

inline int minimum_truncation(const MatchingPairAnalysis& m) {
  return 4 * (std::abs(m.kappa1) + std::abs(m.kappa2) + 1);
}

/// Defect counts of T(a) + sign H(b) from sections of order N with N/2 extra rows.
inline OracleReport svd_defects(const MatchingPairAnalysis& m, int N, int sign = 1,
                                std::optional<std::pair<int, int>> expected = std::nullopt, double tol = 1e-8) {
  if (N < minimum_truncation(m))
    fail(ErrorCode::TruncationTooSmall, "truncation " + std::to_string(N) + " below " +
                                            std::to_string(minimum_truncation(m)) + " for these indices");
  const auto b = sign > 0 ? m.b : -1.0 * m.b;
  return svd_defects(dense_sections(m.a, b, N, N / 2), expected, tol);
}

// ---------------------------------------------------------------------------
// Residuals

inline constexpr std::uint64_t default_seed = 0x5EED;

/// Gaussian random analytic windows supported on [0, len).
inline std::vector<CoeffWindow> random_windows(int count, int len, std::uint64_t seed = default_seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01;
  std::vector<CoeffWindow> out;
  for (int k = 0; k < count; ++k) {
    CoeffWindow w(0, len - 1);
    for (auto& z : w.coeffs) z = cplx(n01(rng), n01(rng));
    out.push_back(std::move(w));
  }
  return out;
}

/// A named identity lhs = rhs between operators on analytic sequences.
struct IdentityCheck {
  std::string name;
  OperatorExpr lhs, rhs;
};

/// Largest interior sup-norm of (lhs - rhs) x over the inputs, measured on
/// [0, window / 2] where both sides are exact.
inline double residual(const OperatorExpr& lhs, const OperatorExpr& rhs, const std::vector<CoeffWindow>& inputs,
                       int window) {
  const CompiledExpr L(lhs), R(rhs);
  double worst = 0.0;
  for (const auto& x : inputs) {
    const auto y = L.apply(x, window) - R.apply(x, window);
    worst = std::max(worst, y.sup_norm(0, window / 2));
  }
  return worst;
}

inline std::map<std::string, double> residual(const std::vector<IdentityCheck>& checks,
                                              const std::vector<CoeffWindow>& inputs, int window) {
  std::map<std::string, double> out;
  for (const auto& c : checks) out[c.name] = residual(c.lhs, c.rhs, inputs, window);
  return out;
}

/// Sup-norm of A x over [0, window / 2] for each kernel element x.
inline double kernel_residual(const OperatorExpr& A, const KernelBasis& basis, int window) {
  const CompiledExpr ce(A);
  double worst = 0.0;
  for (const auto& x : basis.elements) worst = std::max(worst, ce.apply(x, window).sup_norm(0, window / 2) / std::max(1.0, x.sup_norm()));
  return worst;
}

/// The two product identities T(ab) = T(a)T(b) + H(a)H(b~) and
/// H(ab) = T(a)H(b) + H(a)T(b~).
inline std::vector<IdentityCheck> widom_checks(const RationalSymbol& a, const RationalSymbol& b) {
  using E = OperatorExpr;
  return {{"widom_toeplitz", E::toeplitz(a * b), E::toeplitz(a) * E::toeplitz(b) + E::hankel(a) * E::hankel(b.tilde())},
          {"widom_hankel", E::hankel(a * b), E::toeplitz(a) * E::hankel(b) + E::hankel(a) * E::toeplitz(b.tilde())}};
}

/// Left and right inverse residuals of G against A.
inline std::vector<IdentityCheck> inverse_checks(const OperatorExpr& A, const OperatorExpr& G) {
  return {{"left_inverse", G * A, OperatorExpr::identity()}, {"right_inverse", A * G, OperatorExpr::identity()}};
}

/// The explicit inverse of T(a) + H(a t^-2), a = (1 - g/t)/(1 - g t), in the
/// closed factored form.
inline OperatorExpr closed_form_gamma_inverse(double gamma) {
  using E = OperatorExpr;
  const auto t = RationalSymbol::monomial(1), ti = RationalSymbol::monomial(-1);
  const auto p = RationalSymbol::one_minus_t(gamma), m = RationalSymbol::one_minus_tinv(gamma);
  const auto a = m / p;
  const double w = gamma * gamma - gamma + 1.0;
  const E corr = E::identity() - cplx(1.0 / w) * E::compose({E::proj_p(), E::mul(m * p * RationalSymbol::zpk(1.0, 0, {-1.0}, {})), E::proj_q(), E::power(-1)});
  return E::compose({E::toeplitz(ti), corr, E::toeplitz(a * ti) + E::hankel(a.inverse() * t), E::toeplitz(p * p),
                     E::toeplitz((m * m).inverse()), E::toeplitz(t * t)});
}

inline MatchingPairAnalysis gamma_pair(double gamma) {
  const auto a = RationalSymbol::one_minus_tinv(gamma) / RationalSymbol::one_minus_t(gamma);
  return subordinated_pair(a, a * RationalSymbol::monomial(-2));
}

// ---------------------------------------------------------------------------
// Sweeps

struct SweepRow {
  int N = 0;
  OracleReport report;
  double smallest_singular_value = 0.0;
};

struct SweepTable {
  std::vector<SweepRow> rows;
  bool stabilized = false;  // counts constant across all N and no row unstable
  int dim_ker = 0, dim_coker = 0;
};

/// svd_defects over several truncation orders, run concurrently.
inline SweepTable convergence_sweep(const MatchingPairAnalysis& m, const std::vector<int>& Ns, int sign = 1,
                                    double tol = 1e-8) {
  std::vector<std::future<SweepRow>> jobs;
  for (int N : Ns)
    jobs.push_back(std::async(std::launch::async, [&m, N, sign, tol] {
      SweepRow row;
      row.N = N;
      row.report = svd_defects(m, N, sign, std::nullopt, tol);
      row.smallest_singular_value = row.report.singular_values_tail.empty() ? 0.0 : row.report.singular_values_tail.front();
      return row;
    }));
  SweepTable t;
  for (auto& j : jobs) t.rows.push_back(j.get());
  if (t.rows.empty()) return t;
  t.dim_ker = t.rows.back().report.est_dim_ker;
  t.dim_coker = t.rows.back().report.est_dim_coker;
  t.stabilized = std::all_of(t.rows.begin(), t.rows.end(), [&](const SweepRow& r) {
    return !r.report.unstable && r.report.est_dim_ker == t.dim_ker && r.report.est_dim_coker == t.dim_coker;
  });
  return t;
}

}  // namespace thp
