// thp_cli: batch front-end for the T(a) + H(b) library.
//
//   thp_cli analyze    --a SYM --b SYM
//   thp_cli kernel     --a SYM --b SYM
//   thp_cli inverse    --a SYM --b SYM [--n N] [--seed S]
//   thp_cli verify     --a SYM --b SYM [--n N] [--tol T] [--csv FILE]
//   thp_cli pc-index   (--a SYM --b SYM | --c PC [--d-tilde PC]) [--p P]
//   thp_cli curve-dump (--a SYM --b SYM | --c PC [--d-tilde PC]) [--p P]
//
// SYM is inline JSON or a file path. Exit status 0 on success, 2 on domain
// errors (error JSON on stdout), 1 on internal failures.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "thp/thp.hpp"

using namespace thp;
using io::json;

namespace {

struct RunConfig {
  std::string a, b, c, d_tilde;
  int N = 256;
  double tol = 1e-8;
  double p = 2.0;
  std::string out, csv;
  std::string rho_reading = "tilde-of-plus";
  std::uint64_t seed = default_seed;
};

void validate(const RunConfig& cfg) {
  const bool pow2 = cfg.N > 0 && (cfg.N & (cfg.N - 1)) == 0;
  if (!pow2 || cfg.N < 32 || cfg.N > 16384)
    fail(ErrorCode::InvalidConfig, "--n must be a power of two between 32 and 16384");
  if (!(cfg.p > 1.0)) fail(ErrorCode::InvalidConfig, "--p must exceed 1");
  if (!(cfg.tol > 0.0)) fail(ErrorCode::InvalidConfig, "--tol must be positive");
}

ClassifyOptions options(const RunConfig& cfg) {
  ClassifyOptions o;
  o.rank_tol = cfg.tol;
  o.rho_reading = cfg.rho_reading == "plus-of-tilde" ? RhoReading::plus_of_tilde : RhoReading::tilde_of_plus;
  return o;
}

MatchingPairAnalysis load_pair(const RunConfig& cfg) {
  if (cfg.a.empty() || cfg.b.empty()) fail(ErrorCode::InvalidConfig, "--a and --b are required");
  return subordinated_pair(io::symbol_from_json(io::load_argument(cfg.a)), io::symbol_from_json(io::load_argument(cfg.b)));
}

json pair_json(const MatchingPairAnalysis& m) {
  return {{"a", io::to_json(m.a)}, {"b", io::to_json(m.b)}, {"c", io::to_json(m.c)}, {"d", io::to_json(m.d)}};
}

json analyze(const RunConfig& cfg) {
  const auto m = load_pair(cfg);
  json j = io::to_json(decide(m, options(cfg)));
  j["pair"] = pair_json(m);
  try {
    const auto be = defect_numbers_be(m, options(cfg));
    j["defects_antisymmetric"] = {{"dim_ker", be.dim_ker}, {"dim_coker", be.dim_coker}, {"n", be.n}, {"m", be.m},
                                  {"rho_reading", cfg.rho_reading}};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::FactorizationUnavailable) throw;
    j["defects_antisymmetric"] = nullptr;
  }
  return j;
}

json kernels(const RunConfig& cfg) {
  const auto m = load_pair(cfg);
  const auto o = options(cfg);
  json j = {{"pair", pair_json(m)}, {"kappa1", m.kappa1}, {"kappa2", m.kappa2}};
  for (int sign : {1, -1})
    j[sign > 0 ? "plus" : "minus"] = {{"kernel", io::to_json(kernel(m, sign, o))},
                                      {"cokernel", io::to_json(cokernel(m, sign, o))}};
  return j;
}

json inverse(const RunConfig& cfg) {
  const auto m = load_pair(cfg);
  const auto rep = decide(m, options(cfg));
  json j = {{"status", to_string(rep.status)}, {"clause", rep.clause}};
  j["inverse_formula"] = rep.inverse_formula ? json(to_string(*rep.inverse_formula)) : json(nullptr);
  if (!rep.inverse) {
    j["expression"] = nullptr;
    j["residuals"] = nullptr;
    return j;
  }
  j["expression"] = io::to_json(*rep.inverse);
  const auto A = toeplitz_plus_hankel(m.a, m.b);
  const auto inputs = random_windows(8, cfg.N / 4, cfg.seed);
  auto res = residual(inverse_checks(A, *rep.inverse), inputs, cfg.N);
  // Generalized inverses satisfy A G A = A.
  res["generalized"] = residual(A * *rep.inverse * A, A, inputs, cfg.N);
  j["residuals"] = res;
  j["residual_window"] = cfg.N;
  return j;
}

json verify(const RunConfig& cfg) {
  const auto m = load_pair(cfg);
  const auto o = options(cfg);
  const auto rep = decide(m, o);
  auto r = svd_defects(m, cfg.N, 1, std::make_pair(rep.dim_ker, rep.dim_coker), cfg.tol);
  const auto A = toeplitz_plus_hankel(m.a, m.b);
  const auto adj = adjoint(m);
  const int w = std::max(cfg.N, rep.kernel.window);
  r.residuals["kernel"] = kernel_residual(A, rep.kernel, w);
  r.residuals["cokernel"] = kernel_residual(toeplitz_plus_hankel(adj.a, adj.b), rep.cokernel, w);
  if (rep.inverse) {
    const auto inputs = random_windows(8, cfg.N / 4, cfg.seed);
    r.residuals["generalized_inverse"] = residual(A * *rep.inverse * A, A, inputs, cfg.N);
  }
  if (!cfg.csv.empty()) {
    std::ofstream out(cfg.csv);
    if (!out) fail(ErrorCode::InvalidConfig, "cannot write '" + cfg.csv + "'");
    out.precision(17);
    out << "section,rank_from_bottom,singular_value\n";
    for (std::size_t k = 0; k < r.singular_values_tail.size(); ++k) out << "tall," << k << ',' << r.singular_values_tail[k] << '\n';
    for (std::size_t k = 0; k < r.coker_singular_values_tail.size(); ++k)
      out << "wide," << k << ',' << r.coker_singular_values_tail[k] << '\n';
  }
  json j = io::to_json(r);
  j["classify"] = {{"dim_ker", rep.dim_ker}, {"dim_coker", rep.dim_coker}, {"status", to_string(rep.status)}};
  return j;
}

std::pair<PCSymbol, PCSymbol> load_pc(const RunConfig& cfg) {
  if (!cfg.c.empty()) {
    const auto c = io::pc_symbol_from_json(io::load_argument(cfg.c));
    const auto dt = cfg.d_tilde.empty() ? PCSymbol::from_rational(RationalSymbol::constant(1.0))
                                        : io::pc_symbol_from_json(io::load_argument(cfg.d_tilde));
    return {c, dt};
  }
  const auto m = load_pair(cfg);
  return {PCSymbol::from_rational(m.c), PCSymbol::from_rational(m.d.tilde())};
}

json pc_index(const RunConfig& cfg) {
  const auto [c, dt] = load_pc(cfg);
  const auto v = fredholm_conditions(c, dt, cfg.p);
  json j = io::to_json(v);
  j["p"] = cfg.p;
  j["q"] = dual_exponent(cfg.p);
  j["index"] = v.fredholm ? json(be_index(c, dt, cfg.p)) : json(nullptr);
  return j;
}

std::string curve_dump(const RunConfig& cfg) {
  const auto [c, dt] = load_pc(cfg);
  return "function,index,re,im,kind,cumulative_arg\n" + io::curve_csv(sharp_curve(c, cfg.p), "c") +
         io::curve_csv(sharp_curve(dt, dual_exponent(cfg.p)), "d~");
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty() || cfg.out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.out);
  if (!out) fail(ErrorCode::InvalidConfig, "cannot write '" + cfg.out + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Invertibility of Toeplitz plus Hankel operators with rational matching symbols"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub, bool pc) {
    sub->add_option("--a", cfg.a, "symbol a (inline JSON or file)");
    sub->add_option("--b", cfg.b, "symbol b (inline JSON or file)");
    sub->add_option("--n", cfg.N, "truncation order / evaluation window")->capture_default_str();
    sub->add_option("--tol", cfg.tol, "rank tolerance")->capture_default_str();
    sub->add_option("--p", cfg.p, "Hardy space exponent")->capture_default_str();
    sub->add_option("--out", cfg.out, "output path (stdout by default)");
    sub->add_option("--rho-reading", cfg.rho_reading, "rho factor reading")
        ->check(CLI::IsMember({"tilde-of-plus", "plus-of-tilde"}))
        ->capture_default_str();
    sub->add_option("--seed", cfg.seed, "seed for random test vectors")->capture_default_str();
    if (pc) {
      sub->add_option("--c", cfg.c, "function c, possibly piecewise constant");
      sub->add_option("--d-tilde", cfg.d_tilde, "function d~ (default 1)");
    }
  };
  auto* analyze_cmd = app.add_subcommand("analyze", "classification report");
  auto* kernel_cmd = app.add_subcommand("kernel", "kernel and cokernel bases for both signs");
  auto* inverse_cmd = app.add_subcommand("inverse", "inverse expression and residuals");
  auto* verify_cmd = app.add_subcommand("verify", "dense finite-section oracle");
  auto* pc_cmd = app.add_subcommand("pc-index", "piecewise continuous Fredholm criterion and index");
  auto* curve_cmd = app.add_subcommand("curve-dump", "closed index curves as CSV");
  for (auto* s : {analyze_cmd, kernel_cmd, inverse_cmd, verify_cmd}) add_common(s, false);
  for (auto* s : {pc_cmd, curve_cmd}) add_common(s, true);
  verify_cmd->add_option("--csv", cfg.csv, "write the singular value tails as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cout << json{{"error", "InvalidConfig"}, {"message", e.what()}}.dump(2) << '\n';
    return 2;
  }

  try {
    validate(cfg);
    if (curve_cmd->parsed()) {
      emit(cfg, curve_dump(cfg));
      return 0;
    }
    json j;
    if (analyze_cmd->parsed()) j = analyze(cfg);
    else if (kernel_cmd->parsed()) j = kernels(cfg);
    else if (inverse_cmd->parsed()) j = inverse(cfg);
    else if (verify_cmd->parsed()) j = verify(cfg);
    else j = pc_index(cfg);
    emit(cfg, j.dump(2) + "\n");
    return 0;
  } catch (const Error& e) {
    std::cout << io::error_json(e).dump(2) << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cout << json{{"error", "Internal"}, {"message", e.what()}}.dump(2) << '\n';
    return 1;
  }
}
