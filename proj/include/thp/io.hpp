#pragma once

// JSON input and output. Complex numbers are [re, im] pairs; doubles are
// written in shortest round-trip form, so parse(dump(x)) reproduces x.
//
// Symbol input forms:
//   {"gain": z, "power": n, "zeros": [z...], "poles": [z...]}
//   {"num": {"k": z, ...}, "den": {"k": z, ...}}     Laurent coefficients by power
//   {"mul": [s...]}, {"div": [s, s]}, {"tilde": s}, {"bar": s}
// where z is a number or [re, im]. Piecewise constant symbols for the PC
// criterion are {"piecewise": [[angle, z], ...]} with ascending start angles.

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "thp/pc_fredholm.hpp"
#include "thp/verify.hpp"

namespace thp::io {

using json = nlohmann::json;

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  fail(ErrorCode::ParseError, "expected a number or [re, im], got " + j.dump());
}

inline json to_json(const std::vector<cplx>& v) {
  json a = json::array();
  for (const auto& z : v) a.push_back(to_json(z));
  return a;
}

inline std::vector<cplx> complex_list(const json& j, const char* what) {
  if (!j.is_array()) fail(ErrorCode::ParseError, std::string(what) + " must be an array");
  std::vector<cplx> out;
  for (const auto& e : j) out.push_back(complex_from_json(e));
  return out;
}

// ---------------------------------------------------------------------------
// Symbols

inline json to_json(const RationalSymbol& g) {
  return {{"gain", to_json(g.gain())}, {"power", g.power()}, {"zeros", to_json(g.zeros())}, {"poles", to_json(g.poles())}};
}

namespace detail {

inline LaurentPoly laurent_from_json(const json& j) {
  LaurentPoly p;
  if (!j.is_object()) fail(ErrorCode::ParseError, "Laurent coefficients must be an object keyed by power");
  for (const auto& [key, value] : j.items()) {
    int k = 0;
    try {
      std::size_t used = 0;
      k = std::stoi(key, &used);
      if (used != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      fail(ErrorCode::ParseError, "bad power key '" + key + "'");
    }
    p[k] += complex_from_json(value);
  }
  return p;
}

}  // namespace detail

inline RationalSymbol symbol_from_json(const json& j) {
  if (j.is_number() || j.is_array()) return RationalSymbol::constant(complex_from_json(j));
  if (!j.is_object()) fail(ErrorCode::ParseError, "symbol must be an object");
  if (j.contains("mul")) {
    RationalSymbol g = RationalSymbol::constant(1.0);
    for (const auto& f : j.at("mul")) g = g * symbol_from_json(f);
    return g;
  }
  if (j.contains("div")) {
    const auto& d = j.at("div");
    if (!d.is_array() || d.size() != 2) fail(ErrorCode::ParseError, "div takes two symbols");
    return symbol_from_json(d[0]) / symbol_from_json(d[1]);
  }
  if (j.contains("tilde")) return symbol_from_json(j.at("tilde")).tilde();
  if (j.contains("bar")) return symbol_from_json(j.at("bar")).bar();
  if (j.contains("num")) {
    LaurentSpec s;
    s.num = detail::laurent_from_json(j.at("num"));
    if (j.contains("den")) s.den = detail::laurent_from_json(j.at("den"));
    return make_symbol(s);
  }
  ZpkSpec s;
  if (j.contains("gain")) s.gain = complex_from_json(j.at("gain"));
  if (j.contains("power")) {
    if (!j.at("power").is_number_integer()) fail(ErrorCode::ParseError, "power must be an integer");
    s.power = j.at("power").get<int>();
  }
  if (j.contains("zeros")) s.zeros = complex_list(j.at("zeros"), "zeros");
  if (j.contains("poles")) s.poles = complex_list(j.at("poles"), "poles");
  return make_symbol(s);
}

inline json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, e.what());
  }
}

/// Inline JSON, or the path of a file holding it.
inline json load_argument(const std::string& arg) {
  const auto first = arg.find_first_not_of(" \t\n");
  if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[' || arg[first] == '-' ||
                                     std::isdigit(static_cast<unsigned char>(arg[first]))))
    return parse_text(arg);
  std::ifstream in(arg);
  if (!in) fail(ErrorCode::ParseError, "cannot read '" + arg + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str());
}

inline PCSymbol pc_symbol_from_json(const json& j) {
  if (j.is_object() && j.contains("piecewise")) {
    std::vector<std::pair<double, cplx>> starts;
    for (const auto& e : j.at("piecewise")) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number())
        fail(ErrorCode::ParseError, "piecewise entries are [angle, value]");
      starts.emplace_back(e[0].get<double>(), complex_from_json(e[1]));
    }
    if (starts.empty()) fail(ErrorCode::ParseError, "piecewise symbol without pieces");
    return PCSymbol::piecewise_constant(starts);
  }
  return PCSymbol::from_rational(symbol_from_json(j));
}

// ---------------------------------------------------------------------------
// Windows and expressions

inline json to_json(const CoeffWindow& w) {
  return {{"lo", w.lo}, {"hi", w.hi}, {"coeffs", to_json(w.coeffs)}, {"decay_ratio", w.decay_ratio},
          {"error_bound", w.error_bound}};
}

inline CoeffWindow window_from_json(const json& j) {
  const auto coeffs = complex_list(j.at("coeffs"), "coeffs");
  CoeffWindow w(j.at("lo").get<int>(), j.at("hi").get<int>());
  if (coeffs.size() != w.size()) fail(ErrorCode::ParseError, "window length differs from hi - lo + 1");
  w.coeffs = coeffs;
  w.decay_ratio = j.value("decay_ratio", 0.0);
  w.error_bound = j.value("error_bound", 0.0);
  return w;
}

/// The window cut to the indices whose entries exceed rel times its sup-norm.
inline CoeffWindow trimmed(const CoeffWindow& w, double rel = 1e-17) {
  const double cut = rel * w.sup_norm();
  int lo = w.hi + 1, hi = w.lo - 1;
  for (int n = w.lo; n <= w.hi; ++n)
    if (std::abs(w[n]) > cut) {
      lo = std::min(lo, n);
      hi = std::max(hi, n);
    }
  if (lo > hi) return w.restricted(0, 0);
  return w.restricted(lo, hi);
}

inline json to_json(const OperatorExpr& e) {
  using K = OperatorExpr::Kind;
  const auto& n = e.node();
  json j = {{"kind", to_string(n.kind)}};
  switch (n.kind) {
    case K::Compose:
    case K::Sum: {
      json c = json::array();
      for (const auto& ch : n.children) c.push_back(to_json(ch));
      j["children"] = c;
      break;
    }
    case K::Scale: j["scalar"] = to_json(n.scalar); break;
    case K::Toeplitz:
    case K::Hankel:
    case K::MulSymbol: j["symbol"] = to_json(*n.symbol); break;
    case K::MulWindow: j["window"] = to_json(*n.window); break;
    case K::Power: j["exponent"] = n.exponent; break;
    default: break;
  }
  return j;
}

inline OperatorExpr expr_from_json(const json& j) {
  using E = OperatorExpr;
  const auto kind = j.at("kind").get<std::string>();
  auto kids = [&] {
    std::vector<E> v;
    for (const auto& c : j.at("children")) v.push_back(expr_from_json(c));
    return v;
  };
  if (kind == "Identity") return E::identity();
  if (kind == "Compose") return E::compose(kids());
  if (kind == "Sum") return E::sum(kids());
  if (kind == "Scale") return E::scale(complex_from_json(j.at("scalar")));
  if (kind == "Toeplitz") return E::toeplitz(symbol_from_json(j.at("symbol")));
  if (kind == "Hankel") return E::hankel(symbol_from_json(j.at("symbol")));
  if (kind == "MulSymbol") return E::mul(symbol_from_json(j.at("symbol")));
  if (kind == "MulWindow") return E::mul_window(window_from_json(j.at("window")));
  if (kind == "ProjP") return E::proj_p();
  if (kind == "ProjQ") return E::proj_q();
  if (kind == "Flip") return E::flip();
  if (kind == "Power") return E::power(j.at("exponent").get<int>());
  fail(ErrorCode::ParseError, "unknown expression kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Reports

inline json to_json(const KernelBasis& b) {
  json el = json::array();
  for (const auto& w : b.elements) el.push_back(to_json(trimmed(w)));
  return {{"dimension", b.size()}, {"window", b.window}, {"provenance", b.provenance}, {"elements", el}};
}

inline json to_json(const NecessaryConditions& n) {
  return {{"applicable", n.applicable}, {"satisfied", n.satisfied}, {"rule", n.rule}};
}

inline json to_json(const ClassificationReport& r, bool with_expression = false) {
  json j = {{"status", to_string(r.status)},
            {"clause", r.clause},
            {"kappa1", r.kappa1},
            {"kappa2", r.kappa2},
            {"sigma_c", r.sigma_c},
            {"sigma_d", r.sigma_d},
            {"dim_ker", r.dim_ker},
            {"dim_coker", r.dim_coker},
            {"kernel", to_json(r.kernel)},
            {"cokernel", to_json(r.cokernel)},
            {"necessary", to_json(r.necessary)},
            {"inverse_formula", r.inverse_formula ? json(to_string(*r.inverse_formula)) : json(nullptr)},
            {"wn_determinant", r.wn_determinant ? to_json(*r.wn_determinant) : json(nullptr)}};
  if (with_expression) j["inverse"] = r.inverse ? to_json(*r.inverse) : json(nullptr);
  return j;
}

inline json to_json(const OracleReport& r) {
  json j = {{"N", r.N},
            {"singular_values_tail", r.singular_values_tail},
            {"coker_singular_values_tail", r.coker_singular_values_tail},
            {"est_dim_ker", r.est_dim_ker},
            {"est_dim_coker", r.est_dim_coker},
            {"unstable", r.unstable},
            {"residuals", r.residuals}};
  j["matches_expected"] = r.matches_expected ? json(*r.matches_expected) : json(nullptr);
  return j;
}

inline json to_json(const ClauseCheck& c) {
  return {{"name", c.name},         {"function", c.function}, {"angle", c.angle},      {"value", c.value},
          {"excluded", c.excluded}, {"distance", c.distance}, {"violated", c.violated}};
}

inline json to_json(const FredholmVerdict& v) {
  json checks = json::array(), bad = json::array();
  for (const auto& c : v.checks) {
    checks.push_back(to_json(c));
    if (c.violated) bad.push_back(to_json(c));
  }
  return {{"fredholm", v.fredholm}, {"violated_clauses", bad}, {"checks", checks}};
}

inline json error_json(const Error& e) {
  return {{"error", std::string(to_string(e.code()))}, {"message", e.what()}};
}

/// Curve as CSV rows: index, re, im, kind, cumulative argument.
inline std::string curve_csv(const ClosedCurve& c, const std::string& label = "") {
  std::ostringstream out;
  out.precision(17);
  for (std::size_t k = 0; k < c.points.size(); ++k) {
    if (!label.empty()) out << label << ',';
    out << k << ',' << c.points[k].real() << ',' << c.points[k].imag() << ',' << to_string(c.kinds[k]) << ','
        << (k < c.cumulative_arg.size() ? c.cumulative_arg[k] : 0.0) << '\n';
  }
  return out.str();
}

}  // namespace thp::io
