// vtl: norms, phi-system checks, pairings and verification suites.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "vtl/duality.hpp"
#include "vtl/error.hpp"
#include "vtl/harness.hpp"
#include "vtl/io.hpp"
#include "vtl/lebesgue.hpp"
#include "vtl/mixed.hpp"
#include "vtl/phi_system.hpp"
#include "vtl/sequence.hpp"

namespace {

struct Globals {
  int n = 1;
  int J = 1;
  int L = 9;
  int V_max = 6;
  std::uint64_t seed = 1;
  double tol = vtl::kDefaultTol;
  bool hex = false;

  vtl::Grid grid() const { return vtl::Grid::make(n, J, L, V_max); }
};

void print_value(double x, bool hex) {
  if (hex)
    std::printf("%a\n", x);
  else
    std::printf("%.12f\n", x);
}

struct NormArgs {
  std::string kind = "lp";
  std::string p = "const:2";
  std::string q = "const:2";
  std::string alpha = "const:0";
  std::string path = "lqLp";
  std::string family = "unit";
  int spu = static_cast<int>(vtl::kDefaultSamplesPerUnit);
  std::string input;
};

int cmd_norm(const Globals& G, const NormArgs& a) {
  const vtl::Grid g = G.grid();
  const auto p = vtl::load_exponent(g, a.p);
  const auto q = vtl::load_exponent(g, a.q);
  const auto family = a.family == "all" ? vtl::CubeFamily::all : vtl::CubeFamily::unit_or_smaller;
  const auto path = a.path == "Lplq" ? vtl::MixedPath::Lp_lq : vtl::MixedPath::lq_Lp;
  double value = 0.0;
  if (a.kind == "lp") {
    value = vtl::lp_norm(vtl::load_gridfn(a.input, g), p, G.tol);
  } else if (a.kind == "lqLp") {
    value = vtl::norm_lq_Lp(vtl::load_fnseq(a.input, g), p, q, G.tol);
  } else if (a.kind == "Lplq") {
    value = vtl::norm_Lp_lq(vtl::load_fnseq(a.input, g), p, q, G.tol);
  } else if (a.kind == "btilde") {
    const auto alpha = vtl::load_exponent(g, a.alpha);
    value = vtl::norm_btilde(vtl::load_coefficients(a.input, g), alpha, p, q, family, path, G.tol).value;
  } else if (a.kind == "f") {
    const auto alpha = vtl::load_exponent(g, a.alpha);
    value = vtl::norm_f(vtl::load_coefficients(a.input, g), alpha, q);
  } else {
    const auto alpha = vtl::load_exponent(g, a.alpha);
    const auto sys = vtl::build_fj_system(g, a.spu);
    const auto f = vtl::load_gridfn(a.input, g);
    value = a.kind == "B" ? vtl::norm_B_function(f, alpha, p, q, sys, family, G.tol).value
                          : vtl::norm_F_function(f, alpha, p, q, sys, G.tol);
  }
  print_value(value, G.hex);
  return 0;
}

struct VerifyArgs {
  std::string suite;
  int trials = 0;
  std::string p, q, alpha;
  double decay = 0.5;
  std::string out;
  std::string csv;
};

vtl::TrialConfig make_config(const Globals& G, const VerifyArgs& a, const std::string& suite) {
  vtl::TrialConfig cfg;
  cfg.suite = suite;
  cfg.seed = G.seed;
  cfg.n = G.n;
  cfg.J = G.J;
  cfg.L = G.L;
  cfg.V_max = G.V_max;
  cfg.tol = G.tol;
  cfg.trials = a.trials;
  cfg.p = a.p;
  cfg.q = a.q;
  cfg.alpha = a.alpha;
  cfg.decay = a.decay;
  return cfg;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(path);
  if (!os) throw vtl::InputError("cannot write '" + path + "'");
  os << text;
}

int cmd_verify(const Globals& G, const VerifyArgs& a) {
  if (!vtl::is_suite(a.suite)) throw vtl::InputError("unknown suite '" + a.suite + "'");
  const vtl::SuiteReport r = vtl::run_suite(make_config(G, a, a.suite));
  std::ostringstream ss;
  vtl::write_report(ss, r);
  emit(a.out, ss.str());
  if (!a.csv.empty()) {
    std::ostringstream cs;
    vtl::write_ratios_csv(cs, r);
    emit(a.csv, cs.str());
  }
  return r.pass ? 0 : 1;
}

int cmd_report(const Globals& G, const VerifyArgs& a, const std::vector<std::string>& suites) {
  const auto& names = suites.empty() ? vtl::suite_names() : suites;
  for (const auto& s : names)
    if (!vtl::is_suite(s)) throw vtl::InputError("unknown suite '" + s + "'");
  std::ostringstream ss, summary;
  bool all = true;
  for (const auto& s : names) {
    const vtl::SuiteReport r = vtl::run_suite(make_config(G, a, s));
    vtl::write_report(ss, r);
    ss << '\n';
    char line[160];
    std::snprintf(line, sizeof line, "%-10s %s  C=%.6g  runtime=%.2fs\n", s.c_str(), r.pass ? "PASS" : "FAIL",
                  r.constant, r.runtime);
    summary << line;
    all = all && r.pass;
  }
  emit(a.out, ss.str() + summary.str());
  return all ? 0 : 1;
}

int cmd_phicheck(const Globals& G, int spu, const std::string& export_path) {
  const vtl::PhiSystem sys = vtl::build_fj_system(G.n, G.J, G.L, G.V_max, spu);
  std::ostringstream ss;
  ss << "grid n=" << G.n << " J=" << G.J << " L=" << G.L << " V_max=" << G.V_max << '\n';
  ss << "support_Phi=|xi|<=2\nsupport_phi=1/2<=|xi|<=2\n";
  vtl::write_certificate(ss, sys.certificate);
  const bool ok = sys.certificate.passes(1e-8);
  ss << "pass=" << (ok ? "true" : "false") << '\n';
  std::cout << ss.str();
  if (!export_path.empty()) {
    std::ostringstream es;
    vtl::write_phisys(es, sys);
    emit(export_path, es.str());
  }
  return ok ? 0 : 1;
}

struct PairArgs {
  std::string lambda, s;
  std::string q, alpha;
};

int cmd_pair(const Globals& G, const PairArgs& a) {
  const vtl::Grid g = G.grid();
  const auto lambda = vtl::load_coefficients(a.lambda, g);
  const auto s = vtl::load_coefficients(a.s, g);
  const vtl::Complex T = vtl::pairing(lambda, s);
  if (G.hex)
    std::printf("%a %a\n", T.real(), T.imag());
  else
    std::printf("%.12f %.12f\n", T.real(), T.imag());
  if (!a.q.empty()) {
    const auto q = vtl::load_exponent(g, a.q);
    const auto alpha = vtl::load_exponent(g, a.alpha.empty() ? "const:0" : a.alpha);
    const auto qc = vtl::conjugate_exponent(q);
    const double ns = vtl::norm_f(s, alpha, q);
    const double nl = vtl::norm_btilde(lambda, alpha.negated(), qc, qc, vtl::CubeFamily::unit_or_smaller,
                                       vtl::MixedPath::Lp_lq, G.tol)
                          .value;
    std::printf("norm_f_s=%.12f\nnorm_btilde_lambda=%.12f\nratio=%.12f\n", ns, nl,
                ns * nl > 0.0 ? std::abs(T) / (ns * nl) : 0.0);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variable-exponent Besov/Triebel-Lizorkin toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals G;
  app.add_option("--n", G.n, "dimension (1 or 2)");
  app.add_option("--J", G.J, "box half-width exponent");
  app.add_option("--L", G.L, "cell level");
  app.add_option("--Vmax", G.V_max, "finest dyadic level");
  app.add_option("--seed", G.seed, "random seed");
  app.add_option("--tol", G.tol, "root-finding tolerance");
  app.add_flag("--hex", G.hex, "print values as hex floats");

  NormArgs na;
  auto* norm = app.add_subcommand("norm", "evaluate a norm");
  norm->add_option("--kind", na.kind, "lp, lqLp, Lplq, btilde, f, B or F")
      ->check(CLI::IsMember({"lp", "lqLp", "Lplq", "btilde", "f", "B", "F"}));
  norm->add_option("--p", na.p, "exponent preset or file");
  norm->add_option("--q", na.q, "exponent preset or file");
  norm->add_option("--alpha", na.alpha, "smoothness preset or file");
  norm->add_option("--path", na.path, "mixed path for btilde")->check(CLI::IsMember({"lqLp", "Lplq"}));
  norm->add_option("--family", na.family, "cube family")->check(CLI::IsMember({"unit", "all"}));
  norm->add_option("--spu", na.spu, "radial samples per unit frequency");
  norm->add_option("input", na.input, "input file")->required();

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "run one verification suite");
  verify->add_option("--suite", va.suite, "suite name")->required();
  verify->add_option("--trials", va.trials, "trial count (0 = suite default)");
  verify->add_option("--p", va.p);
  verify->add_option("--q", va.q);
  verify->add_option("--alpha", va.alpha);
  verify->add_option("--decay", va.decay, "coefficient decay");
  verify->add_option("--out", va.out, "report file");
  verify->add_option("--csv", va.csv, "per-trial ratio CSV");

  VerifyArgs ra;
  std::vector<std::string> suites;
  auto* report = app.add_subcommand("report", "run several suites and summarise");
  report->add_option("--suites", suites, "suite names (default: all)")->delimiter(',');
  report->add_option("--trials", ra.trials, "trial count (0 = suite defaults)");
  report->add_option("--decay", ra.decay, "coefficient decay");
  report->add_option("--out", ra.out, "report file");

  int spu = static_cast<int>(vtl::kDefaultSamplesPerUnit);
  std::string export_path;
  auto* phicheck = app.add_subcommand("phicheck", "build and certify the phi-system");
  phicheck->add_option("--spu", spu, "radial samples per unit frequency");
  phicheck->add_option("--export", export_path, "write the filters to a file");

  PairArgs pa;
  auto* pair = app.add_subcommand("pair", "evaluate T_lambda(s)");
  pair->add_option("lambda", pa.lambda, "coefficient file")->required();
  pair->add_option("s", pa.s, "coefficient file")->required();
  pair->add_option("--q", pa.q, "report the pairing bound with this q");
  pair->add_option("--alpha", pa.alpha, "smoothness for the pairing bound");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(vtl::ExitCode::input);
  }

  try {
    if (*norm) return cmd_norm(G, na);
    if (*verify) return cmd_verify(G, va);
    if (*report) return cmd_report(G, ra, suites);
    if (*phicheck) return cmd_phicheck(G, spu, export_path);
    if (*pair) return cmd_pair(G, pa);
  } catch (const vtl::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(e.exit_code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(vtl::ExitCode::input);
  }
  return 0;
}
