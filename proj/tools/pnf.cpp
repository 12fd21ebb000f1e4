// pnf: command-line front end for the Poisson-Newton checks.
//
// Exit codes: 0 all reports pass, 1 some report misses its tolerance,
// 2 usage error, 3 data error.

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pnf/io.hpp"
#include "pnf/verifier.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitTolerance = 1;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string scenario;
  std::string series_path;
  std::string zeros_path;
  std::string selberg_path;
  double height = 1000.0;
  double cutoff = 0.0;
  std::size_t zero_count = 0;
  std::uint64_t prime_limit = 1000000;
  std::string test = "gaussian:center=0,width=1";
  std::optional<double> tolerance;
  std::string out;
  // scenario specific
  double beta = 0.0;
  bool symmetric = false;
  double sigma = 0.0;
  std::optional<double> c0;
  double lambda = 1.0;
  std::vector<double> poly;
  int m_max = 8;
  std::vector<std::size_t> study;
  std::string divisor_csv;
  std::string divisor_json;
  std::string atoms_csv;

  void validate() const {
    if (!(height > 0.0)) throw UsageError("--height must be positive");
    if (cutoff < 0.0) throw UsageError("--cutoff must be positive");
    if (prime_limit < 2) throw UsageError("--primes must be at least 2");
    if (tolerance && !(*tolerance > 0.0 && *tolerance < 1.0)) throw UsageError("--tol must lie in (0, 1)");
    if (!(lambda > 0.0)) throw UsageError("--lambda must be positive");
    if (m_max < 1) throw UsageError("--mmax must be >= 1");
  }
};

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text << "\n";
  } else {
    pnf::io::write_file(cfg.out, text + "\n");
  }
}

int emit_reports(const RunConfig& cfg, const std::vector<pnf::VerificationReport>& reports) {
  emit(cfg, pnf::io::reports_to_json(reports));
  for (const auto& r : reports) {
    if (!r.pass) return kExitTolerance;
  }
  return kExitPass;
}

pnf::TestFunction test_function(const RunConfig& cfg) {
  try {
    return pnf::TestFunction::parse(cfg.test);
  } catch (const pnf::Error& e) {
    throw UsageError(e.what());
  }
}

int run_analyze(const RunConfig& cfg) {
  const auto f = pnf::io::load_series(cfg.series_path);
  const auto divisor = pnf::locate_divisor(f, cfg.height);
  const double cutoff = cfg.cutoff > 0.0 ? cfg.cutoff : 10.0;
  const auto atoms = pnf::atom_measure(f, cutoff);
  const auto fe = pnf::detect_functional_equation(f);
  const auto strip = pnf::zero_strip(f);
  if (!cfg.divisor_csv.empty()) pnf::io::write_file(cfg.divisor_csv, pnf::io::divisor_to_csv(divisor));
  if (!cfg.divisor_json.empty()) pnf::io::write_file(cfg.divisor_json, pnf::io::divisor_to_json(divisor));
  if (!cfg.atoms_csv.empty()) pnf::io::write_file(cfg.atoms_csv, pnf::io::atoms_to_csv(atoms));
  nlohmann::json summary;
  summary["abscissa"] = pnf::abscissa(f);
  summary["strip"] = {{"re_min", strip.re_min}, {"re_max", strip.re_max}};
  summary["height"] = cfg.height;
  summary["divisor_degree"] = divisor.degree();
  summary["divisor_points"] = divisor.points.size();
  summary["residual_bound"] = divisor.residual_bound;
  summary["atom_cutoff"] = cutoff;
  summary["atom_count"] = atoms.size();
  summary["real_analytic"] = pnf::is_real_analytic(f);
  summary["functional_equation"] = {{"has_fe", fe.has_fe}, {"mu", fe.mu}, {"c", fe.c}, {"note", fe.axis_note}};
  emit(cfg, summary.dump(2));
  return kExitPass;
}

int run_detect_fe(const RunConfig& cfg) {
  const auto f = pnf::io::load_series(cfg.series_path);
  const auto fe = pnf::detect_functional_equation(f);
  nlohmann::json out = {{"has_fe", fe.has_fe}, {"mu", fe.mu}, {"c", fe.c}, {"note", fe.axis_note}};
  emit(cfg, out.dump(2));
  return kExitPass;
}

int run_verify_pn(const RunConfig& cfg) {
  const auto f = pnf::io::load_series(cfg.series_path);
  const auto phi = test_function(cfg);
  pnf::PoissonNewtonOptions options;
  options.height = cfg.height;
  options.cutoff = cfg.cutoff;
  options.beta = cfg.beta;
  options.symmetric = cfg.symmetric;
  options.sigma = cfg.sigma;
  if (cfg.c0) options.c0 = pnf::Complex(*cfg.c0);
  options.tolerance = cfg.tolerance.value_or(pnf::kDefaultTolerance);
  if (!options.symmetric && phi.support_min() < 0.0) {
    throw UsageError("one-sided check needs a test function supported in (0, inf); use --symmetric");
  }
  return emit_reports(cfg, {pnf::verify_poisson_newton(f, phi, options)});
}

int run_verify_poisson(const RunConfig& cfg) {
  const auto phi = test_function(cfg);
  return emit_reports(cfg, {pnf::verify_classical_poisson(cfg.lambda, phi, cfg.height,
                                                          cfg.tolerance.value_or(pnf::kDefaultTolerance))});
}

int run_verify_newton(const RunConfig& cfg) {
  if (cfg.poly.size() < 2) throw UsageError("--poly needs at least two coefficients");
  if (cfg.poly.front() != 1.0) throw UsageError("--poly must be monic (leading coefficient 1)");
  std::vector<pnf::Complex> coeffs(cfg.poly.begin(), cfg.poly.end());
  auto reports = pnf::verify_newton_identities(coeffs, cfg.lambda, cfg.m_max, cfg.tolerance.value_or(1e-9));
  return emit_reports(cfg, reports);
}

int run_verify_explicit(const RunConfig& cfg) {
  const auto phi = test_function(cfg);
  const auto zeros = pnf::load_zeta_zeros(cfg.zeros_path);
  const auto primes = pnf::sieve_primes(cfg.prime_limit);
  const double tol = cfg.tolerance.value_or(1e-3);
  if (!cfg.study.empty()) return emit_reports(cfg, pnf::explicit_formula_study(phi, zeros, cfg.study, primes, tol));
  std::optional<std::size_t> count;
  if (cfg.zero_count > 0) count = cfg.zero_count;
  return emit_reports(cfg, {pnf::verify_explicit_formula(phi, zeros, count, primes, tol)});
}

int run_verify_selberg(const RunConfig& cfg) {
  const auto phi = test_function(cfg);
  const auto data = pnf::io::load_selberg(cfg.selberg_path);
  return emit_reports(cfg, {pnf::selberg_instance_check(data, phi, cfg.tolerance.value_or(1e-10))});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Poisson-Newton formula checks for Dirichlet series"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::optional<double> tol;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out, "Write output to this path instead of stdout");
    sub->add_option("--tol", tol, "Relative pass tolerance");
  };
  auto add_test = [&](CLI::App* sub) {
    sub->add_option("--test", cfg.test, "Test function, e.g. gaussian:center=0,width=1");
  };

  auto* analyze = app.add_subcommand("analyze", "Locate the divisor and atoms; dump CSV for plotting");
  analyze->add_option("--series", cfg.series_path, "Series JSON")->required()->check(CLI::ExistingFile);
  analyze->add_option("--height", cfg.height, "Divisor height H");
  analyze->add_option("--cutoff", cfg.cutoff, "Atom cutoff T");
  analyze->add_option("--divisor-csv", cfg.divisor_csv, "Divisor CSV output (re,im,mult)");
  analyze->add_option("--divisor-json", cfg.divisor_json, "Divisor JSON output");
  analyze->add_option("--atoms-csv", cfg.atoms_csv, "Atom CSV output (frequency,weight_re,weight_im)");
  add_common(analyze);

  auto* pn = app.add_subcommand("verify-pn", "Poisson-Newton check for a finite series");
  pn->add_option("--series", cfg.series_path, "Series JSON")->required()->check(CLI::ExistingFile);
  pn->add_option("--height", cfg.height, "Divisor height H");
  pn->add_option("--cutoff", cfg.cutoff, "Atom cutoff T (default: reach of the test function)");
  pn->add_option("--beta", cfg.beta, "Exponential shift beta");
  pn->add_flag("--symmetric", cfg.symmetric, "Symmetric form on R");
  pn->add_option("--sigma", cfg.sigma, "Center of the discrepancy constant (symmetric form)");
  pn->add_option("--c0", cfg.c0, "Supply c0(sigma) instead of computing it");
  add_test(pn);
  add_common(pn);

  auto* poisson = app.add_subcommand("verify-poisson", "Classical Poisson summation as 1 - exp(-lambda s)");
  poisson->add_option("--lambda", cfg.lambda, "Period lambda");
  poisson->add_option("--height", cfg.height, "Divisor height H");
  add_test(poisson);
  add_common(poisson);

  auto* newton = app.add_subcommand("verify-newton", "Newton identities for a monic polynomial");
  newton->add_option("--poly", cfg.poly, "Coefficients from the leading term, comma separated")
      ->required()
      ->delimiter(',')
      ->allow_extra_args(false);
  newton->add_option("--mmax", cfg.m_max, "Largest power sum index");
  newton->add_option("--lambda", cfg.lambda, "Frequency step of the associated series");
  add_common(newton);

  auto* expl = app.add_subcommand("verify-explicit", "Explicit formula for zeta");
  expl->add_option("--zeros", cfg.zeros_path, "Zero ordinates, one per line")->required()->check(CLI::ExistingFile);
  expl->add_option("--primes", cfg.prime_limit, "Prime limit X");
  expl->add_option("--count", cfg.zero_count, "Number of zeros N (default: all)");
  expl->add_option("--study", cfg.study, "Comma separated zero counts for a convergence study")->delimiter(',');
  add_test(expl);
  add_common(expl);

  auto* selberg = app.add_subcommand("verify-selberg", "Selberg trace formula for supplied data");
  selberg->add_option("--data", cfg.selberg_path, "Selberg instance JSON")->required()->check(CLI::ExistingFile);
  add_test(selberg);
  add_common(selberg);

  auto* fe = app.add_subcommand("detect-fe", "Detect a functional equation");
  fe->add_option("--series", cfg.series_path, "Series JSON")->required()->check(CLI::ExistingFile);
  add_common(fe);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  cfg.tolerance = tol;
  cfg.scenario = app.get_subcommands().front()->get_name();
  try {
    cfg.validate();
    if (cfg.scenario == "analyze") return run_analyze(cfg);
    if (cfg.scenario == "verify-pn") return run_verify_pn(cfg);
    if (cfg.scenario == "verify-poisson") return run_verify_poisson(cfg);
    if (cfg.scenario == "verify-newton") return run_verify_newton(cfg);
    if (cfg.scenario == "verify-explicit") return run_verify_explicit(cfg);
    if (cfg.scenario == "verify-selberg") return run_verify_selberg(cfg);
    if (cfg.scenario == "detect-fe") return run_detect_fe(cfg);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const pnf::InvalidArgument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const pnf::Error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
