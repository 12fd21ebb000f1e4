#include "pnf/verifier.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <boost/multiprecision/cpp_int.hpp>

namespace pnf {

namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

double reach_of(const TestFunction& phi, bool symmetric) {
  return symmetric ? std::max(std::abs(phi.support_min()), std::abs(phi.support_max())) : phi.support_max();
}

void check_monic(std::span<const Complex> c) {
  if (c.size() < 2) throw InvalidArgument("polynomial must have degree >= 1");
  if (c[0] != Complex(1.0)) throw InvalidArgument("polynomial must be monic");
}

bool integer_valued(std::span<const Complex> c) {
  for (const auto& x : c) {
    if (x.imag() != 0.0 || std::floor(x.real()) != x.real() || std::abs(x.real()) > 9.0e15) return false;
  }
  return true;
}

// S_m = -(c_1 S_{m-1} + ... + c_{m-1} S_1) - m c_m, with c_j = 0 beyond the degree.
std::vector<cpp_int> newton_recurrence(const std::vector<cpp_int>& c, int m_max) {
  const int n = static_cast<int>(c.size()) - 1;
  std::vector<cpp_int> S(m_max + 1);
  for (int m = 1; m <= m_max; ++m) {
    cpp_int s = 0;
    for (int j = 1; j < m && j <= n; ++j) s -= c[j] * S[m - j];
    if (m <= n) s -= m * c[m];
    S[m] = s;
  }
  return S;
}

cpp_int factorial(int n) {
  cpp_int r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

// m * sum of b_k over k with sum_j j k_j = m, in exact arithmetic.
cpp_rational composition_power_sum(const std::vector<cpp_int>& c, int m) {
  const int n = static_cast<int>(c.size()) - 1;
  std::vector<int> k(n + 1, 0);
  cpp_rational total = 0;
  auto visit = [&](auto&& self, int j, int remaining) -> void {
    if (remaining == 0) {
      int order = 0;
      cpp_int denom = 1;
      cpp_int prod = 1;
      for (int i = 1; i <= n; ++i) {
        if (k[i] == 0) continue;
        order += k[i];
        denom *= factorial(k[i]);
        prod *= boost::multiprecision::pow(c[i], static_cast<unsigned>(k[i]));
      }
      if (prod == 0) return;
      cpp_rational b(factorial(order) * prod, denom * order);
      total += (order % 2 ? -b : b);
      return;
    }
    if (j > n) return;
    for (int count = 0; count * j <= remaining; ++count) {
      k[j] = count;
      self(self, j + 1, remaining - count * j);
    }
    k[j] = 0;
  };
  visit(visit, 1, m);
  return total * m;
}

// Same sum in floating point through the log expansion on the lattice lambda * Z.
std::vector<Complex> expansion_power_sums(std::span<const Complex> c, double lambda, int m_max) {
  const int n = static_cast<int>(c.size()) - 1;
  std::vector<double> freqs;
  std::vector<Complex> coeffs;
  std::vector<std::int64_t> mult;
  for (int j = 1; j <= n; ++j) {
    freqs.push_back(j * lambda);
    coeffs.push_back(c[j]);
    mult.push_back(j);
  }
  std::vector<Complex> S(m_max + 1, Complex(0.0));
  bool any = false;
  for (const auto& a : coeffs) any = any || a != Complex(0.0);
  if (!any) return S;
  const auto f = DirichletSeries::create(freqs, coeffs, lambda, mult);
  const auto expansion = log_expansion(f, (m_max + 0.5) * lambda);
  for (const auto& atom : atom_measure(expansion, true, lambda)) {
    const auto m = static_cast<int>(std::lround(atom.frequency / lambda));
    if (m >= 1 && m <= m_max) S[m] = atom.weight / lambda;
  }
  return S;
}

}  // namespace

template <typename Scalar>
std::vector<std::complex<Scalar>> polynomial_roots(std::span<const Complex> poly_coeffs) {
  check_monic(poly_coeffs);
  using C = std::complex<Scalar>;
  using Matrix = Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index n = static_cast<Eigen::Index>(poly_coeffs.size()) - 1;
  Matrix companion = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    companion(0, j) = -C(Scalar(poly_coeffs[j + 1].real()), Scalar(poly_coeffs[j + 1].imag()));
  }
  for (Eigen::Index i = 1; i < n; ++i) companion(i, i - 1) = C(1);
  Eigen::ComplexEigenSolver<Matrix> solver(companion, false);
  if (solver.info() != Eigen::Success) throw RootSolveFailure("companion eigenvalue iteration did not converge");
  std::vector<C> roots(n);
  for (Eigen::Index i = 0; i < n; ++i) roots[i] = solver.eigenvalues()[i];
  return roots;
}

template std::vector<std::complex<double>> polynomial_roots<double>(std::span<const Complex>);
template std::vector<std::complex<long double>> polynomial_roots<long double>(std::span<const Complex>);

VerificationReport verify_poisson_newton(const DirichletSeries& f, const TestFunction& phi,
                                         const PoissonNewtonOptions& options) {
  const auto divisor = locate_divisor(f, options.height, options.locate);
  return verify_poisson_newton(f, divisor, phi, options);
}

VerificationReport verify_poisson_newton(const DirichletSeries& f, const Divisor& divisor,
                                         const TestFunction& phi, const PoissonNewtonOptions& options) {
  const bool symmetric = options.symmetric;
  if (!symmetric && phi.support_min() < 0.0) {
    throw InvalidArgument("one-sided Poisson-Newton check needs phi supported in (0, inf)");
  }
  const double cutoff = options.cutoff > 0.0 ? options.cutoff : reach_of(phi, symmetric);

  PairingOptions pairing;
  pairing.mode = symmetric ? PairingMode::symmetric : PairingMode::one_sided;
  if (symmetric) pairing.regularize_at = options.sigma;
  const auto lhs = divisor_pairing(divisor, phi, options.beta, pairing);
  const auto atoms = atom_measure(f, cutoff);
  const auto rhs = atom_pairing(atoms, cutoff, phi, options.beta, symmetric);

  Complex delta = 0.0;
  Complex c0 = 0.0;
  double c0_tail = 0.0;
  if (symmetric) {
    if (options.c0) {
      c0 = *options.c0;
    } else {
      const double right = std::max(zero_strip(f).re_max, options.sigma.real()) + 2.5;
      const auto dc = discrepancy_c0(f, divisor, options.sigma, options.s0.value_or(Complex(right, 0.0)));
      c0 = dc.c0;
      c0_tail = dc.tail_estimate;
    }
    const Complex even[1] = {c0};
    delta = delta_zero_terms(even, phi);
  }

  auto report = make_report(symmetric ? "poisson_newton_symmetric" : "poisson_newton", lhs.value, rhs.value + delta,
                            options.tolerance);
  report.params["H"] = divisor.window.valid() ? divisor.window.im_max : options.height;
  report.params["T"] = cutoff;
  report.params["beta"] = options.beta;
  report.params["divisor_degree"] = divisor.degree();
  report.params["divisor_residual_bound"] = divisor.residual_bound;
  report.params["divisor_tail"] = lhs.tail_estimate;
  report.params["atom_count"] = static_cast<double>(atoms.size());
  report.params["tail_estimate"] = lhs.tail_estimate + 2.0 * c0_tail * std::abs(phi(0.0));
  if (symmetric) {
    report.params["sigma_re"] = options.sigma.real();
    report.params["sigma_im"] = options.sigma.imag();
    report.params["c0_re"] = c0.real();
    report.params["c0_im"] = c0.imag();
    report.params["c0_tail"] = c0_tail;
    report.notes["c0_source"] = options.c0 ? "supplied" : "discrepancy_c0";
  }
  report.notes["phi"] = phi.to_string();
  return report;
}

VerificationReport verify_classical_poisson(double lambda, const TestFunction& phi, double height,
                                            double tolerance) {
  if (!(lambda > 0.0)) throw InvalidArgument("lambda must be positive");
  const auto f = DirichletSeries::create({lambda}, {Complex(-1.0)}, lambda);
  PoissonNewtonOptions options;
  options.height = height;
  options.symmetric = true;
  options.sigma = 0.0;
  options.c0 = Complex(lambda / 2.0);
  options.tolerance = tolerance;
  auto report = verify_poisson_newton(f, phi, options);
  report.scenario = "classical_poisson";
  report.params["lambda"] = lambda;
  return report;
}

std::vector<VerificationReport> verify_newton_identities(std::span<const Complex> poly_coeffs, double lambda,
                                                         int m_max, double tolerance) {
  check_monic(poly_coeffs);
  if (m_max < 1) throw InvalidArgument("m_max must be >= 1");
  if (!(lambda > 0.0)) throw InvalidArgument("lambda must be positive");
  const int n = static_cast<int>(poly_coeffs.size()) - 1;

  const auto roots = polynomial_roots<long double>(poly_coeffs);
  std::vector<std::complex<long double>> powers(roots.size(), std::complex<long double>(1));

  const bool exact = integer_valued(poly_coeffs);
  std::vector<cpp_int> c_int;
  std::vector<cpp_int> recurrence;
  std::vector<Complex> floating;
  if (exact) {
    for (const auto& x : poly_coeffs) c_int.emplace_back(static_cast<long long>(x.real()));
    recurrence = newton_recurrence(c_int, m_max);
  } else {
    floating = expansion_power_sums(poly_coeffs, lambda, m_max);
  }

  std::vector<VerificationReport> reports;
  for (int m = 1; m <= m_max; ++m) {
    std::complex<long double> root_sum = 0;
    long double magnitude = 0;
    for (std::size_t j = 0; j < roots.size(); ++j) {
      powers[j] *= roots[j];
      root_sum += powers[j];
      magnitude += std::abs(powers[j]);
    }
    Complex composition;
    bool exact_match = true;
    if (exact) {
      const cpp_rational s = composition_power_sum(c_int, m);
      exact_match = s == cpp_rational(recurrence[m]);
      composition = Complex(s.convert_to<double>());
    } else {
      composition = floating[m];
    }
    const Complex from_roots(static_cast<double>(root_sum.real()), static_cast<double>(root_sum.imag()));
    auto r = make_report("newton_identities", composition, from_roots, tolerance);
    // the root side cancels; measure against the size of its terms
    const double scale = std::max({std::abs(composition), std::abs(from_roots), static_cast<double>(magnitude), 1e-300});
    r.rel_err = r.abs_err / scale;
    r.pass = r.rel_err <= tolerance && exact_match;
    r.params["m"] = m;
    r.params["degree"] = n;
    r.params["lambda"] = lambda;
    r.params["root_power_magnitude"] = static_cast<double>(magnitude);
    r.params["exact_path"] = exact ? 1.0 : 0.0;
    if (exact) {
      r.params["exact_abs_err"] = exact_match ? 0.0 : 1.0;
      r.notes["S_m_exact"] = recurrence[m].str();
      r.notes["composition_vs_recurrence"] = exact_match ? "equal" : "differ";
    }
    reports.push_back(std::move(r));
  }
  return reports;
}

VerificationReport verify_s4_closed_form(std::span<const std::int64_t> poly_coeffs) {
  if (poly_coeffs.size() < 2 || poly_coeffs[0] != 1) throw InvalidArgument("polynomial must be monic of degree >= 1");
  std::vector<cpp_int> c;
  for (const auto x : poly_coeffs) c.emplace_back(x);
  auto e = [&](int j) -> cpp_int {
    if (j >= static_cast<int>(c.size())) return 0;
    return j % 2 ? cpp_int(-c[j]) : c[j];
  };
  const cpp_int e1 = e(1), e2 = e(2), e3 = e(3), e4 = e(4);
  const cpp_int closed = e1 * e1 * e1 * e1 - 4 * e2 * e1 * e1 + 4 * e3 * e1 + 2 * e2 * e2 - 4 * e4;
  const cpp_int recurrence = newton_recurrence(c, 4)[4];
  auto r = make_report("newton_s4_closed_form", Complex(closed.convert_to<double>()),
                       Complex(recurrence.convert_to<double>()), 0.0);
  r.abs_err = closed == recurrence ? 0.0 : std::max(r.abs_err, 1.0);
  r.rel_err = closed == recurrence ? 0.0 : std::max(r.rel_err, 1e-300);
  r.pass = closed == recurrence;
  r.params["degree"] = static_cast<double>(poly_coeffs.size() - 1);
  r.notes["S4_closed_form"] = closed.str();
  r.notes["S4_recurrence"] = recurrence.str();
  return r;
}

VerificationReport verify_explicit_formula(const TestFunction& phi, const ZeroTable& zeros,
                                           std::optional<std::size_t> zero_count, const PrimeTable& primes,
                                           double tolerance) {
  const auto check = explicit_formula_check(phi, zeros, zero_count, primes);
  const Complex rhs = check.pole_side + check.archimedean_side - check.prime_side;
  auto r = make_report("explicit_formula", check.zero_side, rhs, tolerance);
  // the zero side can be tiny; scale by the largest of the assembled terms
  r.rel_err = check.relative_residual;
  r.pass = r.rel_err <= tolerance;
  r.params["N"] = static_cast<double>(check.zero_count);
  r.params["X"] = static_cast<double>(check.prime_limit);
  r.params["residual"] = check.residual;
  r.params["zero_tail"] = check.zero_tail;
  r.params["quadrature_tolerance"] = check.quadrature_tolerance;
  r.params["pole_side"] = check.pole_side.real();
  r.params["archimedean_side"] = check.archimedean_side.real();
  r.params["prime_side"] = check.prime_side.real();
  r.notes["phi"] = phi.to_string();
  if (!zeros.source_path.empty()) r.notes["zeros"] = zeros.source_path;
  return r;
}

std::vector<VerificationReport> explicit_formula_study(const TestFunction& phi, const ZeroTable& zeros,
                                                       const std::vector<std::size_t>& zero_counts,
                                                       const PrimeTable& primes, double tolerance) {
  std::vector<VerificationReport> out;
  for (const auto n : zero_counts) {
    auto r = verify_explicit_formula(phi, zeros, n, primes, tolerance);
    if (!out.empty()) {
      const double prev = out.back().params.at("residual");
      r.params["residual_ratio"] = prev > 0.0 ? r.params.at("residual") / prev : 0.0;
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<VerificationReport> poisson_newton_height_study(const DirichletSeries& f, const TestFunction& phi,
                                                            const std::vector<double>& heights,
                                                            const PoissonNewtonOptions& options) {
  auto reports = parallel_map(heights.size(), [&](std::size_t i) {
    auto o = options;
    o.height = heights[i];
    return verify_poisson_newton(f, phi, o);
  });
  for (std::size_t i = 1; i < reports.size(); ++i) {
    const double prev = reports[i - 1].rel_err;
    reports[i].params["rel_err_ratio"] = prev > 0.0 ? reports[i].rel_err / prev : 0.0;
  }
  return reports;
}

}  // namespace pnf
