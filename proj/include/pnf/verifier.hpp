#pragma once

// End-to-end checks that evaluate both sides of an identity and emit a
// VerificationReport. Tolerance misses are reported, never thrown.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pnf/divisor.hpp"
#include "pnf/number_theory.hpp"
#include "pnf/report.hpp"
#include "pnf/series.hpp"
#include "pnf/transforms.hpp"

namespace pnf {

inline constexpr double kDefaultTolerance = 1e-6;

struct PoissonNewtonOptions {
  double height = 1000.0;        // divisor truncation H
  double cutoff = 0.0;           // atom cutoff T; 0 picks the reach of phi
  double beta = 0.0;
  bool symmetric = false;
  Complex sigma = 0.0;           // symmetric mode: center of the discrepancy constant
  std::optional<Complex> c0;     // symmetric mode: supplied c0(sigma), else computed
  std::optional<Complex> s0;     // evaluation point for the computed c0
  double tolerance = kDefaultTolerance;
  LocateOptions locate;
};

/// Locates the divisor up to options.height and compares both sides.
VerificationReport verify_poisson_newton(const DirichletSeries& f, const TestFunction& phi,
                                         const PoissonNewtonOptions& options);
/// Same with a divisor already located (its window height is used as H).
VerificationReport verify_poisson_newton(const DirichletSeries& f, const Divisor& divisor,
                                         const TestFunction& phi, const PoissonNewtonOptions& options);

/// Symmetric check on 1 - exp(-lambda s) with c0 = lambda / 2.
VerificationReport verify_classical_poisson(double lambda, const TestFunction& phi, double height = 1e4,
                                            double tolerance = kDefaultTolerance);

/// Coefficients are listed from the leading term down, e.g. {1, -3, 2} for z^2 - 3z + 2.
/// One report per m = 1..m_max comparing m * sum b_k (composition side) with
/// the power sums of the companion-matrix roots. Integer inputs take an
/// exact rational path which is also checked against the Newton recurrence.
std::vector<VerificationReport> verify_newton_identities(std::span<const Complex> poly_coeffs, double lambda,
                                                         int m_max, double tolerance = 1e-9);

/// Roots of a monic polynomial as eigenvalues of its companion matrix.
template <typename Scalar>
std::vector<std::complex<Scalar>> polynomial_roots(std::span<const Complex> poly_coeffs);

/// S_4 = e1^4 - 4 e2 e1^2 + 4 e3 e1 + 2 e2^2 - 4 e4 for an integer monic
/// polynomial, compared exactly with the Newton recurrence.
VerificationReport verify_s4_closed_form(std::span<const std::int64_t> poly_coeffs);

/// lhs = zero side, rhs = pole + archimedean - prime.
VerificationReport verify_explicit_formula(const TestFunction& phi, const ZeroTable& zeros,
                                           std::optional<std::size_t> zero_count, const PrimeTable& primes,
                                           double tolerance = 1e-3);

/// Explicit-formula reports at each zero count, with residual_ratio recorded
/// against the previous entry.
std::vector<VerificationReport> explicit_formula_study(const TestFunction& phi, const ZeroTable& zeros,
                                                       const std::vector<std::size_t>& zero_counts,
                                                       const PrimeTable& primes, double tolerance = 1e-3);

/// The same Poisson-Newton check at increasing heights; each report carries
/// rel_err_ratio against the previous one.
std::vector<VerificationReport> poisson_newton_height_study(const DirichletSeries& f, const TestFunction& phi,
                                                            const std::vector<double>& heights,
                                                            const PoissonNewtonOptions& options);

}  // namespace pnf
