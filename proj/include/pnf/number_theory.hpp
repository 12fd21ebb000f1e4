#pragma once

// The Riemann zeta instance of the formula: primes, zero tables, digamma,
// the archimedean weight Psi(t), closed-form c0 constants, the three sides
// of the explicit formula, the trivial-divisor remainder W0 and a data-driven
// Selberg trace formula checker.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pnf/common.hpp"
#include "pnf/report.hpp"
#include "pnf/transforms.hpp"

namespace pnf {

struct PrimeTable {
  std::vector<std::uint32_t> primes;
  std::uint64_t limit = 0;
};

/// All primes <= X (segmented sieve of Eratosthenes).
PrimeTable sieve_primes(std::uint64_t X);

struct ZeroTable {
  std::vector<double> gammas;
  std::string source_path;
  [[nodiscard]] std::size_t count() const { return gammas.size(); }
};

/// One positive decimal per line, non-decreasing (repeated lines encode
/// multiplicity); blank lines and lines starting with '#' are skipped.
ZeroTable load_zeta_zeros(const std::string& path);
ZeroTable parse_zeta_zeros(const std::string& text, const std::string& source = "<memory>");

Complex digamma(Complex z);
double weil_psi(double t);

namespace zeta_constants {
/// c0(zeta, 1/2) = -log(pi)/2 - pi/4 - gamma/2 - (3/2) log 2.
inline constexpr double c0_half = -0.5 * constants::log_pi - 0.25 * constants::pi - 0.5 * constants::euler_gamma -
                                  1.5 * constants::log2;
/// c0(zeta, 0) = -log(2 pi).
inline constexpr double c0_zero = -constants::log_two_pi;
/// c0(chi_0, 0) = log(pi)/2 + gamma/2 (value at the pole of chi_0).
inline constexpr double c0_chi0_zero = 0.5 * constants::log_pi + 0.5 * constants::euler_gamma;
}  // namespace zeta_constants

/// c0(chi_0, sigma) = log(pi)/2 - psi(sigma/2)/2.
Complex c0_chi0(Complex sigma);

/// log p * p^{-k beta}, the mass of the prime-power atom at k log p.
double prime_weight(std::uint64_t p, int k, double beta);

/// sum_{p <= X, k >= 1} log p p^{-k beta} (phi(k log p) + phi(-k log p)).
/// Throws CoverageGap when exp(reach of phi) > X unless enforce_coverage is false.
double prime_side(const TestFunction& phi, const PrimeTable& primes, double beta, bool enforce_coverage = true);

struct ZeroSide {
  Complex value;
  std::size_t count = 0;
  double tail_estimate = 0.0;
};

/// sum over the first `count` ordinates of phi^(gamma) + phi^(-gamma).
ZeroSide zero_side(const ZeroTable& zeros, const TestFunction& phi, std::optional<std::size_t> count = std::nullopt,
                   std::optional<double> tail_tolerance = std::nullopt);

struct ArchimedeanTerms {
  Complex pole;              // phi^(i/2) + phi^(-i/2)
  Complex weil_integral;     // (1/2 pi) \int Psi(t) phi^(t) dt
};

inline constexpr double kPsiAsymptoticSwitch = 1000.0;

ArchimedeanTerms archimedean_terms(const TestFunction& phi, double tolerance = 1e-13);
/// pole + weil_integral.
Complex archimedean_side(const TestFunction& phi, double tolerance = 1e-13);

struct ExplicitFormulaReport {
  Complex zero_side;
  Complex archimedean_side;   // the Psi integral only
  Complex prime_side;
  Complex pole_side;
  double residual = 0.0;      // |zero - (pole + archimedean - prime)|
  double relative_residual = 0.0;
  std::size_t zero_count = 0;
  std::uint64_t prime_limit = 0;
  double quadrature_tolerance = 0.0;
  double zero_tail = 0.0;
};

ExplicitFormulaReport explicit_formula_check(const TestFunction& phi, const ZeroTable& zeros,
                                             std::optional<std::size_t> zero_count, const PrimeTable& primes,
                                             double quadrature_tolerance = 1e-13);

/// W0(t) = -e^{|t|/2} + e^{-3|t|/2} / (2 sinh |t|).
double w0_remainder(double t);
/// -e^{|t|/2} + e^{-|t|/2} sum_{n=1}^{terms} e^{-2n|t|}.
double trivial_divisor_sum(double t, int terms);

struct SelbergData {
  double genus = 0.0;
  std::vector<Complex> eigen_gammas;
  std::vector<double> lengths;
  std::optional<double> length_cutoff;   // lengths are complete up to this value
};

/// -(1/2)(h - 1) \int cosh(t/2)/sinh^2(t/2) phi(t) dt.
double selberg_remainder_pairing(double genus, const TestFunction& phi);
/// sum_tau sum_{l != 0} tau / (4 sinh(tau |l| / 2)) phi(tau l).
double selberg_length_side(const std::vector<double>& lengths, const TestFunction& phi);
/// sum_gamma \int phi(t) cos(gamma t) dt.
Complex selberg_spectral_side(const std::vector<Complex>& eigen_gammas, const TestFunction& phi,
                              double* tail_estimate = nullptr);

/// Data made self-consistent for phi by solving the identity for the genus;
/// the lengths are declared complete up to the support of phi.
SelbergData selberg_synthetic_fixture(std::vector<Complex> eigen_gammas, std::vector<double> lengths,
                                      const TestFunction& phi);

VerificationReport selberg_instance_check(const SelbergData& data, const TestFunction& phi, double tolerance = 1e-10,
                                          std::optional<double> tail_tolerance = std::nullopt);

}  // namespace pnf
