#pragma once

// Test functions and the two pairings of the Poisson-Newton formula:
// the divisor side sum_rho n_rho \int phi(t) e^{(rho - beta) t} (or |t|) dt,
// and the atomic side sum weight * e^{-freq beta} phi(+-freq).

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pnf/common.hpp"
#include "pnf/divisor.hpp"
#include "pnf/series.hpp"

namespace pnf {

enum class TestKind { gaussian, bump };

class TestFunction {
 public:
  /// exp(-(t - center)^2 / (2 width^2)).
  static TestFunction gaussian(double center, double width);
  /// exp(1 - 1/(1 - u^2)), u = (t - center)/width, zero for |u| >= 1; peak value 1.
  static TestFunction bump(double center, double width);
  /// "gaussian:center=C,width=W" or "bump:center=C,width=W".
  static TestFunction parse(const std::string& spec);

  [[nodiscard]] TestKind kind() const { return kind_; }
  [[nodiscard]] double center() const { return center_; }
  [[nodiscard]] double width() const { return width_; }
  [[nodiscard]] std::string to_string() const;

  [[nodiscard]] double operator()(double t) const;

  /// Support; for gaussians the effective support where phi/phi(center) >= 1e-18.
  [[nodiscard]] double support_min() const { return center_ - reach(); }
  [[nodiscard]] double support_max() const { return center_ + reach(); }

  /// The reflected function t -> phi(-t).
  [[nodiscard]] TestFunction reflected() const { return {kind_, -center_, width_}; }

 private:
  TestFunction(TestKind kind, double center, double width) : kind_(kind), center_(center), width_(width) {}
  [[nodiscard]] double reach() const;

  TestKind kind_;
  double center_;
  double width_;
};

/// Half-width of the gaussian effective support in units of the width.
inline constexpr double kGaussianReach = 9.104562776310878;  // sqrt(36 ln 10)

/// phi^(z) = \int phi(t) e^{-i z t} dt.
Complex fourier_hat(const TestFunction& phi, Complex z);

/// n-th derivative of phi at t (analytic for gaussians, extrapolated finite
/// differences for bumps).
double derivative_at(const TestFunction& phi, double t, int order);

/// \int_0^inf phi(t) e^{a t} dt.
Complex half_line_laplace(const TestFunction& phi, Complex a);
/// \int_R phi(t) e^{a |t|} dt.
Complex symmetric_laplace(const TestFunction& phi, Complex a);

enum class PairingMode { one_sided, symmetric };

struct PairingOptions {
  PairingMode mode = PairingMode::one_sided;
  /// Symmetric mode: adds 2 phi(0)/(rho - sigma) for every rho != sigma,
  /// which makes the sum absolutely convergent and matches c0(sigma).
  std::optional<Complex> regularize_at;
  std::optional<double> tail_tolerance;
};

struct PairingResult {
  Complex value;
  double height = 0.0;   // divisor truncation H
  double cutoff = 0.0;   // atom cutoff T
  double tail_estimate = 0.0;
};

PairingResult divisor_pairing(const Divisor& divisor, const TestFunction& phi, double beta,
                              const PairingOptions& options = {});

/// Atoms must cover frequencies up to `cutoff`, which must reach the support of phi.
PairingResult atom_pairing(const std::vector<FrequencyAtom>& atoms, double cutoff,
                           const TestFunction& phi, double beta, bool symmetric);

/// 2 sum_l c_{2l} phi^{(2l)}(0), with even_coefficients = (c_0, c_2, ...).
Complex delta_zero_terms(std::span<const Complex> even_coefficients, const TestFunction& phi);

}  // namespace pnf
