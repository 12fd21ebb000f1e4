#pragma once

// Zeros of finite Dirichlet series: argument-principle counting on
// rectangles, exhaustive localization in a strip, and the constant term of
// the discrepancy polynomial computed from a (truncated) divisor.

#include <optional>
#include <vector>

#include "pnf/common.hpp"
#include "pnf/series.hpp"

namespace pnf {

struct Rectangle {
  double re_min = 0.0;
  double re_max = 0.0;
  double im_min = 0.0;
  double im_max = 0.0;

  [[nodiscard]] bool valid() const { return re_min < re_max && im_min < im_max; }
  [[nodiscard]] double width() const { return re_max - re_min; }
  [[nodiscard]] double height() const { return im_max - im_min; }
  [[nodiscard]] double diameter() const { return std::hypot(width(), height()); }
  [[nodiscard]] Complex center() const {
    return {0.5 * (re_min + re_max), 0.5 * (im_min + im_max)};
  }
  [[nodiscard]] bool contains(Complex z) const {
    return z.real() >= re_min && z.real() <= re_max && z.imag() >= im_min && z.imag() <= im_max;
  }
  /// Scaled about the center by `factor` in both directions.
  [[nodiscard]] Rectangle dilated(double factor) const;
};

struct DivisorPoint {
  Complex rho;
  int multiplicity = 1;
};

struct Divisor {
  std::vector<DivisorPoint> points;
  Rectangle window;
  double residual_bound = 0.0;

  /// Sum of multiplicities.
  [[nodiscard]] int degree() const;
  /// Points sorted by (Im, Re).
  void sort();
};

struct ContourOptions {
  double guard = 1e-10;         // smallest admissible |f| / term_scale on a contour
  double density = 6.0;         // samples per unit length, times max(1, lambda_N)
  int min_points_per_edge = 16;
  int max_levels = 14;          // trapezoid halvings
  int max_dilations = 8;
};

struct WindingCount {
  int count = 0;
  double raw = 0.0;        // pre-rounding winding value
  Rectangle rect;          // rectangle actually integrated (after dilation)
  int levels = 0;
};

/// Deterministic dilation factors 1 + 1e-3, 1 + 2.3e-3, ...
double dilation_factor(int attempt);

/// (1/2 pi i) \oint f'/f over the boundary of `rect`, with dilation retries.
WindingCount count_zeros_detailed(const DirichletSeries& f, const Rectangle& rect,
                                  const ContourOptions& options = {});
int count_zeros(const DirichletSeries& f, const Rectangle& rect, const ContourOptions& options = {});

/// Real-part bounds of the zero set: [re_min, re_max] contains every zero.
struct StripBounds {
  double re_min = 0.0;
  double re_max = 0.0;
};
StripBounds zero_strip(const DirichletSeries& f);

struct LocateOptions {
  ContourOptions contour;
  double margin = 0.5;             // added on both sides of the strip bounds
  double residual_tol = 1e-12;     // |f(rho)| / term_scale after refinement
  double min_cell = 1e-8;          // cells below this diameter stop splitting
  double cluster_radius = 1e-4;    // half-side of the multiplicity test square
  int max_newton = 100;
};

/// All zeros with |Im| <= H (the top and bottom edges may be nudged outward
/// by a dilation factor when a zero sits on them; `window` records the final
/// rectangle).
Divisor locate_divisor(const DirichletSeries& f, double H, const LocateOptions& options = {});

struct DiscrepancyConstant {
  Complex sigma;
  Complex c0;
  Complex partial;          // truncated sum before the tail correction
  int d = 2;
  double truncation_height = 0.0;
  double tail_estimate = 0.0;
};

/// c0 = G(s0) - f'/f(s0) with G the truncated genus-one Hadamard sum centered
/// at sigma. Terms are accumulated by increasing |rho - sigma| with conjugate
/// points adjacent; the tail beyond the truncation radius is extrapolated from
/// the last decade, assuming it scales like R^{-(d-1)}.
DiscrepancyConstant discrepancy_c0(const DirichletSeries& f, const Divisor& divisor, Complex sigma,
                                   Complex s0, int d = 2,
                                   std::optional<double> tail_tolerance = std::nullopt);

struct ShiftedConstant {
  Complex c0;
  Complex partial;
  double tail_estimate = 0.0;
};

/// c0(sigma) from c0(0) for d = 2:
///   c0(sigma) = c0(0) - [n_0/sigma + n_sigma/sigma + sum_{rho != 0, sigma} n_rho (-sigma)/(rho (rho - sigma))]
ShiftedConstant c0_shift(Complex c0_at_0, const Divisor& divisor, Complex sigma,
                         std::optional<double> tail_tolerance = std::nullopt);

}  // namespace pnf
