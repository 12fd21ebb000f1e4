#include "pnf/divisor.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace pnf {

namespace {

struct ValueAndSlope {
  Complex f;
  Complex df;
  double scale = 1.0;
};

ValueAndSlope value_and_slope(const DirichletSeries& f, Complex s) {
  CompensatedSum<Complex> value, slope;
  value += Complex(1.0);
  double scale = 1.0;
  for (Eigen::Index n = 0; n < f.size(); ++n) {
    const double lambda = f.frequencies()[n];
    const Complex term = f.coefficients()[n] * std::exp(-lambda * s);
    value += term;
    slope += -lambda * term;
    scale += std::abs(term);
  }
  return {value.value(), slope.value(), scale};
}

double frequency_scale(const DirichletSeries& f) {
  return std::max(1.0, f.frequencies()[f.size() - 1]);
}

// Off-center split fractions; the first clear one is used.
constexpr std::array<double, 12> kSplitFractions = {0.5,    0.5137, 0.4781, 0.5411, 0.4467, 0.5877,
                                                    0.4193, 0.6271, 0.3729, 0.6653, 0.3311, 0.7013};

struct ContourSample {
  Complex integral;
  double min_ratio = std::numeric_limits<double>::infinity();
};

// Trapezoid rule for \oint f'/f ds along the four edges, counter-clockwise.
ContourSample integrate_boundary(const DirichletSeries& f, const Rectangle& r,
                                 const ContourOptions& opt, int level) {
  const std::array<Complex, 5> corners = {Complex(r.re_min, r.im_min), Complex(r.re_max, r.im_min),
                                          Complex(r.re_max, r.im_max), Complex(r.re_min, r.im_max),
                                          Complex(r.re_min, r.im_min)};
  const double per_unit = opt.density * frequency_scale(f);
  ContourSample out;
  CompensatedSum<Complex> total;
  for (int e = 0; e < 4; ++e) {
    const Complex a = corners[e];
    const Complex b = corners[e + 1];
    const double len = std::abs(b - a);
    const long base = std::max<long>(opt.min_points_per_edge, static_cast<long>(std::ceil(len * per_unit)));
    const long n = base << level;
    const Complex h = (b - a) / static_cast<double>(n);
    CompensatedSum<Complex> edge;
    for (long j = 0; j <= n; ++j) {
      const Complex s = a + static_cast<double>(j) * h;
      const auto v = value_and_slope(f, s);
      out.min_ratio = std::min(out.min_ratio, std::abs(v.f) / v.scale);
      const double w = (j == 0 || j == n) ? 0.5 : 1.0;
      edge += w * v.df / v.f;
    }
    total += edge.value() * h;
  }
  out.integral = total.value() / Complex(0.0, constants::two_pi);
  return out;
}

WindingCount winding_once(const DirichletSeries& f, const Rectangle& rect, const ContourOptions& opt) {
  if (!rect.valid()) throw InvalidArgument("count_zeros: rectangle must satisfy min < max on both axes");
  bool previous_ok = false;
  long previous_round = 0;
  for (int level = 0; level <= opt.max_levels; ++level) {
    const auto sample = integrate_boundary(f, rect, opt, level);
    if (!(sample.min_ratio >= opt.guard)) {
      std::ostringstream msg;
      msg << "count_zeros: |f|/scale = " << sample.min_ratio << " on the boundary is below guard "
          << opt.guard;
      throw ContourTooClose(msg.str());
    }
    const double raw = sample.integral.real();
    const long rounded = std::lround(raw);
    const bool ok = std::abs(sample.integral - Complex(static_cast<double>(rounded))) < 0.25;
    if (ok && previous_ok && rounded == previous_round) {
      return {static_cast<int>(rounded), raw, rect, level};
    }
    previous_ok = ok;
    previous_round = rounded;
  }
  throw NonIntegerWinding("count_zeros: winding value did not settle within the refinement budget");
}

// Smallest |f|/scale along a segment, sampled at the contour density.
double segment_clearance(const DirichletSeries& f, Complex a, Complex b, const ContourOptions& opt) {
  const double len = std::abs(b - a);
  const long n = std::max<long>(32, static_cast<long>(std::ceil(4.0 * len * opt.density * frequency_scale(f))));
  double best = std::numeric_limits<double>::infinity();
  for (long j = 0; j <= n; ++j) {
    const Complex s = a + (b - a) * (static_cast<double>(j) / static_cast<double>(n));
    const auto v = value_and_slope(f, s);
    best = std::min(best, std::abs(v.f) / v.scale);
  }
  return best;
}

constexpr double kLineGuard = 1e-3;

class Locator {
 public:
  Locator(const DirichletSeries& f, const LocateOptions& opt) : f_(f), opt_(opt) {}

  std::vector<DivisorPoint> resolve(const Rectangle& cell, int count, int depth = 0) const {
    std::vector<DivisorPoint> out;
    resolve_into(cell, count, depth, out);
    return out;
  }

 private:
  void resolve_into(const Rectangle& cell, int count, int depth, std::vector<DivisorPoint>& out) const {
    if (count == 0) return;
    if (count < 0) throw NonIntegerWinding("locate_divisor: negative zero count in a cell");
    if (count == 1) {
      for (const Complex start : starting_points(cell)) {
        if (auto z = newton(start, 1, cell)) {
          out.push_back({*z, 1});
          return;
        }
      }
    } else {
      if (auto z = newton(cell.center(), count, cell)) {
        const double r = opt_.cluster_radius;
        const Rectangle square{z->real() - r, z->real() + r, z->imag() - r, z->imag() + r};
        if (inside(square, cell)) {
          try {
            if (winding_once(f_, square, opt_.contour).count == count) {
              out.push_back({*z, count});
              return;
            }
          } catch (const ContourTooClose&) {
          } catch (const NonIntegerWinding&) {
          }
        }
      }
    }
    if (cell.diameter() < opt_.min_cell) {
      if (count >= 2) {
        const auto z = newton(cell.center(), count, cell);
        out.push_back({z.value_or(cell.center()), count});
        return;
      }
      throw RefinementStall("locate_divisor: Newton did not converge inside a minimal cell");
    }
    split(cell, count, depth, out);
  }

  void split(const Rectangle& cell, int count, int depth, std::vector<DivisorPoint>& out) const {
    const bool vertical_cut = cell.width() >= cell.height();
    for (const double frac : kSplitFractions) {
      Rectangle lo = cell, hi = cell;
      if (vertical_cut) {
        const double x = cell.re_min + frac * cell.width();
        lo.re_max = hi.re_min = x;
        if (segment_clearance(f_, {x, cell.im_min}, {x, cell.im_max}, opt_.contour) < kLineGuard * 1e-3) continue;
      } else {
        const double y = cell.im_min + frac * cell.height();
        lo.im_max = hi.im_min = y;
        if (segment_clearance(f_, {cell.re_min, y}, {cell.re_max, y}, opt_.contour) < kLineGuard * 1e-3) continue;
      }
      int c_lo = 0, c_hi = 0;
      try {
        c_lo = winding_once(f_, lo, opt_.contour).count;
        c_hi = winding_once(f_, hi, opt_.contour).count;
      } catch (const ContourTooClose&) {
        continue;
      } catch (const NonIntegerWinding&) {
        continue;
      }
      if (c_lo + c_hi != count) continue;
      resolve_into(lo, c_lo, depth + 1, out);
      resolve_into(hi, c_hi, depth + 1, out);
      return;
    }
    std::ostringstream msg;
    msg << "locate_divisor: no consistent split for a cell with " << count << " zeros near "
        << cell.center();
    throw NonIntegerWinding(msg.str());
  }

  static bool inside(const Rectangle& inner, const Rectangle& outer) {
    return inner.re_min > outer.re_min && inner.re_max < outer.re_max && inner.im_min > outer.im_min &&
           inner.im_max < outer.im_max;
  }

  static std::array<Complex, 5> starting_points(const Rectangle& c) {
    const Complex z = c.center();
    const double dx = 0.25 * c.width(), dy = 0.25 * c.height();
    return {z, z + Complex(-dx, -dy), z + Complex(dx, -dy), z + Complex(dx, dy), z + Complex(-dx, dy)};
  }

  // Damped Newton (modified by the multiplicity m); the iterate must stay in `cell`.
  std::optional<Complex> newton(Complex z, int m, const Rectangle& cell) const {
    auto v = value_and_slope(f_, z);
    for (int it = 0; it < opt_.max_newton; ++it) {
      const double residual = std::abs(v.f) / v.scale;
      if (v.df == Complex(0.0)) break;
      const Complex step = static_cast<double>(m) * v.f / v.df;
      double t = 1.0;
      bool moved = false;
      while (t > 1e-10) {
        const Complex zn = z - t * step;
        const auto vn = value_and_slope(f_, zn);
        if (std::abs(vn.f) / vn.scale < residual) {
          z = zn;
          v = vn;
          moved = true;
          break;
        }
        t *= 0.5;
      }
      if (!cell.contains(z)) return std::nullopt;
      if (!moved || std::abs(t * step) <= 1e-15 * (1.0 + std::abs(z))) break;
    }
    if (std::abs(v.f) / v.scale <= attainable_residual(z) && cell.contains(z)) return z;
    return std::nullopt;
  }

  // The phase lambda_N * Im s carries a rounding error of order eps * lambda_N |s|,
  // which bounds the residual any refinement can reach high up the strip.
  double attainable_residual(Complex z) const {
    const double floor = 8.0 * std::numeric_limits<double>::epsilon() * (1.0 + frequency_scale(f_) * std::abs(z));
    return std::max(opt_.residual_tol, floor);
  }

  const DirichletSeries& f_;
  const LocateOptions& opt_;
};

// Root of a decreasing function by bracketing and bisection.
template <typename Fn>
double decreasing_root(Fn&& g) {
  double lo = -1.0, hi = 1.0;
  while (g(lo) < 0.0) lo *= 2.0;
  while (g(hi) > 0.0) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(lo)); ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

struct Tail {
  Complex partial;
  Complex correction;
  double truncation = 0.0;
};

// Sums `terms` (sorted by radius) up to radius R and extrapolates the remainder
// assuming it decays like C r^{-p}. Effective cutoffs sit halfway between
// the last included and first excluded radius so that lattice-like point
// sets are not biased by the cutoff position.
Tail extrapolated_sum(const std::vector<std::pair<double, Complex>>& terms, double R, int p) {
  CompensatedSum<Complex> total, inner;
  const double R_inner = R / 10.0;
  double last_inner = 0.0, first_after_inner = -1.0, last = 0.0, first_after = -1.0;
  int groups_in_decade = 0;
  double previous_radius = -1.0;
  for (const auto& [r, term] : terms) {
    if (r > R) {
      if (first_after < 0) first_after = r;
      break;
    }
    total += term;
    if (r <= R_inner) {
      inner += term;
      last_inner = r;
    } else {
      if (first_after_inner < 0) first_after_inner = r;
      if (std::abs(r - previous_radius) > 1e-9 * std::max(1.0, r)) ++groups_in_decade;
    }
    previous_radius = r;
    last = r;
  }
  Tail out;
  out.partial = total.value();
  out.truncation = R;
  if (groups_in_decade == 0 || last_inner == 0.0 || p <= 0) return out;
  const double r_in = 0.5 * (last_inner + first_after_inner);
  double r_out = 0.0;
  if (first_after > 0) {
    r_out = 0.5 * (last + first_after);
  } else {
    const double spacing = (last - r_in) / std::max(1, groups_in_decade - 1);
    r_out = last + 0.5 * (groups_in_decade > 1 ? spacing : (last - r_in));
  }
  const Complex delta = out.partial - inner.value();
  const double a = std::pow(r_in, -p), b = std::pow(r_out, -p);
  if (!(a > b)) return out;
  out.correction = delta / (a - b) * b;
  return out;
}

double truncation_radius(const Divisor& divisor, const std::vector<std::pair<double, Complex>>& terms) {
  if (divisor.window.valid() && divisor.window.im_max > 0.0) return divisor.window.im_max;
  double r = 0.0;
  for (const auto& t : terms) r = std::max(r, t.first);
  return r;
}

bool same_point(Complex a, Complex b) { return std::abs(a - b) <= 1e-8 * (1.0 + std::abs(b)); }

}  // namespace

Rectangle Rectangle::dilated(double factor) const {
  const Complex c = center();
  const double hw = 0.5 * width() * factor, hh = 0.5 * height() * factor;
  return {c.real() - hw, c.real() + hw, c.imag() - hh, c.imag() + hh};
}

int Divisor::degree() const {
  int total = 0;
  for (const auto& p : points) total += p.multiplicity;
  return total;
}

void Divisor::sort() {
  std::sort(points.begin(), points.end(), [](const DivisorPoint& a, const DivisorPoint& b) {
    if (a.rho.imag() != b.rho.imag()) return a.rho.imag() < b.rho.imag();
    return a.rho.real() < b.rho.real();
  });
}

double dilation_factor(int attempt) { return 1.0 + 1e-3 * (1.0 + 1.3 * attempt); }

WindingCount count_zeros_detailed(const DirichletSeries& f, const Rectangle& rect,
                                  const ContourOptions& options) {
  try {
    return winding_once(f, rect, options);
  } catch (const ContourTooClose&) {
  } catch (const NonIntegerWinding&) {
  }
  for (int attempt = 0; attempt < options.max_dilations; ++attempt) {
    try {
      return winding_once(f, rect.dilated(dilation_factor(attempt)), options);
    } catch (const ContourTooClose& e) {
      if (attempt + 1 == options.max_dilations) throw;
    } catch (const NonIntegerWinding& e) {
      if (attempt + 1 == options.max_dilations) throw;
    }
  }
  throw ContourTooClose("count_zeros: no admissible dilation");
}

int count_zeros(const DirichletSeries& f, const Rectangle& rect, const ContourOptions& options) {
  return count_zeros_detailed(f, rect, options).count;
}

StripBounds zero_strip(const DirichletSeries& f) {
  const auto& lambda = f.frequencies();
  const auto& a = f.coefficients();
  const Eigen::Index N = f.size();
  // Re s > hi: sum |a_n| e^{-lambda_n sigma} < 1, so |f| > 0.
  const double hi = decreasing_root([&](double sigma) {
    double s = -1.0;
    for (Eigen::Index n = 0; n < N; ++n) s += std::abs(a[n]) * std::exp(-lambda[n] * sigma);
    return s;
  });
  // Re s < lo: the last term dominates 1 + the others.
  const double lambda_N = lambda[N - 1];
  const double lo = decreasing_root([&](double sigma) {
    double s = std::abs(a[N - 1]) - std::exp(lambda_N * sigma);
    for (Eigen::Index n = 0; n + 1 < N; ++n) s -= std::abs(a[n]) * std::exp((lambda_N - lambda[n]) * sigma);
    return s;
  });
  return {std::min(lo, hi), std::max(lo, hi)};
}

Divisor locate_divisor(const DirichletSeries& f, double H, const LocateOptions& options) {
  if (!(H > 0.0) || !std::isfinite(H)) throw InvalidArgument("locate_divisor: H must be positive");
  const auto strip = zero_strip(f);
  const double re_min = strip.re_min - options.margin;
  const double re_max = strip.re_max + options.margin;
  const auto& copt = options.contour;

  auto horizontal_clear = [&](double y) {
    return segment_clearance(f, {re_min, y}, {re_max, y}, copt) >= kLineGuard;
  };

  double height = H;
  for (int attempt = 0; !(horizontal_clear(height) && horizontal_clear(-height)); ++attempt) {
    if (attempt >= copt.max_dilations) throw ContourTooClose("locate_divisor: window edges stay close to zeros");
    height = H * dilation_factor(attempt);
  }

  // slabs of about half the mean zero spacing 2 pi / lambda_N
  const double lambda_N = f.frequencies()[f.size() - 1];
  const double target = constants::pi / std::max(lambda_N, 1e-3);
  const auto n_slabs = static_cast<std::size_t>(std::max(1.0, std::ceil(2.0 * height / target)));
  const double slab = 2.0 * height / static_cast<double>(n_slabs);
  std::vector<double> cuts{-height};
  for (std::size_t j = 1; j < n_slabs; ++j) {
    const double nominal = -height + static_cast<double>(j) * slab;
    double chosen = nominal;
    bool found = false;
    for (int k = 0; k < 12 && !found; ++k) {
      const double offset = (k == 0) ? 0.0 : ((k % 2) ? 1.0 : -1.0) * 0.037 * ((k + 1) / 2) * slab;
      if (horizontal_clear(nominal + offset)) {
        chosen = nominal + offset;
        found = true;
      }
    }
    if (!found) throw ContourTooClose("locate_divisor: no clear slab boundary near Im s = " + std::to_string(nominal));
    cuts.push_back(chosen);
  }
  cuts.push_back(height);

  const Locator locator(f, options);
  auto per_slab = parallel_map(n_slabs, [&](std::size_t j) {
    const Rectangle cell{re_min, re_max, cuts[j], cuts[j + 1]};
    const int count = winding_once(f, cell, copt).count;
    return locator.resolve(cell, count);
  });

  Divisor out;
  out.window = {re_min, re_max, -height, height};
  for (auto& pts : per_slab) {
    for (auto& p : pts) out.points.push_back(p);
  }
  out.sort();
  for (const auto& p : out.points) {
    const auto v = value_and_slope(f, p.rho);
    out.residual_bound = std::max(out.residual_bound, std::abs(v.f) / v.scale);
  }
  return out;
}

DiscrepancyConstant discrepancy_c0(const DirichletSeries& f, const Divisor& divisor, Complex sigma,
                                   Complex s0, int d, std::optional<double> tail_tolerance) {
  if (d < 1) throw InvalidArgument("discrepancy_c0: d must be at least 1");
  double max_re = -std::numeric_limits<double>::infinity();
  for (const auto& p : divisor.points) max_re = std::max(max_re, p.rho.real());
  if (!(s0.real() > max_re)) throw InvalidArgument("discrepancy_c0: s0 must lie to the right of the divisor");

  int n_sigma = 0;
  std::vector<std::pair<double, Complex>> terms;
  std::vector<const DivisorPoint*> order;
  for (const auto& p : divisor.points) order.push_back(&p);
  std::sort(order.begin(), order.end(), [&](const DivisorPoint* a, const DivisorPoint* b) {
    const double ra = std::abs(a->rho - sigma), rb = std::abs(b->rho - sigma);
    if (ra != rb) return ra < rb;
    if (a->rho.imag() != b->rho.imag()) return a->rho.imag() < b->rho.imag();
    return a->rho.real() < b->rho.real();
  });
  for (const auto* p : order) {
    if (same_point(p->rho, sigma)) {
      n_sigma += p->multiplicity;
      continue;
    }
    const Complex u = (s0 - sigma) / (p->rho - sigma);
    terms.emplace_back(std::abs(p->rho - sigma),
                       static_cast<double>(p->multiplicity) * std::pow(u, d - 1) / (s0 - p->rho));
  }
  const double R = truncation_radius(divisor, terms);
  const auto tail = extrapolated_sum(terms, R, d - 1);

  DiscrepancyConstant out;
  out.sigma = sigma;
  out.d = d;
  out.truncation_height = R;
  const Complex head = (n_sigma != 0) ? static_cast<double>(n_sigma) / (s0 - sigma) : Complex(0.0);
  out.partial = head + tail.partial - log_derivative(f, s0);
  out.c0 = out.partial + tail.correction;
  out.tail_estimate = std::abs(tail.correction);
  if (tail_tolerance && out.tail_estimate > *tail_tolerance) {
    std::ostringstream msg;
    msg << "discrepancy_c0: tail estimate " << out.tail_estimate << " exceeds tolerance " << *tail_tolerance
        << " at truncation height " << R;
    throw TailTooLarge(msg.str());
  }
  return out;
}

ShiftedConstant c0_shift(Complex c0_at_0, const Divisor& divisor, Complex sigma,
                         std::optional<double> tail_tolerance) {
  if (sigma == Complex(0.0)) throw InvalidArgument("c0_shift: sigma must differ from 0");
  int n0 = 0, n_sigma = 0;
  std::vector<const DivisorPoint*> order;
  for (const auto& p : divisor.points) order.push_back(&p);
  std::sort(order.begin(), order.end(), [](const DivisorPoint* a, const DivisorPoint* b) {
    const double ra = std::abs(a->rho), rb = std::abs(b->rho);
    if (ra != rb) return ra < rb;
    if (a->rho.imag() != b->rho.imag()) return a->rho.imag() < b->rho.imag();
    return a->rho.real() < b->rho.real();
  });
  std::vector<std::pair<double, Complex>> terms;
  for (const auto* p : order) {
    if (same_point(p->rho, Complex(0.0))) {
      n0 += p->multiplicity;
    } else if (same_point(p->rho, sigma)) {
      n_sigma += p->multiplicity;
    } else {
      terms.emplace_back(std::abs(p->rho),
                         static_cast<double>(p->multiplicity) * (-sigma) / (p->rho * (p->rho - sigma)));
    }
  }
  const double R = truncation_radius(divisor, terms);
  const auto tail = extrapolated_sum(terms, R, 1);
  const Complex bracket = static_cast<double>(n0 + n_sigma) / sigma + tail.partial;
  ShiftedConstant out;
  out.partial = c0_at_0 - bracket;
  out.c0 = out.partial - tail.correction;
  out.tail_estimate = std::abs(tail.correction);
  if (tail_tolerance && out.tail_estimate > *tail_tolerance) {
    throw TailTooLarge("c0_shift: tail estimate exceeds tolerance");
  }
  return out;
}

}  // namespace pnf
