#include "pnf/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "pnf/faddeeva.hpp"

namespace pnf {

namespace {

double bump_profile(double u) {
  if (!(std::abs(u) < 1.0)) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - u * u));
}

// w e^{-i z c} \int_{-1}^{1} psi(u) e^{-i z w u} du by the trapezoid rule;
// psi vanishes to all orders at +-1, so nested doubling converges fast.
Complex bump_hat(double c, double w, Complex z) {
  const Complex k = Complex(0.0, -1.0) * z * w;  // exponent per unit u
  const double oscillation = std::abs(z) * w;
  long n = 64;
  while (n < 2.0 * oscillation + 64.0) n *= 2;
  constexpr long kBudget = 1L << 22;

  auto sum_points = [&](long count, long stride, long offset, double& scale) {
    CompensatedSum<Complex> acc;
    for (long j = offset; j < count; j += stride) {
      const double u = -1.0 + 2.0 * static_cast<double>(j) / static_cast<double>(count);
      const double p = bump_profile(u);
      if (p == 0.0) continue;
      const Complex term = p * std::exp(k * u);
      acc += term;
      scale += std::abs(term);
    }
    return acc.value();
  };

  double scale = 0.0;
  Complex sum = sum_points(n, 1, 1, scale);
  Complex estimate = sum * (2.0 / static_cast<double>(n));
  while (true) {
    const long m = 2 * n;
    double new_scale = 0.0;
    const Complex odd = sum_points(m, 2, 1, new_scale);
    scale += new_scale;
    sum += odd;
    const Complex refined = sum * (2.0 / static_cast<double>(m));
    const double magnitude = scale * 2.0 / static_cast<double>(m);
    const bool done = std::abs(refined - estimate) <= 1e-15 * magnitude;
    estimate = refined;
    n = m;
    if (done) break;
    if (n > kBudget) {
      std::ostringstream msg;
      msg << "fourier_hat: bump transform at z = " << z << " did not converge within " << kBudget << " points";
      throw QuadratureStall(msg.str());
    }
  }
  return w * std::exp(Complex(0.0, -1.0) * z * c) * estimate;
}

// \int_a^b g(t) dt for smooth complex g on a finite interval: composite
// 20-point Gauss-Legendre with panel doubling.
template <typename Fn>
Complex panel_integral(Fn&& g, double a, double b, double oscillation) {
  using Rule = boost::math::quadrature::gauss<double, 20>;
  if (!(b > a)) return Complex(0.0);
  long panels = std::max<long>(1, static_cast<long>(std::ceil(oscillation * (b - a) / constants::pi)) + 1);
  auto run = [&](long count, double& scale) {
    CompensatedSum<Complex> acc;
    const double h = (b - a) / static_cast<double>(count);
    for (long p = 0; p < count; ++p) {
      const double lo = a + static_cast<double>(p) * h;
      const double hi = (p + 1 == count) ? b : lo + h;
      const double re = Rule::integrate([&](double t) { return g(t).real(); }, lo, hi);
      const double im = Rule::integrate([&](double t) { return g(t).imag(); }, lo, hi);
      acc += Complex(re, im);
      scale += Rule::integrate([&](double t) { return std::abs(g(t)); }, lo, hi);
    }
    return acc.value();
  };
  double scale = 0.0;
  Complex previous = run(panels, scale);
  for (int level = 0; level < 16; ++level) {
    panels *= 2;
    scale = 0.0;
    const Complex current = run(panels, scale);
    if (std::abs(current - previous) <= 1e-14 * scale) return current;
    previous = current;
  }
  throw QuadratureStall("panel quadrature did not settle");
}

double hermite_he(int n, double x) {
  double h0 = 1.0, h1 = x;
  if (n == 0) return h0;
  for (int k = 1; k < n; ++k) {
    const double h2 = x * h1 - k * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double central_difference(const TestFunction& phi, double t, int order, double h) {
  CompensatedSum<double> acc;
  for (int j = 0; j <= order; ++j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    acc += sign * binomial(order, j) * phi(t + (0.5 * order - j) * h);
  }
  return acc.value() / std::pow(h, order);
}

double parse_number(const std::string& text, const std::string& spec) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty()) throw InvalidArgument("test function: bad number '" + text + "' in " + spec);
  return v;
}

}  // namespace

TestFunction TestFunction::gaussian(double center, double width) {
  if (!(width > 0.0) || !std::isfinite(width) || !std::isfinite(center)) {
    throw InvalidArgument("gaussian: width must be positive and center finite");
  }
  return {TestKind::gaussian, center, width};
}

TestFunction TestFunction::bump(double center, double width) {
  if (!(width > 0.0) || !std::isfinite(width) || !std::isfinite(center)) {
    throw InvalidArgument("bump: width must be positive and center finite");
  }
  return {TestKind::bump, center, width};
}

TestFunction TestFunction::parse(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  if (kind != "gaussian" && kind != "bump") {
    throw InvalidArgument("test function: kind must be gaussian or bump in '" + spec + "'");
  }
  double center = 0.0;
  std::optional<double> width;
  if (colon != std::string::npos) {
    std::string rest = spec.substr(colon + 1);
    std::size_t pos = 0;
    while (pos <= rest.size()) {
      const auto comma = rest.find(',', pos);
      const std::string item = rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw InvalidArgument("test function: expected key=value in '" + spec + "'");
      const std::string key = item.substr(0, eq);
      const double value = parse_number(item.substr(eq + 1), spec);
      if (key == "center") {
        center = value;
      } else if (key == "width") {
        width = value;
      } else {
        throw InvalidArgument("test function: unknown key '" + key + "' in '" + spec + "'");
      }
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }
  if (!width) throw InvalidArgument("test function: width is required in '" + spec + "'");
  return kind == "gaussian" ? gaussian(center, *width) : bump(center, *width);
}

std::string TestFunction::to_string() const {
  std::ostringstream out;
  out.precision(17);
  out << (kind_ == TestKind::gaussian ? "gaussian" : "bump") << ":center=" << center_ << ",width=" << width_;
  return out.str();
}

double TestFunction::operator()(double t) const {
  const double u = (t - center_) / width_;
  if (kind_ == TestKind::gaussian) return std::exp(-0.5 * u * u);
  return bump_profile(u);
}

double TestFunction::reach() const { return kind_ == TestKind::gaussian ? kGaussianReach * width_ : width_; }

Complex fourier_hat(const TestFunction& phi, Complex z) {
  const double c = phi.center(), w = phi.width();
  if (phi.kind() == TestKind::gaussian) {
    return w * constants::sqrt_two_pi * std::exp(Complex(0.0, -1.0) * z * c - 0.5 * w * w * z * z);
  }
  return bump_hat(c, w, z);
}

double derivative_at(const TestFunction& phi, double t, int order) {
  if (order < 0) throw InvalidArgument("derivative_at: negative order");
  if (order == 0) return phi(t);
  const double w = phi.width();
  if (phi.kind() == TestKind::gaussian) {
    const double x = (t - phi.center()) / w;
    const double sign = (order % 2 == 0) ? 1.0 : -1.0;
    return sign * hermite_he(order, x) / std::pow(w, order) * phi(t);
  }
  if (t - 0.5 * order * 1e-2 * w >= phi.support_max() || t + 0.5 * order * 1e-2 * w <= phi.support_min()) {
    return 0.0;
  }
  // Richardson-extrapolated central differences, steps w * (1e-2, 5e-3, ...)
  double h = 1e-2 * w;
  double previous = std::numeric_limits<double>::quiet_NaN();
  int agreements = 0;
  double current = 0.0;
  for (int k = 0; k < 14; ++k) {
    const double coarse = central_difference(phi, t, order, h);
    const double fine = central_difference(phi, t, order, 0.5 * h);
    current = (4.0 * fine - coarse) / 3.0;
    if (std::abs(current - previous) <= 1e-9 * std::max(1.0, std::abs(current))) {
      if (++agreements == 2) return current;
    } else {
      agreements = 0;
    }
    previous = current;
    h *= 0.5;
  }
  return current;
}

Complex half_line_laplace(const TestFunction& phi, Complex a) {
  const double c = phi.center(), w = phi.width();
  if (phi.kind() == TestKind::gaussian) {
    const double root2 = std::sqrt(2.0);
    const Complex zeta = -c / (w * root2) - a * w / root2;
    const double prefactor = w * std::sqrt(constants::pi / 2.0) * std::exp(-c * c / (2.0 * w * w));
    const Complex i(0.0, 1.0);
    if (zeta.real() >= 0.0) return prefactor * faddeeva_w(i * zeta);
    return fourier_hat(phi, i * a) - prefactor * faddeeva_w(-i * zeta);
  }
  if (phi.support_min() >= 0.0) return fourier_hat(phi, Complex(0.0, 1.0) * a);
  if (phi.support_max() <= 0.0) return Complex(0.0);
  return panel_integral([&](double t) { return phi(t) * std::exp(a * t); }, 0.0, phi.support_max(),
                        std::abs(a.imag()));
}

Complex symmetric_laplace(const TestFunction& phi, Complex a) {
  return half_line_laplace(phi, a) + half_line_laplace(phi.reflected(), a);
}

PairingResult divisor_pairing(const Divisor& divisor, const TestFunction& phi, double beta,
                              const PairingOptions& options) {
  const bool symmetric = options.mode == PairingMode::symmetric;
  if (!symmetric && phi.support_min() <= 0.0 && !(phi.kind() == TestKind::bump && phi.support_min() == 0.0)) {
    throw InvalidArgument("divisor_pairing: one-sided pairing requires supp phi in (0, inf)");
  }
  std::vector<const DivisorPoint*> order;
  for (const auto& p : divisor.points) order.push_back(&p);
  std::sort(order.begin(), order.end(), [](const DivisorPoint* a, const DivisorPoint* b) {
    const double ya = std::abs(a->rho.imag()), yb = std::abs(b->rho.imag());
    if (ya != yb) return ya < yb;
    if (a->rho.imag() != b->rho.imag()) return a->rho.imag() < b->rho.imag();
    return a->rho.real() < b->rho.real();
  });
  const double phi0 = symmetric ? phi(0.0) : 0.0;
  auto terms = parallel_map(order.size(), [&](std::size_t j) {
    const auto& p = *order[j];
    const Complex a = p.rho - beta;
    Complex v = symmetric ? symmetric_laplace(phi, a) : half_line_laplace(phi, a);
    if (symmetric && options.regularize_at && std::abs(p.rho - *options.regularize_at) > 1e-8 * (1.0 + std::abs(p.rho))) {
      v += 2.0 * phi0 / (p.rho - *options.regularize_at);
    }
    return static_cast<double>(p.multiplicity) * v;
  });

  PairingResult out;
  out.height = divisor.window.valid() ? std::max(std::abs(divisor.window.im_min), std::abs(divisor.window.im_max))
                                      : 0.0;
  if (out.height == 0.0) {
    for (const auto* p : order) out.height = std::max(out.height, std::abs(p->rho.imag()));
  }
  CompensatedSum<Complex> acc;
  double last_decade = 0.0;
  for (std::size_t j = 0; j < terms.size(); ++j) {
    acc += terms[j];
    if (std::abs(order[j]->rho.imag()) > out.height / 10.0) last_decade += std::abs(terms[j]);
  }
  out.value = acc.value();
  out.tail_estimate = last_decade / 9.0;
  if (options.tail_tolerance && out.tail_estimate > *options.tail_tolerance) {
    std::ostringstream msg;
    msg << "divisor_pairing: tail estimate " << out.tail_estimate << " exceeds " << *options.tail_tolerance
        << " at height " << out.height;
    throw TailTooLarge(msg.str());
  }
  return out;
}

PairingResult atom_pairing(const std::vector<FrequencyAtom>& atoms, double cutoff, const TestFunction& phi,
                           double beta, bool symmetric) {
  const double reach = symmetric ? std::max(std::abs(phi.support_min()), std::abs(phi.support_max()))
                                 : phi.support_max();
  if (reach > cutoff) {
    std::ostringstream msg;
    msg << "atom_pairing: support of phi reaches " << reach << " beyond the atom cutoff " << cutoff;
    throw CoverageGap(msg.str());
  }
  auto terms = parallel_map(atoms.size(), [&](std::size_t j) {
    const auto& atom = atoms[j];
    double value = phi(atom.frequency);
    if (symmetric) value += phi(-atom.frequency);
    return atom.weight * std::exp(-atom.frequency * beta) * value;
  });
  CompensatedSum<Complex> acc;
  for (const auto& t : terms) acc += t;
  PairingResult out;
  out.value = acc.value();
  out.cutoff = cutoff;
  return out;
}

Complex delta_zero_terms(std::span<const Complex> even_coefficients, const TestFunction& phi) {
  CompensatedSum<Complex> acc;
  for (std::size_t l = 0; l < even_coefficients.size(); ++l) {
    acc += even_coefficients[l] * derivative_at(phi, 0.0, static_cast<int>(2 * l));
  }
  return 2.0 * acc.value();
}

}  // namespace pnf
