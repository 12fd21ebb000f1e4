#include "pnf/number_theory.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace pnf {

namespace {

// B_{2k} / (2k) for k = 1..8
constexpr std::array<double, 8> kDigammaSeries = {1.0 / 12.0,  -1.0 / 120.0,    1.0 / 252.0, -1.0 / 240.0,
                                                  1.0 / 132.0, -691.0 / 32760.0, 1.0 / 12.0,  -3617.0 / 8160.0};

Complex digamma_asymptotic(Complex z) {
  const Complex inv2 = 1.0 / (z * z);
  Complex power = inv2;
  Complex series(0.0);
  for (const double c : kDigammaSeries) {
    series += c * power;
    power *= inv2;
  }
  return std::log(z) - 0.5 / z - series;
}

double weil_psi_asymptotic(double t) {
  return -constants::log_pi + digamma_asymptotic(Complex(0.25, 0.5 * t)).real();
}

template <typename Fn>
double gk_integrate(Fn&& g, double a, double b, double tolerance) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  double error = 0.0;
  return GK::integrate(g, a, b, 15, tolerance, &error);
}

// Adaptive bisection on 61-point Gauss-Kronrod panels with an absolute
// target, for integrands whose far tail sits at rounding level.
template <typename Fn>
double gk_integrate_absolute(Fn&& g, double a, double b, double abs_tolerance, int depth = 0) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  double error = 0.0;
  const double value = GK::integrate(g, a, b, 0, 0.0, &error);
  if (error <= abs_tolerance || depth >= 12) return value;
  const double mid = 0.5 * (a + b);
  return gk_integrate_absolute(g, a, mid, 0.5 * abs_tolerance, depth + 1) +
         gk_integrate_absolute(g, mid, b, 0.5 * abs_tolerance, depth + 1);
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

PrimeTable sieve_primes(std::uint64_t X) {
  if (X < 2) throw InvalidArgument("sieve_primes: X must be at least 2");
  PrimeTable out;
  out.limit = X;
  const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(X))) + 1;
  std::vector<char> small(root + 1, 1);
  std::vector<std::uint64_t> base;
  for (std::uint64_t i = 2; i <= root; ++i) {
    if (!small[i]) continue;
    base.push_back(i);
    for (std::uint64_t j = i * i; j <= root; j += i) small[j] = 0;
  }
  constexpr std::uint64_t kSegment = 1 << 16;
  std::vector<char> mark(kSegment);
  for (std::uint64_t lo = 2; lo <= X; lo += kSegment) {
    const std::uint64_t hi = std::min(X, lo + kSegment - 1);
    std::fill(mark.begin(), mark.end(), 1);
    for (const auto p : base) {
      if (p * p > hi) break;
      std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
      for (std::uint64_t j = start; j <= hi; j += p) mark[j - lo] = 0;
    }
    for (std::uint64_t n = lo; n <= hi; ++n) {
      if (mark[n - lo]) out.primes.push_back(static_cast<std::uint32_t>(n));
    }
  }
  return out;
}

ZeroTable parse_zeta_zeros(const std::string& text, const std::string& source) {
  ZeroTable table;
  table.source_path = source;
  std::istringstream in(text);
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string item = trim(line);
    if (item.empty() || item[0] == '#') continue;
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || !std::isfinite(value) || !(value > 0.0)) {
      throw FormatError(source + ": line " + std::to_string(line_number) + ": expected a positive decimal, got '" +
                        item + "'");
    }
    if (!table.gammas.empty() && value < table.gammas.back()) {
      throw OrderError(source + ": line " + std::to_string(line_number) + ": " + item +
                       " is smaller than the previous ordinate");
    }
    table.gammas.push_back(value);
  }
  return table;
}

ZeroTable load_zeta_zeros(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(path + ": cannot open");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_zeta_zeros(buffer.str(), path);
}

Complex digamma(Complex z) {
  if (std::abs(z.imag()) < 1e-12 && z.real() <= 0.0 && std::abs(z.real() - std::round(z.real())) < 1e-12) {
    std::ostringstream msg;
    msg << "digamma: pole at " << z;
    throw PoleError(msg.str());
  }
  Complex shift(0.0);
  while (z.real() < 10.0) {
    shift -= 1.0 / z;
    z += 1.0;
  }
  return digamma_asymptotic(z) + shift;
}

double weil_psi(double t) { return -constants::log_pi + digamma(Complex(0.25, 0.5 * t)).real(); }

Complex c0_chi0(Complex sigma) {
  const Complex half = 0.5 * sigma;
  if (std::abs(half.imag()) < 1e-12 && half.real() <= 0.0 && std::abs(half.real() - std::round(half.real())) < 1e-12) {
    throw PoleError("c0_chi0: sigma lies on the divisor of chi_0 (0, -2, -4, ...)");
  }
  return 0.5 * constants::log_pi - 0.5 * digamma(half);
}

double prime_weight(std::uint64_t p, int k, double beta) {
  const double x = static_cast<double>(p);
  return std::log(x) * std::pow(x, -k * beta);
}

double prime_side(const TestFunction& phi, const PrimeTable& primes, double beta, bool enforce_coverage) {
  const double reach = std::max(std::abs(phi.support_min()), std::abs(phi.support_max()));
  if (enforce_coverage && reach > std::log(static_cast<double>(primes.limit))) {
    std::ostringstream msg;
    msg << "prime_side: support of phi reaches " << reach << " but primes stop at log X = "
        << std::log(static_cast<double>(primes.limit));
    throw CoverageGap(msg.str());
  }
  auto terms = parallel_map(primes.primes.size(), [&](std::size_t j) {
    const double lp = std::log(static_cast<double>(primes.primes[j]));
    CompensatedSum<double> acc;
    for (int k = 1; k * lp <= reach; ++k) {
      const double x = k * lp;
      acc += prime_weight(primes.primes[j], k, beta) * (phi(x) + phi(-x));
    }
    return acc.value();
  });
  CompensatedSum<double> total;
  for (const double t : terms) total += t;
  return total.value();
}

ZeroSide zero_side(const ZeroTable& zeros, const TestFunction& phi, std::optional<std::size_t> count,
                   std::optional<double> tail_tolerance) {
  const std::size_t n = std::min(count.value_or(zeros.count()), zeros.count());
  auto terms = parallel_map(n, [&](std::size_t j) {
    const double g = zeros.gammas[j];
    return fourier_hat(phi, Complex(g)) + fourier_hat(phi, Complex(-g));
  });
  ZeroSide out;
  out.count = n;
  CompensatedSum<Complex> acc;
  double decade = 0.0;
  const double top = n ? zeros.gammas[n - 1] : 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    acc += terms[j];
    if (zeros.gammas[j] > top / 10.0) decade += std::abs(terms[j]);
  }
  out.value = acc.value();
  out.tail_estimate = decade / 9.0;
  if (tail_tolerance && out.tail_estimate > *tail_tolerance) {
    std::ostringstream msg;
    msg << "zero_side: tail estimate " << out.tail_estimate << " exceeds " << *tail_tolerance << " with " << n
        << " zeros";
    throw TailTooLarge(msg.str());
  }
  return out;
}

ArchimedeanTerms archimedean_terms(const TestFunction& phi, double tolerance) {
  ArchimedeanTerms out;
  out.pole = fourier_hat(phi, Complex(0.0, 0.5)) + fourier_hat(phi, Complex(0.0, -0.5));
  // Psi is even and phi is real, so the integral over R is (1/pi) \int_0^inf Psi Re phi^.
  auto integrand = [&](double t) {
    const double psi = t > kPsiAsymptoticSwitch ? weil_psi_asymptotic(t) : weil_psi(t);
    return psi * fourier_hat(phi, Complex(t)).real();
  };
  const double w = phi.width();
  double L = 9.6 / w;
  if (phi.kind() == TestKind::bump) {
    // bump transforms decay like exp(-sqrt(2 w t)); walk out until they stay negligible
    const double floor = 1e-16 * std::abs(fourier_hat(phi, Complex(0.0)));
    const double step = 1.0 / w;
    int quiet = 0;
    for (L = step; quiet < 8; L += std::max(step, 1e-3 * L)) {
      if (L > 1e6) throw QuadratureStall("archimedean_side: transform of phi did not decay");
      quiet = std::abs(fourier_hat(phi, Complex(L))) < floor ? quiet + 1 : 0;
    }
  }
  // absolute target per panel, scaled by the transform mass
  const double scale = std::abs(fourier_hat(phi, Complex(0.0)));
  CompensatedSum<double> total;
  const double panel = std::min(L, 50.0);
  const double per_panel = tolerance * scale * panel / L;
  for (double a = 0.0; a < L; a += panel) {
    const double b = std::min(L, a + panel);
    if (a < kPsiAsymptoticSwitch && b > kPsiAsymptoticSwitch) {
      total += gk_integrate_absolute(integrand, a, kPsiAsymptoticSwitch, per_panel);
      total += gk_integrate_absolute(integrand, kPsiAsymptoticSwitch, b, per_panel);
    } else {
      total += gk_integrate_absolute(integrand, a, b, per_panel);
    }
  }
  out.weil_integral = total.value() / constants::pi;
  return out;
}

Complex archimedean_side(const TestFunction& phi, double tolerance) {
  const auto t = archimedean_terms(phi, tolerance);
  return t.pole + t.weil_integral;
}

ExplicitFormulaReport explicit_formula_check(const TestFunction& phi, const ZeroTable& zeros,
                                             std::optional<std::size_t> zero_count, const PrimeTable& primes,
                                             double quadrature_tolerance) {
  ExplicitFormulaReport r;
  const auto zs = zero_side(zeros, phi, zero_count);
  const auto arch = archimedean_terms(phi, quadrature_tolerance);
  r.zero_side = zs.value;
  r.zero_count = zs.count;
  r.zero_tail = zs.tail_estimate;
  r.pole_side = arch.pole;
  r.archimedean_side = arch.weil_integral;
  r.prime_side = prime_side(phi, primes, 0.5, false);
  r.prime_limit = primes.limit;
  r.quadrature_tolerance = quadrature_tolerance;
  r.residual = std::abs(r.zero_side - (r.pole_side + r.archimedean_side - r.prime_side));
  const double scale = std::max({std::abs(r.zero_side), std::abs(r.pole_side), std::abs(r.archimedean_side),
                                 std::abs(r.prime_side), 1e-300});
  r.relative_residual = r.residual / scale;
  return r;
}

double w0_remainder(double t) {
  if (t == 0.0) throw PoleError("w0_remainder: t = 0");
  const double a = std::abs(t);
  return -std::exp(0.5 * a) + std::exp(-1.5 * a) / (2.0 * std::sinh(a));
}

double trivial_divisor_sum(double t, int terms) {
  const double a = std::abs(t);
  CompensatedSum<double> acc;
  for (int n = terms; n >= 1; --n) acc += std::exp(-2.0 * n * a);
  return -std::exp(0.5 * a) + std::exp(-0.5 * a) * acc.value();
}

double selberg_remainder_pairing(double genus, const TestFunction& phi) {
  const double lo = phi.support_min(), hi = phi.support_max();
  if (lo < 0.0 && hi > 0.0) {
    throw InvalidArgument("selberg: phi must be supported away from 0");
  }
  auto kernel = [&](double t) {
    const double s = std::sinh(0.5 * t);
    return std::cosh(0.5 * t) / (s * s) * phi(t);
  };
  const double a = (lo == 0.0) ? 0.0 : lo;
  // the kernel is singular only at 0, where phi vanishes to all orders when lo == 0
  const double integral = gk_integrate(
      [&](double t) { return t == 0.0 ? 0.0 : kernel(t); }, a, hi, 1e-15);
  return -0.5 * (genus - 1.0) * integral;
}

double selberg_length_side(const std::vector<double>& lengths, const TestFunction& phi) {
  const double reach = std::max(std::abs(phi.support_min()), std::abs(phi.support_max()));
  CompensatedSum<double> acc;
  for (const double tau : lengths) {
    if (!(tau > 0.0)) throw InvalidArgument("selberg: lengths must be positive");
    for (int l = 1; tau * l <= reach; ++l) {
      const double x = tau * l;
      acc += tau / (4.0 * std::sinh(0.5 * x)) * (phi(x) + phi(-x));
    }
  }
  return acc.value();
}

Complex selberg_spectral_side(const std::vector<Complex>& eigen_gammas, const TestFunction& phi,
                              double* tail_estimate) {
  std::vector<Complex> sorted = eigen_gammas;
  std::sort(sorted.begin(), sorted.end(), [](Complex a, Complex b) {
    if (std::abs(a.real()) != std::abs(b.real())) return std::abs(a.real()) < std::abs(b.real());
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  CompensatedSum<Complex> acc;
  double top = 0.0;
  for (const auto g : sorted) top = std::max(top, std::abs(g.real()));
  double decade = 0.0;
  for (const auto g : sorted) {
    const Complex term = 0.5 * (fourier_hat(phi, g) + fourier_hat(phi, -g));
    acc += term;
    if (std::abs(g.real()) > top / 10.0) decade += std::abs(term);
  }
  if (tail_estimate) *tail_estimate = decade / 9.0;
  return acc.value();
}

SelbergData selberg_synthetic_fixture(std::vector<Complex> eigen_gammas, std::vector<double> lengths,
                                      const TestFunction& phi) {
  SelbergData data;
  data.eigen_gammas = std::move(eigen_gammas);
  data.lengths = std::move(lengths);
  data.length_cutoff = std::max(std::abs(phi.support_min()), std::abs(phi.support_max()));
  // the remainder is affine in h: R(h) = (h - 1) R(2)
  const double unit = selberg_remainder_pairing(2.0, phi);
  if (unit == 0.0) throw InvalidArgument("selberg fixture: remainder pairing vanishes for this phi");
  const Complex spectral = selberg_spectral_side(data.eigen_gammas, phi);
  const double atoms = selberg_length_side(data.lengths, phi);
  data.genus = 1.0 + (spectral.real() - atoms) / unit;
  return data;
}

VerificationReport selberg_instance_check(const SelbergData& data, const TestFunction& phi, double tolerance,
                                          std::optional<double> tail_tolerance) {
  if (data.length_cutoff && phi.support_max() > *data.length_cutoff) {
    std::ostringstream msg;
    msg << "selberg: support of phi reaches " << phi.support_max() << " beyond the length cutoff "
        << *data.length_cutoff;
    throw CoverageGap(msg.str());
  }
  double tail = 0.0;
  const Complex lhs = selberg_spectral_side(data.eigen_gammas, phi, &tail);
  if (tail_tolerance && tail > *tail_tolerance) {
    throw TailTooLarge("selberg: spectral tail estimate exceeds tolerance");
  }
  const double remainder = selberg_remainder_pairing(data.genus, phi);
  const double atoms = selberg_length_side(data.lengths, phi);
  auto report = make_report("selberg", lhs, Complex(remainder + atoms), tolerance);
  report.params["genus"] = data.genus;
  report.params["eigen_count"] = static_cast<double>(data.eigen_gammas.size());
  report.params["length_count"] = static_cast<double>(data.lengths.size());
  report.params["remainder"] = remainder;
  report.params["length_side"] = atoms;
  report.params["spectral_tail"] = tail;
  if (data.eigen_gammas.empty() && data.lengths.empty()) {
    report.notes["insufficient_data"] = "no eigenvalues and no lengths supplied; only the remainder term is compared";
    report.pass = false;
  }
  report.notes["test_function"] = phi.to_string();
  return report;
}

}  // namespace pnf
