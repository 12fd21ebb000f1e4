#include "doctest.h"

#include <cmath>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "pnf/number_theory.hpp"

using namespace pnf;

namespace {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

const ZeroTable& table() {
  static const ZeroTable t = load_zeta_zeros(std::string(PNF_DATA_DIR) + "/zeta_zeros_10k.txt");
  return t;
}

const PrimeTable& primes_1e6() {
  static const PrimeTable p = sieve_primes(1000000);
  return p;
}

// composite Simpson rule on n (even) panels
template <typename Fn>
double simpson(Fn&& g, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = g(a) + g(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * g(a + i * h);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("sieve") {
  CHECK(sieve_primes(10).primes == std::vector<std::uint32_t>{2, 3, 5, 7});
  CHECK(sieve_primes(100).primes.size() == 25);
  CHECK(sieve_primes(2).primes.size() == 1);
  const auto p = sieve_primes(20000);
  std::size_t expected = 0;
  for (std::uint64_t n = 2; n <= 20000; ++n) expected += is_prime(n);
  CHECK(p.primes.size() == expected);
  for (const auto q : p.primes) CHECK(is_prime(q));
  CHECK(primes_1e6().primes.size() == 78498);
  CHECK(primes_1e6().limit == 1000000);
}

TEST_CASE("zero table parsing") {
  const auto one = parse_zeta_zeros("14.134725142\n");
  REQUIRE(one.count() == 1);
  CHECK(one.gammas[0] == doctest::Approx(14.134725142));
  CHECK(parse_zeta_zeros("").count() == 0);
  CHECK(parse_zeta_zeros("# header\n\n14.1\n21.0\n# trailing\n").count() == 2);
  CHECK_THROWS_AS(parse_zeta_zeros("21.0\n14.1\n"), OrderError);
  CHECK_THROWS_AS(parse_zeta_zeros("-3\n"), FormatError);
  try {
    parse_zeta_zeros("14.1\nabc\n");
    FAIL("expected a format error");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  // repeated ordinates encode multiplicity
  CHECK(parse_zeta_zeros("14.1\n14.1\n").count() == 2);
}

TEST_CASE("bundled zero table") {
  const auto& z = table();
  CHECK(z.count() == 10000);
  CHECK(z.gammas.front() > 14.13);
  CHECK(z.gammas.front() < 14.14);
  for (std::size_t i = 1; i < z.count(); ++i) CHECK(z.gammas[i] > z.gammas[i - 1]);
}

TEST_CASE("digamma values") {
  CHECK(std::abs(digamma(1.0) + constants::euler_gamma) < 1e-15);
  CHECK(std::abs(digamma(2.0) - (1.0 - constants::euler_gamma)) < 1e-15);
  const double quarter = -constants::pi / 2.0 - 3.0 * constants::log2 - constants::euler_gamma;
  CHECK(std::abs(digamma(0.25) - quarter) < 1e-14);
  CHECK(quarter == doctest::Approx(-4.2274535).epsilon(1e-7));
  CHECK_THROWS_AS(digamma(0.0), PoleError);
  CHECK_THROWS_AS(digamma(-3.0), PoleError);
}

TEST_CASE("digamma recurrence") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> re(0.1, 20.0), im(-20.0, 20.0);
  for (int i = 0; i < 100; ++i) {
    const Complex z(re(rng), im(rng));
    const Complex gap = digamma(z + 1.0) - digamma(z) - 1.0 / z;
    CHECK(std::abs(gap) < 1e-13 * std::max(1.0, std::abs(digamma(z))));
  }
}

TEST_CASE("digamma against its partial-fraction series") {
  // psi(z) = -gamma + sum_{n >= 0} (1/(n + 1) - 1/(n + z))
  const double z = 0.25;
  double s = 0.0;
  for (int n = 1000000 - 1; n >= 0; --n) s += 1.0 / (n + 1.0) - 1.0 / (n + z);
  CHECK(std::abs(-constants::euler_gamma + s - digamma(z).real()) < 2e-6);
}

TEST_CASE("weil psi") {
  CHECK(weil_psi(0.0) == doctest::Approx(-5.3721834).epsilon(1e-7));
  for (const double t : {1.0, 5.0, 20.0}) CHECK(weil_psi(-t) == weil_psi(t));
  CHECK(std::abs(weil_psi(1e4) - (-constants::log_pi + std::log(5e3))) < 1e-3);
}

TEST_CASE("closed-form constants") {
  CHECK(c0_chi0(0.5).real() == doctest::Approx(2.6860917).epsilon(1e-7));
  CHECK(std::abs(c0_chi0(0.5) + zeta_constants::c0_half) < 1e-12);
  CHECK(zeta_constants::c0_zero == -1.8378770664093454835606594728112352797227949472756);
  CHECK(std::abs(zeta_constants::c0_zero + std::log(2.0 * std::numbers::pi)) < 1e-15);
  CHECK(zeta_constants::c0_half == doctest::Approx(-2.6860917).epsilon(1e-7));
  CHECK_THROWS_AS(c0_chi0(-2.0), PoleError);
  CHECK_THROWS_AS(c0_chi0(0.0), PoleError);
}

TEST_CASE("prime side") {
  const auto small = sieve_primes(1000);
  const double l2 = std::log(2.0);

  const auto at_log2 = TestFunction::bump(l2, 0.1);
  CHECK(std::abs(prime_side(at_log2, small, 0.5) - l2 / std::sqrt(2.0) * at_log2(l2)) < 1e-15);

  CHECK(prime_side(TestFunction::bump(0.35, 0.3), small, 0.5) == 0.0);

  const auto at_4 = TestFunction::bump(2.0 * l2, 0.05);
  CHECK(std::abs(prime_side(at_4, small, 0.0) - l2 * at_4(2.0 * l2)) < 1e-15);

  CHECK_THROWS_AS(prime_side(TestFunction::bump(8.0, 0.5), small, 0.5), CoverageGap);
  CHECK_NOTHROW(prime_side(TestFunction::bump(8.0, 0.5), small, 0.5, false));

  // weights of the beta = 1/2 form are exactly log p p^{-k/2}
  for (const std::uint64_t p : {2, 3, 5, 7}) {
    for (int k = 1; k <= 3; ++k) {
      const double x = static_cast<double>(p);
      CHECK(prime_weight(p, k, 0.5) == std::log(x) * std::pow(x, -k / 2.0));
      CHECK(prime_weight(p, k, 0.0) == std::log(x));
    }
  }
}

TEST_CASE("prime side beta versions agree after reweighting") {
  const auto primes = sieve_primes(1000);
  const auto phi = TestFunction::bump(3.0, 2.0);
  // phi_w(t) = phi(t) e^{t/2} turns the beta = 1/2 weights into the beta = 0 weights;
  // check it atom by atom
  double a = 0.0, b = 0.0;
  for (const auto p : primes.primes) {
    const double lp = std::log(double(p));
    for (int k = 1; k * lp <= 5.0; ++k) {
      a += prime_weight(p, k, 0.5) * std::exp(0.5 * k * lp) * phi(k * lp);
      b += prime_weight(p, k, 0.0) * phi(k * lp);
    }
  }
  CHECK(a == doctest::Approx(b).epsilon(1e-14));
  CHECK(b == doctest::Approx(prime_side(phi, primes, 0.0)).epsilon(1e-14));
}

TEST_CASE("zero side") {
  CHECK(zero_side(ZeroTable{}, TestFunction::gaussian(0.0, 1.0)).value == Complex(0.0));

  const auto one = parse_zeta_zeros("14.134725141734693790\n");
  const double w = 0.5, g = 14.134725141734693790;
  const double expected = 2.0 * w * std::sqrt(constants::two_pi) * std::exp(-w * w * g * g / 2.0);
  CHECK(std::abs(zero_side(one, TestFunction::gaussian(0.0, w)).value.real() - expected) < 1e-14 * expected);

  for (const double width : {0.05, 0.1}) {
    const auto phi = TestFunction::gaussian(0.0, width);
    const auto a = zero_side(table(), phi, 1000);
    const auto b = zero_side(table(), phi, 2000);
    CHECK(std::abs(a.value - b.value) < a.tail_estimate);
  }
  CHECK_THROWS_AS(zero_side(table(), TestFunction::gaussian(0.0, 0.05), 100, 1e-30), TailTooLarge);
}

TEST_CASE("archimedean side") {
  for (const double w : {0.5, 1.0}) {
    const auto g = TestFunction::gaussian(0.0, w);
    const auto t = archimedean_terms(g);
    const double half = w * std::sqrt(constants::two_pi) * std::exp(w * w / 8.0);
    CHECK(std::abs(t.pole - 2.0 * half) < 1e-13 * half);
    CHECK(std::abs(t.weil_integral.imag()) < 1e-12);
  }
  // brute-force oracle on the full line with the exact Psi
  for (const double w : {1.0, 0.05}) {
    const auto g = TestFunction::gaussian(0.0, w);
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    const double L = 10.0 / w;
    const double dense = GK::integrate(
        [&](double t) { return weil_psi(t) * fourier_hat(g, Complex(t)).real(); }, -L, L, 25, 1e-15);
    CHECK(std::abs(archimedean_terms(g).weil_integral.real() - dense / constants::two_pi) < 1e-8);
  }
}

TEST_CASE("explicit formula") {
  const auto& primes = primes_1e6();
  SUBCASE("identity at desk scale") {
    const auto r = explicit_formula_check(TestFunction::gaussian(0.0, 1.0), table(), 100, primes);
    CHECK(r.relative_residual < 1e-3);
    CHECK(r.zero_count == 100);
    CHECK(r.prime_limit == 1000000);
    const double recomputed = std::abs(r.zero_side - (r.pole_side + r.archimedean_side - r.prime_side));
    CHECK(r.residual == recomputed);
  }

  SUBCASE("removing the zero side breaks it") {
    const auto r = explicit_formula_check(TestFunction::gaussian(0.0, 1.0), table(), 0, sieve_primes(2));
    CHECK(r.residual > 0.1);
  }

  SUBCASE("wider gaussians converge faster") {
    const auto narrow = explicit_formula_check(TestFunction::gaussian(0.0, 0.5), table(), 0, primes);
    const auto wide = explicit_formula_check(TestFunction::gaussian(0.0, 1.0), table(), 0, primes);
    CHECK(wide.relative_residual < narrow.relative_residual);
  }

  SUBCASE("bump test function") {
    const auto r = explicit_formula_check(TestFunction::bump(0.0, 3.0), table(), 1000, primes);
    CHECK(r.relative_residual < 1e-10);
  }
}

TEST_CASE("trivial-divisor remainder") {
  CHECK(w0_remainder(1.0) == doctest::Approx(-1.55377).epsilon(1e-5));
  for (const double t : {0.5, 1.0, 2.0}) {
    CHECK(std::abs(trivial_divisor_sum(t, 50) - w0_remainder(t)) < 1e-12);
    CHECK(w0_remainder(-t) == w0_remainder(t));
  }
  CHECK(std::abs(w0_remainder(40.0) + std::exp(20.0)) < 1e-20 * std::exp(20.0) + 1e-30);
  CHECK_THROWS_AS(w0_remainder(0.0), PoleError);
}

TEST_CASE("selberg remainder pairing against a dense oracle") {
  const auto phi = TestFunction::bump(1.5, 0.5);
  const double h = 2.0;
  auto kernel = [&](double t) {
    const double s = std::sinh(0.5 * t);
    return std::cosh(0.5 * t) / (s * s) * phi(t);
  };
  const double coarse = simpson(kernel, 1.0, 2.0, 4000);
  const double fine = simpson(kernel, 1.0, 2.0, 8000);
  CHECK(std::abs(coarse - fine) < 1e-12);
  const double oracle = -0.5 * (h - 1.0) * fine;
  CHECK(std::abs(selberg_remainder_pairing(h, phi) - oracle) < 1e-10);
  CHECK_THROWS_AS(selberg_remainder_pairing(h, TestFunction::bump(0.0, 1.0)), InvalidArgument);
}

TEST_CASE("selberg instance") {
  const auto phi = TestFunction::bump(2.0, 1.0);
  SUBCASE("synthetic fixture is self-consistent") {
    const auto data = selberg_synthetic_fixture({3.1, 4.7, Complex(0.0, 0.3), 9.2, 13.5}, {1.3, 1.9, 2.6}, phi);
    const auto r = selberg_instance_check(data, phi);
    CHECK(r.pass);
    CHECK(r.rel_err < 1e-10);
    auto perturbed = data;
    perturbed.genus += 0.01;
    CHECK_FALSE(selberg_instance_check(perturbed, phi).pass);
  }

  SUBCASE("empty spectra are flagged") {
    SelbergData data;
    data.genus = 2.0;
    const auto r = selberg_instance_check(data, phi);
    CHECK_FALSE(r.pass);
    CHECK(r.notes.count("insufficient_data") == 1);
  }

  SUBCASE("lengths must cover the support") {
    SelbergData data;
    data.genus = 2.0;
    data.lengths = {1.0};
    data.length_cutoff = 2.0;
    CHECK_THROWS_AS(selberg_instance_check(data, phi), CoverageGap);
  }

  SUBCASE("spectral tail tolerance") {
    SelbergData data;
    data.genus = 2.0;
    data.eigen_gammas = {1.0, 2.0, 3.0};
    CHECK_THROWS_AS(selberg_instance_check(data, phi, 1e-10, 1e-30), TailTooLarge);
  }
}
