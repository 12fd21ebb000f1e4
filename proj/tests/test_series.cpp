#include "doctest.h"

#include <cmath>
#include <map>
#include <random>

#include "pnf/series.hpp"

using namespace pnf;
using namespace std::complex_literals;

namespace {

DirichletSeries one_minus(double lambda) {
  return DirichletSeries::create({lambda}, {Complex(-1.0)}, lambda, {});
}

}  // namespace

TEST_CASE("eval at simple points") {
  const auto f = one_minus(1.0);
  CHECK(std::abs(evaluate(f, Complex(0.0, constants::pi)) - Complex(2.0)) < 1e-15);
  CHECK(std::abs(evaluate(f, Complex(0.0, constants::two_pi))) < 1e-15);
  const auto g = DirichletSeries::create({1.0, std::sqrt(2.0)}, {0.5, 0.25});
  CHECK(evaluate(g, Complex(0.0)).real() == doctest::Approx(1.75).epsilon(1e-15));
}

TEST_CASE("log derivative") {
  const auto f = one_minus(1.0);
  const double expected = 1.0 / (std::exp(1.0) - 1.0);
  CHECK(std::abs(log_derivative(f, Complex(1.0)) - expected) < 1e-15);
  CHECK_THROWS_AS(log_derivative(f, Complex(0.0, constants::two_pi)), NearZeroDenominator);
  CHECK(std::abs(log_derivative(f, Complex(50.0, 0.3))) < 1e-8);
}

TEST_CASE("abscissa") {
  CHECK(abscissa(one_minus(1.0)) == 0.0);
  CHECK(abscissa(DirichletSeries::create({1.0}, {3.0})) == doctest::Approx(std::log(3.0)));
  const auto f = DirichletSeries::create({1.0, 2.0}, {1.0, 1.0});
  CHECK(abscissa(f) == doctest::Approx(std::log(2.0) / 2.0));
}

TEST_CASE("validation names the offending field") {
  auto message = [](auto&& fn) {
    try {
      fn();
    } catch (const InvalidSeries& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message([] { DirichletSeries::create({2.0, 1.0}, {1.0, 1.0}); }).find("frequencies") == 0);
  CHECK(message([] { DirichletSeries::create({1.0}, {1.0, 2.0}); }).find("coefficients") == 0);
  CHECK(message([] { DirichletSeries::create({1.0}, {0.0}); }).find("coefficients") == 0);
  CHECK(message([] { DirichletSeries::create({1.5}, {1.0}, 1.0); }).find("frequencies") == 0);
  CHECK(message([] { DirichletSeries::create({1.0}, {1.0}, -1.0); }).find("rational_base") == 0);
  // zero coefficients are dropped
  const auto f = DirichletSeries::create({1.0, 2.0, 3.0}, {1.0, 0.0, 2.0});
  CHECK(f.size() == 2);
  CHECK(f.frequencies()[1] == 3.0);
}

TEST_CASE("log expansion of 1 - exp(-lambda s) is 1/k") {
  const double lambda = 0.7;
  const auto e = log_expansion(one_minus(lambda), 10.0);
  REQUIRE(e.entries.size() == 14);
  for (const auto& entry : e.entries) {
    const int k = order(entry.index);
    CHECK(std::abs(entry.b - Complex(1.0 / k)) < 1e-16);
    CHECK(entry.frequency == doctest::Approx(k * lambda));
  }
}

TEST_CASE("two-frequency log coefficients follow the binomial form") {
  const Complex a1(0.3, -0.2), a2(-0.7, 0.1);
  const auto f = DirichletSeries::create({1.0, 2.5}, {a1, a2});
  const auto e = log_expansion(f, 9.0);
  for (const auto& entry : e.entries) {
    int k1 = 0, k2 = 0;
    for (const auto& [idx, cnt] : entry.index) (idx == 0 ? k1 : k2) = cnt;
    const int n = k1 + k2;
    const double binom = std::tgamma(n + 1.0) / (std::tgamma(k1 + 1.0) * std::tgamma(k2 + 1.0));
    const Complex expected = ((n % 2 == 0) ? 1.0 : -1.0) / n * binom * std::pow(a1, k1) * std::pow(a2, k2);
    CHECK(std::abs(entry.b - expected) < 1e-14 * std::max(1e-3, std::abs(expected)));
    CHECK(entry.frequency <= 9.0);
  }
}

TEST_CASE("Euler factor coefficients") {
  // (1 - p^{-s})^{-1} = 1 + sum_k p^{-ks}: -log of it = log(1 - p^{-s}), so b at k log p is -1/k.
  // With f = 1/(1 - x), f is not a finite series; check via f = 1 - x instead and negate.
  const double lp = std::log(3.0);
  const auto e = log_expansion(one_minus(lp), 5.0 * lp + 1e-9);
  for (const auto& entry : e.entries) {
    CHECK(std::abs(-entry.b - Complex(-1.0 / order(entry.index))) < 1e-16);
  }
}

TEST_CASE("stored b values recompute bit-for-bit; real series have real b") {
  const auto f = DirichletSeries::create({1.0, std::sqrt(2.0), 2.2}, {0.5, -0.25, 0.125});
  const auto e = log_expansion(f, 8.0);
  for (const auto& entry : e.entries) {
    CHECK(log_coefficient(entry.index, f.coefficients()) == entry.b);
    CHECK(entry.b.imag() == 0.0);
  }
  CHECK(is_real_analytic(f));
  CHECK_FALSE(is_real_analytic(DirichletSeries::create({1.0}, {Complex(0.0, 1.0)})));
}

TEST_CASE("conjugate series has conjugate coefficients") {
  const auto f = DirichletSeries::create({1.0, 1.7}, {Complex(0.2, 0.4), Complex(-0.3, 0.1)});
  const auto e = log_expansion(f, 7.0);
  const auto ec = log_expansion(f.conjugate(), 7.0);
  REQUIRE(e.entries.size() == ec.entries.size());
  for (std::size_t i = 0; i < e.entries.size(); ++i) {
    CHECK(e.entries[i].index == ec.entries[i].index);
    CHECK(ec.entries[i].b == std::conj(e.entries[i].b));
  }
}

TEST_CASE("exp(-sum b) converges monotonically to f") {
  const auto f = DirichletSeries::create({1.0, std::sqrt(2.0)}, {0.5, 0.25});
  const Complex s(abscissa(f) + 1.0, 0.7);
  double previous = 1e300;
  for (const double T : {3.0, 6.0, 12.0}) {
    const auto e = log_expansion(f, T);
    const double err = std::abs(std::exp(-log_expansion_sum(e, s)) - evaluate(f, s));
    CHECK(err < previous);
    previous = err;
  }
  CHECK(previous < 1e-5);
}

TEST_CASE("explosion guard") {
  const auto f = DirichletSeries::create({0.01, 0.0137, 0.019}, {0.1, 0.1, 0.1});
  CHECK_THROWS_AS(log_expansion(f, 50.0, 1000), ExplosionGuard);
}

TEST_CASE("atom measures") {
  SUBCASE("unit weights for 1 - exp(-s)") {
    const auto atoms = atom_measure(one_minus(1.0), 3.5);
    REQUIRE(atoms.size() == 3);
    for (int k = 0; k < 3; ++k) {
      CHECK(atoms[k].frequency == k + 1.0);
      CHECK(std::abs(atoms[k].weight - Complex(1.0)) < 1e-15);
    }
  }
  SUBCASE("collision at 2 for 1 + exp(-s) + exp(-2s)") {
    const auto f = DirichletSeries::create({1.0, 2.0}, {1.0, 1.0}, 1.0);
    const auto atoms = atom_measure(f, 2.0);
    REQUIRE(atoms.size() == 2);
    CHECK(atoms[0].frequency == 1.0);
    CHECK(std::abs(atoms[0].weight - Complex(-1.0)) < 1e-15);
    CHECK(atoms[1].frequency == 2.0);
    CHECK(atoms[1].contributing_count == 2);
    CHECK(std::abs(atoms[1].weight - Complex(-1.0)) < 1e-15);
    // same result without a rational base (floating merge)
    const auto g = DirichletSeries::create({1.0, 2.0}, {1.0, 1.0});
    const auto atoms_float = atom_measure(g, 2.0);
    REQUIRE(atoms_float.size() == 2);
    CHECK(std::abs(atoms_float[1].weight - Complex(-1.0)) < 1e-15);
  }
  SUBCASE("independent frequencies never merge") {
    const auto f = DirichletSeries::create({1.0, std::sqrt(2.0)}, {0.3, 0.4});
    const auto atoms = atom_measure(f, 2.5);
    REQUIRE(atoms.size() == 4);
    CHECK(atoms[0].frequency == doctest::Approx(1.0));
    CHECK(atoms[1].frequency == doctest::Approx(std::sqrt(2.0)));
    CHECK(atoms[2].frequency == doctest::Approx(2.0));
    CHECK(atoms[3].frequency == doctest::Approx(1.0 + std::sqrt(2.0)));
  }
}

TEST_CASE("atom measure does not depend on enumeration order") {
  const auto f = DirichletSeries::create({1.0, 2.0, 3.0}, {0.4, -0.3, 0.2}, 1.0);
  auto e = log_expansion(f, 12.0);
  const auto reference = atom_measure(e, true, 1.0);
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    std::shuffle(e.entries.begin(), e.entries.end(), rng);
    const auto atoms = atom_measure(e, true, 1.0);
    REQUIRE(atoms.size() == reference.size());
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      CHECK(atoms[i].frequency == reference[i].frequency);
      CHECK(atoms[i].weight == reference[i].weight);
    }
    const auto float_atoms = atom_measure(e, false);
    REQUIRE(float_atoms.size() == reference.size());
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      CHECK(std::abs(float_atoms[i].weight - reference[i].weight) < 1e-14);
    }
  }
}

TEST_CASE("functional equation detection") {
  auto fe = detect_functional_equation(DirichletSeries::create({1.0, 2.0}, {3.0, 1.0}));
  CHECK(fe.has_fe);
  CHECK(fe.mu == 1.0);
  CHECK(fe.c == 1);
  fe = detect_functional_equation(DirichletSeries::create({1.0, 2.5}, {0.4, 0.7}));
  CHECK_FALSE(fe.has_fe);
  fe = detect_functional_equation(DirichletSeries::create({2.0}, {-1.0}));
  CHECK(fe.has_fe);
  CHECK(fe.mu == 1.0);
  CHECK(fe.c == -1);
  // N even forces c = +1: (1, 0.5, -1) is not antipalindromic-admissible
  fe = detect_functional_equation(DirichletSeries::create({1.0, 2.0}, {0.0 + 0.5, -1.0}));
  CHECK_FALSE(fe.has_fe);
}
