#include "pnf/faddeeva.hpp"

#include <array>
#include <cmath>

namespace pnf {

namespace {

constexpr int kTerms = 40;

struct WeidemanTable {
  double L = 0.0;
  std::array<double, kTerms> coeffs{};  // highest degree first

  WeidemanTable() {
    constexpr int M = 2 * kTerms;
    constexpr int M2 = 2 * M;
    L = std::sqrt(kTerms / std::sqrt(2.0));
    // samples of exp(-t^2)(L^2 + t^2) at t = L tan(theta/2), k = -M+1 .. M-1, with f(-M) = 0
    std::array<double, M2> f{};
    for (int k = -M + 1; k <= M - 1; ++k) {
      const double theta = k * constants::pi / M;
      const double t = L * std::tan(0.5 * theta);
      f[static_cast<std::size_t>(k + M)] = std::exp(-t * t) * (L * L + t * t);
    }
    // fftshift then real part of the DFT; only the first kTerms+1 outputs are needed
    std::array<double, M2> shifted{};
    for (int j = 0; j < M2; ++j) shifted[static_cast<std::size_t>(j)] = f[static_cast<std::size_t>((j + M) % M2)];
    for (int n = 1; n <= kTerms; ++n) {
      double acc = 0.0;
      for (int j = 0; j < M2; ++j) {
        acc += shifted[static_cast<std::size_t>(j)] * std::cos(constants::two_pi * n * j / M2);
      }
      coeffs[static_cast<std::size_t>(kTerms - n)] = acc / M2;
    }
  }
};

const WeidemanTable& table() {
  static const WeidemanTable t;
  return t;
}

Complex upper_half(Complex z) {
  const auto& t = table();
  const Complex iz(-z.imag(), z.real());
  const Complex denom = t.L - iz;
  const Complex Z = (t.L + iz) / denom;
  Complex p(0.0);
  for (const double c : t.coeffs) p = p * Z + c;
  return 2.0 * p / (denom * denom) + (1.0 / std::sqrt(constants::pi)) / denom;
}

}  // namespace

Complex faddeeva_w(Complex z) {
  if (z.imag() >= 0.0) return upper_half(z);
  return 2.0 * std::exp(-z * z) - upper_half(-z);
}

}  // namespace pnf
