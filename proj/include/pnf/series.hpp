#pragma once

// Finite Dirichlet series f(s) = 1 + sum_n a_n exp(-lambda_n s) and the
// algebra attached to -log f: the coefficients b_k indexed by multi-indices
// over the frequencies, and the atomic measure they induce on the frequency
// lattice.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pnf/common.hpp"

namespace pnf {

class DirichletSeries {
 public:
  /// Validates and normalizes. Zero coefficients are dropped. When
  /// `rational_base` is given, `multipliers` may be left empty (they are
  /// recovered from the frequencies) and `frequencies` may be left empty
  /// (they are generated as multiplier * base).
  static DirichletSeries create(std::vector<double> frequencies, std::vector<Complex> coefficients,
                                std::optional<double> rational_base = std::nullopt,
                                std::vector<std::int64_t> multipliers = {});

  [[nodiscard]] const VectorXd& frequencies() const { return frequencies_; }
  [[nodiscard]] const VectorXcd& coefficients() const { return coefficients_; }
  [[nodiscard]] std::optional<double> rational_base() const { return rational_base_; }
  [[nodiscard]] const std::vector<std::int64_t>& multipliers() const { return multipliers_; }
  [[nodiscard]] Eigen::Index size() const { return frequencies_.size(); }

  /// The series with conjugated coefficients, i.e. s -> conj(f(conj(s))).
  [[nodiscard]] DirichletSeries conjugate() const;

 private:
  DirichletSeries() = default;

  VectorXd frequencies_;
  VectorXcd coefficients_;
  std::optional<double> rational_base_;
  std::vector<std::int64_t> multipliers_;
};

/// f(s), accumulated in ascending frequency order with compensation.
template <typename Scalar>
std::complex<Scalar> evaluate(const DirichletSeries& f, const std::complex<Scalar>& s) {
  CompensatedSum<std::complex<Scalar>> acc;
  acc += std::complex<Scalar>(1);
  for (Eigen::Index n = 0; n < f.size(); ++n) {
    const auto a = std::complex<Scalar>(f.coefficients()[n]);
    acc += a * std::exp(-Scalar(f.frequencies()[n]) * s);
  }
  return acc.value();
}

/// f'(s).
template <typename Scalar>
std::complex<Scalar> derivative(const DirichletSeries& f, const std::complex<Scalar>& s) {
  CompensatedSum<std::complex<Scalar>> acc;
  for (Eigen::Index n = 0; n < f.size(); ++n) {
    const Scalar lambda = f.frequencies()[n];
    acc += -lambda * std::complex<Scalar>(f.coefficients()[n]) * std::exp(-lambda * s);
  }
  return acc.value();
}

/// 1 + sum |a_n| exp(-lambda_n Re s): the natural magnitude of the terms of f at s.
inline double term_scale(const DirichletSeries& f, double re_s) {
  double scale = 1.0;
  for (Eigen::Index n = 0; n < f.size(); ++n) {
    scale += std::abs(f.coefficients()[n]) * std::exp(-f.frequencies()[n] * re_s);
  }
  return scale;
}

/// Vectorized evaluation over a set of points.
inline VectorXcd evaluate(const DirichletSeries& f, const VectorXcd& points) {
  VectorXcd out(points.size());
  for (Eigen::Index i = 0; i < points.size(); ++i) out[i] = evaluate(f, points[i]);
  return out;
}

/// f'(s)/f(s). Throws NearZeroDenominator when |f(s)| < relative_floor * term_scale.
Complex log_derivative(const DirichletSeries& f, Complex s, double relative_floor = 1e-13);

/// Finite-range version of limsup log(|a_1| + ... + |a_n|) / lambda_n.
double abscissa(const DirichletSeries& f);

/// Sparse multi-index: (series index, positive count), ascending by index.
using MultiIndex = std::vector<std::pair<int, int>>;

inline int order(const MultiIndex& k) {
  int total = 0;
  for (const auto& [index, count] : k) total += count;
  return total;
}

/// b_k = (-1)^|k| / |k| * (|k|! / prod k_j!) * prod a_j^k_j.
Complex log_coefficient(const MultiIndex& k, const VectorXcd& coefficients);

struct LogExpansionEntry {
  MultiIndex index;
  Complex b;
  double frequency = 0.0;
  std::optional<std::int64_t> lattice;  // sum m_j k_j when a rational base exists
};

struct LogExpansion {
  std::vector<LogExpansionEntry> entries;
  double cutoff = 0.0;
};

inline constexpr std::size_t kDefaultEntryBudget = 10'000'000;

/// All multi-indices with 1 <= |k| and <lambda, k> <= T.
LogExpansion log_expansion(const DirichletSeries& f, double cutoff,
                           std::size_t entry_budget = kDefaultEntryBudget);

/// sum_k b_k exp(-<lambda,k> s) over the stored entries, which approximates -log f(s).
Complex log_expansion_sum(const LogExpansion& expansion, Complex s);

struct FrequencyAtom {
  double frequency = 0.0;
  Complex weight;
  int contributing_count = 0;
};

/// Entries of the log expansion merged by frequency; weight = sum <lambda,k> b_k.
std::vector<FrequencyAtom> atom_measure(const LogExpansion& expansion, bool exact_lattice,
                                        double lattice_base = 0.0);
std::vector<FrequencyAtom> atom_measure(const DirichletSeries& f, double cutoff,
                                        std::size_t entry_budget = kDefaultEntryBudget);

/// Two frequencies merge when |v1 - v2| < kMergeTolerance * max(1, v1).
inline constexpr double kMergeTolerance = 1e-12;

struct FunctionalEquationInfo {
  bool has_fe = false;
  double mu = 0.0;
  int c = 1;
  std::string axis_note;
};

FunctionalEquationInfo detect_functional_equation(const DirichletSeries& f,
                                                  double tolerance = 1e-12);

/// True iff every coefficient is real.
bool is_real_analytic(const DirichletSeries& f);

}  // namespace pnf
