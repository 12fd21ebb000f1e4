#include "pnf/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace pnf {

namespace {

constexpr double kLatticeTolerance = 1e-12;

bool same_lattice_point(double frequency, std::int64_t multiplier, double base) {
  const double expected = static_cast<double>(multiplier) * base;
  return std::abs(frequency - expected) <= kLatticeTolerance * std::max(1.0, expected);
}

}  // namespace

DirichletSeries DirichletSeries::create(std::vector<double> frequencies,
                                        std::vector<Complex> coefficients,
                                        std::optional<double> rational_base,
                                        std::vector<std::int64_t> multipliers) {
  if (rational_base) {
    if (!(std::isfinite(*rational_base) && *rational_base > 0.0)) {
      throw InvalidSeries("rational_base: must be a positive finite real");
    }
    for (const auto m : multipliers) {
      if (m <= 0) throw InvalidSeries("multipliers: entries must be positive integers");
    }
    if (frequencies.empty()) {
      for (const auto m : multipliers) frequencies.push_back(static_cast<double>(m) * *rational_base);
    } else if (multipliers.empty()) {
      for (const double lambda : frequencies) {
        const auto m = static_cast<std::int64_t>(std::llround(lambda / *rational_base));
        if (m <= 0 || !same_lattice_point(lambda, m, *rational_base)) {
          std::ostringstream msg;
          msg << "frequencies: " << lambda << " is not an integer multiple of rational_base "
              << *rational_base;
          throw InvalidSeries(msg.str());
        }
        multipliers.push_back(m);
      }
    } else {
      if (multipliers.size() != frequencies.size()) {
        throw InvalidSeries("multipliers: length differs from frequencies");
      }
      for (std::size_t n = 0; n < frequencies.size(); ++n) {
        if (!same_lattice_point(frequencies[n], multipliers[n], *rational_base)) {
          throw InvalidSeries("multipliers: entry " + std::to_string(n) +
                              " inconsistent with frequencies and rational_base");
        }
      }
    }
  } else if (!multipliers.empty()) {
    throw InvalidSeries("multipliers: given without rational_base");
  }

  if (frequencies.size() != coefficients.size()) {
    throw InvalidSeries("coefficients: length differs from frequencies");
  }
  for (std::size_t n = 0; n < frequencies.size(); ++n) {
    if (!std::isfinite(frequencies[n]) || frequencies[n] <= 0.0) {
      throw InvalidSeries("frequencies: entry " + std::to_string(n) + " must be positive and finite");
    }
    if (n > 0 && !(frequencies[n] > frequencies[n - 1])) {
      throw InvalidSeries("frequencies: must be strictly increasing (entry " + std::to_string(n) + ")");
    }
    if (!std::isfinite(coefficients[n].real()) || !std::isfinite(coefficients[n].imag())) {
      throw InvalidSeries("coefficients: entry " + std::to_string(n) + " is not finite");
    }
  }

  DirichletSeries out;
  std::vector<double> kept_freq;
  std::vector<Complex> kept_coef;
  for (std::size_t n = 0; n < frequencies.size(); ++n) {
    if (coefficients[n] == Complex(0.0)) continue;
    kept_freq.push_back(frequencies[n]);
    kept_coef.push_back(coefficients[n]);
    if (rational_base) out.multipliers_.push_back(multipliers[n]);
  }
  if (kept_freq.empty()) {
    throw InvalidSeries("coefficients: series is constant (no nonzero coefficient)");
  }
  out.frequencies_ = Eigen::Map<VectorXd>(kept_freq.data(), static_cast<Eigen::Index>(kept_freq.size()));
  out.coefficients_ =
      Eigen::Map<VectorXcd>(kept_coef.data(), static_cast<Eigen::Index>(kept_coef.size()));
  out.rational_base_ = rational_base;
  return out;
}

DirichletSeries DirichletSeries::conjugate() const {
  DirichletSeries out = *this;
  out.coefficients_ = coefficients_.conjugate();
  return out;
}

Complex log_derivative(const DirichletSeries& f, Complex s, double relative_floor) {
  const Complex value = evaluate(f, s);
  if (std::abs(value) < relative_floor * term_scale(f, s.real())) {
    std::ostringstream msg;
    msg << "log_derivative: |f(s)| = " << std::abs(value) << " at s = " << s
        << " is below the floor; s is on or near the divisor";
    throw NearZeroDenominator(msg.str());
  }
  return derivative(f, s) / value;
}

double abscissa(const DirichletSeries& f) {
  double best = -std::numeric_limits<double>::infinity();
  double partial = 0.0;
  for (Eigen::Index n = 0; n < f.size(); ++n) {
    partial += std::abs(f.coefficients()[n]);
    best = std::max(best, std::log(partial) / f.frequencies()[n]);
  }
  return best;
}

Complex log_coefficient(const MultiIndex& k, const VectorXcd& coefficients) {
  const int total = order(k);
  if (total < 1) throw InvalidArgument("log_coefficient: multi-index of order zero");
  // multinomial(|k|; k_1, ..., k_r) built as a running product of ratios
  double multinomial = 1.0;
  int running = 0;
  Complex monomial(1.0);
  for (const auto& [index, count] : k) {
    for (int i = 1; i <= count; ++i) {
      ++running;
      multinomial = multinomial * running / i;
      monomial *= coefficients[index];
    }
  }
  const double sign = (total % 2 == 0) ? 1.0 : -1.0;
  return sign / total * multinomial * monomial;
}

LogExpansion log_expansion(const DirichletSeries& f, double cutoff, std::size_t entry_budget) {
  if (!(cutoff > 0.0)) throw InvalidArgument("log_expansion: cutoff must be positive");
  LogExpansion out;
  out.cutoff = cutoff;
  const int n_freq = static_cast<int>(f.size());
  const double limit = cutoff * (1.0 + kMergeTolerance);
  const auto base = f.rational_base();
  const auto& lambda = f.frequencies();

  MultiIndex current;
  // depth-first over frequencies in descending order
  auto recurse = [&](auto&& self, int j, double used, std::int64_t lattice) -> void {
    if (j < 0) {
      if (current.empty()) return;
      if (out.entries.size() >= entry_budget) {
        throw ExplosionGuard("log_expansion: entry budget " + std::to_string(entry_budget) +
                             " exceeded; cutoff " + std::to_string(cutoff) +
                             " is too large for this frequency set");
      }
      LogExpansionEntry e;
      e.index.assign(current.rbegin(), current.rend());
      e.b = log_coefficient(e.index, f.coefficients());
      double freq = 0.0;
      for (const auto& [index, count] : e.index) freq += count * lambda[index];
      e.frequency = freq;
      if (base) e.lattice = lattice;
      out.entries.push_back(std::move(e));
      return;
    }
    self(self, j - 1, used, lattice);
    for (int count = 1;; ++count) {
      const double next = used + count * lambda[j];
      if (next > limit) break;
      current.emplace_back(j, count);
      const std::int64_t next_lattice = base ? lattice + count * f.multipliers()[j] : 0;
      self(self, j - 1, next, next_lattice);
      current.pop_back();
    }
  };
  recurse(recurse, n_freq - 1, 0.0, 0);
  return out;
}

Complex log_expansion_sum(const LogExpansion& expansion, Complex s) {
  CompensatedSum<Complex> acc;
  for (const auto& e : expansion.entries) acc += e.b * std::exp(-e.frequency * s);
  return acc.value();
}

std::vector<FrequencyAtom> atom_measure(const LogExpansion& expansion, bool exact_lattice,
                                        double lattice_base) {
  std::vector<const LogExpansionEntry*> sorted;
  sorted.reserve(expansion.entries.size());
  for (const auto& e : expansion.entries) {
    if (exact_lattice && !e.lattice) {
      throw InvalidArgument("atom_measure: exact merge requested without lattice data");
    }
    sorted.push_back(&e);
  }
  // canonical order: by lattice point (or frequency), then by multi-index
  std::sort(sorted.begin(), sorted.end(), [&](const auto* a, const auto* b) {
    if (exact_lattice) {
      if (*a->lattice != *b->lattice) return *a->lattice < *b->lattice;
    } else if (a->frequency != b->frequency) {
      return a->frequency < b->frequency;
    }
    return a->index < b->index;
  });

  std::vector<FrequencyAtom> atoms;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i + 1;
    if (exact_lattice) {
      while (j < sorted.size() && *sorted[j]->lattice == *sorted[i]->lattice) ++j;
    } else {
      while (j < sorted.size() && sorted[j]->frequency - sorted[j - 1]->frequency <
                                      kMergeTolerance * std::max(1.0, sorted[j - 1]->frequency)) {
        ++j;
      }
    }
    // members of a float-merged class can interleave with respect to the
    // multi-index order, so re-sort the class before summing
    std::vector<const LogExpansionEntry*> cls(sorted.begin() + static_cast<std::ptrdiff_t>(i),
                                              sorted.begin() + static_cast<std::ptrdiff_t>(j));
    std::sort(cls.begin(), cls.end(), [](const auto* a, const auto* b) { return a->index < b->index; });
    CompensatedSum<Complex> weight;
    double freq = std::numeric_limits<double>::infinity();
    for (const auto* e : cls) {
      weight += e->frequency * e->b;
      freq = std::min(freq, e->frequency);
    }
    FrequencyAtom atom;
    atom.frequency = exact_lattice ? static_cast<double>(*cls.front()->lattice) * lattice_base : freq;
    atom.weight = weight.value();
    atom.contributing_count = static_cast<int>(cls.size());
    atoms.push_back(atom);
    i = j;
  }
  return atoms;
}

std::vector<FrequencyAtom> atom_measure(const DirichletSeries& f, double cutoff,
                                        std::size_t entry_budget) {
  const auto expansion = log_expansion(f, cutoff, entry_budget);
  const auto base = f.rational_base();
  return atom_measure(expansion, base.has_value(), base.value_or(0.0));
}

FunctionalEquationInfo detect_functional_equation(const DirichletSeries& f, double tolerance) {
  FunctionalEquationInfo info;
  const Eigen::Index n = f.size();
  info.mu = f.frequencies()[n - 1] / 2.0;

  // extended lists with lambda_0 = 0 and a_0 = 1
  std::vector<double> lambda(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<Complex> a(static_cast<std::size_t>(n) + 1, Complex(1.0));
  for (Eigen::Index i = 0; i < n; ++i) {
    lambda[static_cast<std::size_t>(i) + 1] = f.frequencies()[i];
    a[static_cast<std::size_t>(i) + 1] = f.coefficients()[i];
  }
  const auto N = static_cast<std::size_t>(n);
  const double two_mu = lambda[N];

  auto close = [&](Complex x, Complex y) {
    return std::abs(x - y) <= tolerance * std::max({1.0, std::abs(x), std::abs(y)});
  };

  for (std::size_t i = 0; i <= N; ++i) {
    if (std::abs(lambda[i] + lambda[N - i] - two_mu) > tolerance * std::max(1.0, two_mu)) {
      info.axis_note = "frequencies {0, lambda_1, ..., lambda_N} are not symmetric about mu";
      return info;
    }
  }
  for (const int c : {1, -1}) {
    if (c == -1 && N % 2 == 0) break;  // the middle coefficient forces c = +1
    bool ok = true;
    for (std::size_t i = 0; i <= N && ok; ++i) ok = close(a[N - i], static_cast<double>(c) * a[i]);
    if (ok) {
      info.has_fe = true;
      info.c = c;
      std::ostringstream note;
      note << "exp(mu s) f(s) is " << (c == 1 ? "symmetric" : "antisymmetric")
           << " under s -> -s with mu = " << info.mu;
      info.axis_note = note.str();
      return info;
    }
  }
  info.axis_note = "coefficients are not (anti)palindromic";
  return info;
}

bool is_real_analytic(const DirichletSeries& f) {
  for (Eigen::Index n = 0; n < f.size(); ++n) {
    if (f.coefficients()[n].imag() != 0.0) return false;
  }
  return true;
}

}  // namespace pnf
