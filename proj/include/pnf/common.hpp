#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <cstdlib>
#include <functional>
#include <future>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

#include <Eigen/Core>

namespace pnf {

using Complex = std::complex<double>;
using VectorXd = Eigen::VectorXd;
using VectorXcd = Eigen::VectorXcd;

// Error taxonomy. Every failure a caller may want to branch on has its own type.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define PNF_DEFINE_ERROR(Name)        \
  struct Name : Error {               \
    using Error::Error;               \
  }

PNF_DEFINE_ERROR(InvalidSeries);
PNF_DEFINE_ERROR(NearZeroDenominator);
PNF_DEFINE_ERROR(ExplosionGuard);
PNF_DEFINE_ERROR(ContourTooClose);
PNF_DEFINE_ERROR(NonIntegerWinding);
PNF_DEFINE_ERROR(RefinementStall);
PNF_DEFINE_ERROR(TailTooLarge);
PNF_DEFINE_ERROR(QuadratureStall);
PNF_DEFINE_ERROR(CoverageGap);
PNF_DEFINE_ERROR(FormatError);
PNF_DEFINE_ERROR(OrderError);
PNF_DEFINE_ERROR(PoleError);
PNF_DEFINE_ERROR(RootSolveFailure);
PNF_DEFINE_ERROR(InvalidArgument);

#undef PNF_DEFINE_ERROR

/// Neumaier-compensated accumulator. Works for real and complex scalars.
template <typename T>
class CompensatedSum {
 public:
  CompensatedSum& operator+=(const T& x) {
    add(x);
    return *this;
  }

  void add(const T& x) {
    if constexpr (std::is_arithmetic_v<T>) {
      add_real(sum_, comp_, x);
    } else {
      auto re = sum_.real(), re_c = comp_.real();
      auto im = sum_.imag(), im_c = comp_.imag();
      add_real(re, re_c, x.real());
      add_real(im, im_c, x.imag());
      sum_ = T(re, im);
      comp_ = T(re_c, im_c);
    }
  }

  [[nodiscard]] T value() const { return sum_ + comp_; }

 private:
  template <typename R>
  static void add_real(R& sum, R& comp, R x) {
    const R t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }

  T sum_{};
  T comp_{};
};

/// Worker cap. Honors PNF_THREADS when set to a positive integer.
inline unsigned thread_budget() {
  if (const char* env = std::getenv("PNF_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return static_cast<unsigned>(n);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

/// Evaluates fn(i) for i in [0, n) into an index-ordered buffer. The result
/// does not depend on the worker count, so reductions over it stay
/// deterministic.
template <typename Fn>
auto parallel_map(std::size_t n, Fn&& fn) -> std::vector<std::invoke_result_t<Fn&, std::size_t>> {
  using R = std::invoke_result_t<Fn&, std::size_t>;
  std::vector<R> out(n);
  const std::size_t workers = std::min<std::size_t>(thread_budget(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::future<void>> jobs;
  jobs.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < n; i += workers) out[i] = fn(i);
    }));
  }
  for (auto& j : jobs) j.get();
  return out;
}

namespace constants {
inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr double euler_gamma = std::numbers::egamma;
inline constexpr double log2 = std::numbers::ln2;
inline constexpr double log_pi = 1.1447298858494001741434273513530587116472948129153L;
inline constexpr double log_two_pi = 1.8378770664093454835606594728112352797227949472756L;
inline constexpr double sqrt_two_pi = 2.5066282746310005024157652848110452530069867406099L;
}  // namespace constants

}  // namespace pnf
