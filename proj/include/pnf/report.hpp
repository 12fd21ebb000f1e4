#pragma once

#include <map>
#include <string>

#include "pnf/common.hpp"

namespace pnf {

struct VerificationReport {
  std::string scenario;
  Complex lhs;
  Complex rhs;
  double abs_err = 0.0;
  double rel_err = 0.0;
  double tolerance = 1e-6;
  bool pass = false;
  std::map<std::string, double> params;
  std::map<std::string, std::string> notes;
};

/// Fills abs_err = |lhs - rhs|, rel_err = abs_err / max(|lhs|, |rhs|, 1e-300)
/// and pass = rel_err <= tolerance.
inline VerificationReport make_report(std::string scenario, Complex lhs, Complex rhs, double tolerance) {
  VerificationReport r;
  r.scenario = std::move(scenario);
  r.lhs = lhs;
  r.rhs = rhs;
  r.tolerance = tolerance;
  r.abs_err = std::abs(lhs - rhs);
  r.rel_err = r.abs_err / std::max({std::abs(lhs), std::abs(rhs), 1e-300});
  r.pass = r.rel_err <= tolerance;
  return r;
}

}  // namespace pnf
