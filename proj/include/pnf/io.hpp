#pragma once

// File formats: series and Selberg specs and divisors as JSON, divisor and
// atom dumps as CSV, reports as a JSON array.

#include <string>
#include <vector>

#include "pnf/divisor.hpp"
#include "pnf/number_theory.hpp"
#include "pnf/report.hpp"
#include "pnf/series.hpp"

namespace pnf::io {

/// {"frequencies": [...], "coefficients": [[re, im] or re, ...],
///  "rational_base": optional, "multipliers": optional}.
DirichletSeries parse_series_json(const std::string& text);
DirichletSeries load_series(const std::string& path);
std::string series_to_json(const DirichletSeries& f);

/// {"window": {"re_min", "re_max", "im_min", "im_max"}, "residual_bound",
///  "points": [{"re", "im", "mult"}]}.
std::string divisor_to_json(const Divisor& d);
Divisor parse_divisor_json(const std::string& text);

/// Header "re,im,mult"; doubles in shortest round-trip form.
std::string divisor_to_csv(const Divisor& d);
Divisor parse_divisor_csv(const std::string& text);

/// Header "frequency,weight_re,weight_im".
std::string atoms_to_csv(const std::vector<FrequencyAtom>& atoms);

/// {"genus": h, "eigen_gammas": [g or [re, im], ...], "lengths": [...],
///  "length_cutoff": optional}.
SelbergData parse_selberg_json(const std::string& text);
SelbergData load_selberg(const std::string& path);

std::string reports_to_json(const std::vector<VerificationReport>& reports);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

/// Shortest decimal that parses back to the same double.
std::string format_double(double x);

}  // namespace pnf::io
