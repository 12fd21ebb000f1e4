#include "pnf/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace pnf::io {

namespace {

using nlohmann::json;

json parse_json(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string(what) + ": " + e.what());
  }
}

double number(const json& v, const std::string& field) {
  if (!v.is_number()) throw FormatError("field '" + field + "' must be a number");
  return v.get<double>();
}

Complex complex_value(const json& v, const std::string& field) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2) return {number(v[0], field), number(v[1], field)};
  throw FormatError("field '" + field + "' must be a number or a [re, im] pair");
}

const json& require(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
  return obj.at(key);
}

const json& require_array(const json& obj, const char* key) {
  const auto& v = require(obj, key);
  if (!v.is_array()) throw FormatError(std::string("field '") + key + "' must be an array");
  return v;
}

json complex_json(Complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) out.push_back(cell);
  return out;
}

double parse_double(const std::string& s, std::size_t line) {
  double x = 0.0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  while (first < last && *first == ' ') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, x);
  if (ec != std::errc() || ptr != last) {
    throw FormatError("line " + std::to_string(line) + ": bad number '" + s + "'");
  }
  return x;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return {buf, ptr};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path);
  out << contents;
}

DirichletSeries parse_series_json(const std::string& text) {
  const auto doc = parse_json(text, "series");
  std::vector<double> freqs;
  std::vector<Complex> coeffs;
  std::optional<double> base;
  std::vector<std::int64_t> mult;
  if (doc.contains("frequencies")) {
    for (const auto& v : require_array(doc, "frequencies")) freqs.push_back(number(v, "frequencies"));
  }
  for (const auto& v : require_array(doc, "coefficients")) coeffs.push_back(complex_value(v, "coefficients"));
  if (doc.contains("rational_base") && !doc.at("rational_base").is_null()) {
    base = number(doc.at("rational_base"), "rational_base");
  }
  if (doc.contains("multipliers")) {
    for (const auto& v : require_array(doc, "multipliers")) {
      if (!v.is_number_integer()) throw FormatError("field 'multipliers' must hold integers");
      mult.push_back(v.get<std::int64_t>());
    }
  }
  return DirichletSeries::create(std::move(freqs), std::move(coeffs), base, std::move(mult));
}

DirichletSeries load_series(const std::string& path) { return parse_series_json(read_file(path)); }

std::string series_to_json(const DirichletSeries& f) {
  json doc;
  doc["frequencies"] = json::array();
  doc["coefficients"] = json::array();
  for (Eigen::Index n = 0; n < f.size(); ++n) {
    doc["frequencies"].push_back(f.frequencies()[n]);
    doc["coefficients"].push_back({f.coefficients()[n].real(), f.coefficients()[n].imag()});
  }
  if (f.rational_base()) {
    doc["rational_base"] = *f.rational_base();
    doc["multipliers"] = f.multipliers();
  }
  return doc.dump(2);
}

std::string divisor_to_json(const Divisor& d) {
  json doc;
  doc["window"] = {{"re_min", d.window.re_min},
                   {"re_max", d.window.re_max},
                   {"im_min", d.window.im_min},
                   {"im_max", d.window.im_max}};
  doc["residual_bound"] = d.residual_bound;
  doc["points"] = json::array();
  for (const auto& p : d.points) {
    doc["points"].push_back({{"re", p.rho.real()}, {"im", p.rho.imag()}, {"mult", p.multiplicity}});
  }
  return doc.dump(2);
}

Divisor parse_divisor_json(const std::string& text) {
  const auto doc = parse_json(text, "divisor");
  Divisor d;
  if (doc.contains("window")) {
    const auto& w = doc.at("window");
    d.window.re_min = number(require(w, "re_min"), "window.re_min");
    d.window.re_max = number(require(w, "re_max"), "window.re_max");
    d.window.im_min = number(require(w, "im_min"), "window.im_min");
    d.window.im_max = number(require(w, "im_max"), "window.im_max");
  }
  if (doc.contains("residual_bound")) d.residual_bound = number(doc.at("residual_bound"), "residual_bound");
  for (const auto& p : require_array(doc, "points")) {
    DivisorPoint point;
    point.rho = {number(require(p, "re"), "points.re"), number(require(p, "im"), "points.im")};
    if (p.contains("mult")) {
      if (!p.at("mult").is_number_integer()) throw FormatError("field 'points.mult' must be an integer");
      point.multiplicity = p.at("mult").get<int>();
    }
    d.points.push_back(point);
  }
  return d;
}

std::string divisor_to_csv(const Divisor& d) {
  std::string out = "re,im,mult\n";
  for (const auto& p : d.points) {
    out += format_double(p.rho.real()) + "," + format_double(p.rho.imag()) + "," +
           std::to_string(p.multiplicity) + "\n";
  }
  return out;
}

Divisor parse_divisor_csv(const std::string& text) {
  Divisor d;
  std::istringstream in(text);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || (n == 1 && line.rfind("re", 0) == 0)) continue;
    const auto cells = split(line, ',');
    if (cells.size() != 3) throw FormatError("line " + std::to_string(n) + ": expected re,im,mult");
    DivisorPoint p;
    p.rho = {parse_double(cells[0], n), parse_double(cells[1], n)};
    p.multiplicity = static_cast<int>(parse_double(cells[2], n));
    d.points.push_back(p);
  }
  return d;
}

std::string atoms_to_csv(const std::vector<FrequencyAtom>& atoms) {
  std::string out = "frequency,weight_re,weight_im\n";
  for (const auto& a : atoms) {
    out += format_double(a.frequency) + "," + format_double(a.weight.real()) + "," +
           format_double(a.weight.imag()) + "\n";
  }
  return out;
}

SelbergData parse_selberg_json(const std::string& text) {
  const auto doc = parse_json(text, "selberg");
  SelbergData data;
  data.genus = number(require(doc, "genus"), "genus");
  for (const auto& v : require_array(doc, "eigen_gammas")) data.eigen_gammas.push_back(complex_value(v, "eigen_gammas"));
  for (const auto& v : require_array(doc, "lengths")) {
    const double tau = number(v, "lengths");
    if (!(tau > 0.0)) throw FormatError("field 'lengths' must hold positive values");
    data.lengths.push_back(tau);
  }
  if (doc.contains("length_cutoff") && !doc.at("length_cutoff").is_null()) {
    data.length_cutoff = number(doc.at("length_cutoff"), "length_cutoff");
  }
  return data;
}

SelbergData load_selberg(const std::string& path) { return parse_selberg_json(read_file(path)); }

std::string reports_to_json(const std::vector<VerificationReport>& reports) {
  json arr = json::array();
  for (const auto& r : reports) {
    json item;
    item["scenario"] = r.scenario;
    item["lhs"] = complex_json(r.lhs);
    item["rhs"] = complex_json(r.rhs);
    item["abs_err"] = r.abs_err;
    item["rel_err"] = r.rel_err;
    item["tolerance"] = r.tolerance;
    item["pass"] = r.pass;
    item["params"] = json(r.params);
    item["notes"] = json(r.notes);
    arr.push_back(std::move(item));
  }
  return arr.dump(2);
}

}  // namespace pnf::io
