#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>

#include "json.hpp"
#include "pnf/io.hpp"
#include "pnf/transforms.hpp"

using namespace pnf;
namespace fs = std::filesystem;

namespace {

fs::path scratch() {
  static const fs::path dir = [] {
    auto p = fs::temp_directory_path() / "pnf_cli_tests";
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const auto out = scratch() / "stdout.txt";
  const std::string cmd = std::string(PNF_CLI_PATH) + " " + args + " > " + out.string() + " 2> " +
                          (scratch() / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = io::read_file(out.string());
  return r;
}

std::string write(const std::string& name, const std::string& contents) {
  const auto p = scratch() / name;
  io::write_file(p.string(), contents);
  return p.string();
}

const std::string kZeros = std::string(PNF_DATA_DIR) + "/zeta_zeros_10k.txt";

}  // namespace

TEST_CASE("cli: newton identities") {
  const auto r = run("verify-newton --poly 1,-3,2 --mmax 8");
  CHECK(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  REQUIRE(doc.size() == 8);
  for (const auto& item : doc) CHECK(item["pass"] == true);
  CHECK(doc[3]["lhs"]["re"] == 17.0);
}

TEST_CASE("cli: usage errors") {
  CHECK(run("").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("verify-newton --mmax 3").code == 2);
  CHECK(run("verify-newton --poly 2,1").code == 2);
  CHECK(run("verify-newton --poly 1,-3,2 --tol 5").code == 2);
  CHECK(run("verify-poisson --lambda -1").code == 2);
  CHECK(run("verify-poisson --test cosine:width=1").code == 2);
  CHECK(run("detect-fe --series /nonexistent/f.json").code == 2);
  CHECK(run("--help").code == 0);
}

TEST_CASE("cli: data errors") {
  const auto bad = write("bad.json", "{\"frequencies\": [1], ");
  CHECK(run("detect-fe --series " + bad).code == 3);
  const auto unordered = write("unordered.txt", "21.0\n14.1\n");
  CHECK(run("verify-explicit --zeros " + unordered + " --primes 1000").code == 3);
  const auto garbage = write("garbage.txt", "14.1\nabc\n");
  CHECK(run("verify-explicit --zeros " + garbage + " --primes 1000").code == 3);
}

TEST_CASE("cli: functional equation detection") {
  const auto pal = write("pal.json", R"({"frequencies": [1, 2], "coefficients": [[1, 0], [1, 0]]})");
  const auto r = run("detect-fe --series " + pal);
  CHECK(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["has_fe"] == true);
  CHECK(doc["mu"] == 1.0);
  CHECK(doc["c"] == 1);
}

TEST_CASE("cli: passing and failing checks") {
  CHECK(run("verify-poisson --lambda 1 --height 500 --test gaussian:center=0,width=1").code == 0);
  const auto f = write("two.json", R"({"frequencies": [1, 1.4142135623730951], "coefficients": [0.5, 0.25]})");
  CHECK(run("verify-pn --series " + f + " --height 200 --test bump:center=2.75,width=2.25").code == 0);
  CHECK(run("verify-pn --series " + f + " --height 5 --tol 1e-12 --test bump:center=2.75,width=2.25").code == 1);
  CHECK(run("verify-pn --series " + f + " --height 5 --test gaussian:center=0,width=1").code == 2);
}

TEST_CASE("cli: explicit formula") {
  const auto out = (scratch() / "explicit.json").string();
  const auto r = run("verify-explicit --zeros " + kZeros +
                     " --primes 1000000 --count 100 --test gaussian:center=0,width=1 --out " + out);
  CHECK(r.code == 0);
  const auto doc = nlohmann::json::parse(io::read_file(out));
  REQUIRE(doc.size() == 1);
  CHECK(doc[0]["params"].contains("residual"));
  CHECK(doc[0]["pass"] == true);
}

TEST_CASE("cli: selberg") {
  const auto phi = TestFunction::bump(2.0, 1.0);
  const auto data = selberg_synthetic_fixture({3.1, 4.7, 9.2}, {1.3, 1.9}, phi);
  nlohmann::json doc;
  doc["genus"] = data.genus;
  doc["eigen_gammas"] = {3.1, 4.7, 9.2};
  doc["lengths"] = data.lengths;
  doc["length_cutoff"] = *data.length_cutoff;
  const auto path = write("selberg.json", doc.dump());
  CHECK(run("verify-selberg --data " + path + " --test bump:center=2,width=1").code == 0);
  CHECK(run("verify-selberg --data " + path + " --test bump:center=3,width=1.5").code == 3);
}

TEST_CASE("cli: analyze dumps round-trip") {
  const auto f = write("analyze.json", R"({"frequencies": [1, 1.4142135623730951], "coefficients": [0.5, 0.25]})");
  const auto csv = (scratch() / "divisor.csv").string();
  const auto atoms = (scratch() / "atoms.csv").string();
  const auto r = run("analyze --series " + f + " --height 30 --cutoff 4 --divisor-csv " + csv + " --atoms-csv " + atoms);
  CHECK(r.code == 0);
  const auto from_cli = io::parse_divisor_csv(io::read_file(csv));
  const auto direct = locate_divisor(io::load_series(f), 30.0);
  REQUIRE(from_cli.points.size() == direct.points.size());
  for (std::size_t i = 0; i < direct.points.size(); ++i) {
    CHECK(from_cli.points[i].rho == direct.points[i].rho);
    CHECK(from_cli.points[i].multiplicity == direct.points[i].multiplicity);
  }
  CHECK(io::read_file(atoms).rfind("frequency,weight_re,weight_im\n", 0) == 0);
  const auto summary = nlohmann::json::parse(r.out);
  CHECK(summary["divisor_degree"] == direct.degree());
}
