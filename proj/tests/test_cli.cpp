#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "slinv/io.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {
constexpr double kPi = 3.14159265358979323846;

struct Sandbox {
  fs::path dir;
  explicit Sandbox(const std::string& name) : dir(fs::temp_directory_path() / ("slinv-cli-" + name)) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  fs::path write(const std::string& file, const std::string& text) const {
    std::ofstream(dir / file) << text;
    return dir / file;
  }
  int run(const std::string& args, const std::string& env = "") const {
    const std::string cmd = "cd '" + dir.string() + "' && " + env + " '" SLINV_BINARY "' " + args +
                            " > stdout.txt 2> stderr.txt";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  std::string read(const std::string& file) const {
    std::ifstream in(dir / file);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
};

std::vector<std::vector<double>> csv_rows(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::getline(is, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(is, line)) {
    std::vector<double> row;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}
}  // namespace

TEST_CASE("forward on the zero potential", "[cli]") {
  Sandbox sb("forward-zero");
  sb.write("c.json", R"({"potential":"zero","forward":{"modes":10}})");
  REQUIRE(sb.run("forward --config c.json") == 0);
  const auto rows = csv_rows(sb.read("eigenvalues.csv"));
  REQUIRE(rows.size() == 10);
  for (const auto& r : rows) CHECK_THAT(r[1], WithinRel(r[0] * r[0] * kPi * kPi, 1e-8));
}

TEST_CASE("forward residuals decay for the gaussian bump", "[cli]") {
  Sandbox sb("forward-gauss");
  sb.write("c.json", R"({"potential":"gaussian-bump"})");
  REQUIRE(sb.run("forward --config c.json") == 0);
  const auto rows = csv_rows(sb.read("eigenvalues.csv"));
  REQUIRE(rows.size() == 10);
  for (const auto& r : rows) CHECK(std::isfinite(r[2]));
  CHECK(std::abs(rows.back()[2]) < std::abs(rows.front()[2]));
}

TEST_CASE("malformed and invalid configurations exit with 2", "[cli][errors]") {
  Sandbox sb("bad");
  sb.write("bad.json", "{\"potential\": ");
  CHECK(sb.run("forward --config bad.json") == 2);
  CHECK(sb.read("stderr.txt").find("bad.json") != std::string::npos);
  CHECK(sb.run("forward --config missing.json") == 2);
  CHECK(sb.run("forward") == 2);
  CHECK(sb.run("frobnicate") == 2);
  CHECK(sb.run("") == 2);
  CHECK(sb.run("demo no-such-example") == 2);
  sb.write("n0.json", R"({"basis":{"family":"cosine-even","n":0}})");
  CHECK(sb.run("optimize-points --config n0.json") == 2);
  sb.write("ok.json", R"({"basis":{"family":"cosine-even","n":3}})");
  CHECK(sb.run("optimize-points --config ok.json --budget 0") == 2);
  CHECK(sb.run("invert --config ok.json --max-iters 0 --samples none.csv") == 2);
  CHECK(sb.run("--help") == 0);
}

TEST_CASE("numerical failures exit with 1", "[cli][errors]") {
  Sandbox sb("numeric");
  sb.write("c.json", R"json({"potential":{"expression":"1/(x-x)"}})json");
  CHECK(sb.run("forward --config c.json") == 1);
}

TEST_CASE("sample gives closed-form values and is deterministic", "[cli]") {
  Sandbox sb("sample");
  sb.write("c.json", R"({"potential":"zero","basis":{"family":"cosine-even","n":3},"points":"equal"})");
  REQUIRE(sb.run("sample --config c.json") == 0);
  const std::string first = sb.read("samples.csv");
  const auto rows = csv_rows(first);
  REQUIRE(rows.size() == 3);
  CHECK_THAT(rows[0][2], WithinAbs(std::sin(kPi / 4) / kPi, 1e-9));
  CHECK_THAT(rows[1][2], WithinAbs(1 / kPi, 1e-9));
  REQUIRE(sb.run("sample --config c.json") == 0);
  CHECK(sb.read("samples.csv") == first);

  sb.write("n.json", R"({"potential":"gaussian-bump","points":[0.2,0.5,0.8],"noise":{"sigma":0.001,"seed":5}})");
  REQUIRE(sb.run("sample --config n.json") == 0);
  const std::string noisy = sb.read("samples.csv");
  REQUIRE(sb.run("sample --config n.json") == 0);
  CHECK(sb.read("samples.csv") == noisy);
  REQUIRE(sb.run("sample --config n.json --seed 6") == 0);
  CHECK(sb.read("samples.csv") != noisy);
}

TEST_CASE("sample then invert recovers a representable potential", "[cli]") {
  Sandbox sb("roundtrip");
  sb.write("c.json", R"({
    "potential": {"basis": {"family": "legendre", "n": 4}, "coefficients": [1.0, -0.5, 0.8, 0.3]},
    "basis": {"family": "legendre", "n": 4},
    "points": "optimized",
    "samples": "samples.csv"
  })");
  REQUIRE(sb.run("sample --config c.json") == 0);
  REQUIRE(sb.run("invert --config c.json") == 0);
  const json report = json::parse(sb.read("report.json"));
  CHECK(report["converged"] == true);
  const std::vector<double> expect = {1.0, -0.5, 0.8, 0.3};
  for (std::size_t l = 0; l < 4; ++l) CHECK_THAT(report["coefficients"][l].get<double>(), WithinAbs(expect[l], 1e-4));
  // Every artefact is re-readable.
  const auto back = slinv::report_from_json(report);
  CHECK(back.recovered.coefficients().size() == 4);
  CHECK(slinv::read_samples_csv(sb.dir / "samples.csv").size() == 4);
  const auto recon = csv_rows(sb.read("reconstruction.csv"));
  REQUIRE(recon.size() == 512);
  CHECK(recon[0].size() == 3);
  const std::string svg = sb.read("reconstruction.svg");
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("class=\"sample\"") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  // Repeated runs give identical JSON.
  const std::string first = sb.read("report.json");
  REQUIRE(sb.run("invert --config c.json") == 0);
  CHECK(sb.read("report.json") == first);
}

TEST_CASE("invert flags and dimension errors", "[cli]") {
  Sandbox sb("invert-flags");
  sb.write("s.json", R"({"potential":"sin4pi","points":[0.2,0.4,0.6,0.9]})");
  REQUIRE(sb.run("sample --config s.json") == 0);
  sb.write("i.json", R"({"basis":{"family":"legendre","n":4}})");
  REQUIRE(sb.run("invert --config i.json --samples samples.csv --max-iters 1") == 0);
  CHECK(json::parse(sb.read("report.json"))["converged"] == false);
  sb.write("i3.json", R"({"basis":{"family":"legendre","n":3}})");
  CHECK(sb.run("invert --config i3.json --samples samples.csv") == 2);
  CHECK(sb.run("invert --config i.json") == 2);
}

TEST_CASE("optimize-points compares with the baseline", "[cli]") {
  Sandbox sb("opt");
  sb.write("c.json", R"({"basis":{"family":"cosine-even","n":3},"mode":1})");
  REQUIRE(sb.run("optimize-points --config c.json") == 0);
  const json j = json::parse(sb.read("points.json"));
  CHECK(j["condition_number"].get<double>() <= j["baseline"]["condition_number"].get<double>());
  CHECK(j["points"].size() == 3);
  REQUIRE(sb.run("optimize-points --config c.json --budget 1") == 0);
  const json b = json::parse(sb.read("points.json"));
  CHECK(b["points"] == b["baseline"]["points"]);
  REQUIRE(sb.run("optimize-points --config c.json --seed 3") == 0);
  const std::string first = sb.read("points.json");
  REQUIRE(sb.run("optimize-points --config c.json --seed 3") == 0);
  CHECK(sb.read("points.json") == first);
}

TEST_CASE("select-basis ranks and merges", "[cli]") {
  Sandbox sb("select");
  sb.write("s.json", R"({"potential":"sin4pi","points":[0.2,0.4,0.6,0.9]})");
  REQUIRE(sb.run("sample --config s.json") == 0);
  sb.write("leg.json", R"({"basis":{"family":"legendre","n":4},"samples":"samples.csv"})");
  sb.write("trig.json", R"({"basis":{"family":"trig-full","n":4},"samples":"samples.csv"})");
  REQUIRE(sb.run("invert --config leg.json --out leg") == 0);  // created on demand
  CHECK(fs::exists(sb.dir / "leg" / "report.json"));
  REQUIRE(sb.run("invert --config trig.json --out trig") == 0);

  REQUIRE(sb.run("select-basis leg/report.json") == 0);
  const json one = json::parse(sb.read("selection.json"));
  CHECK(one["ranking"].size() == 1);
  CHECK(one["ranking"][0]["index"] == 0);

  REQUIRE(sb.run("select-basis leg/report.json trig/report.json --m 3") == 0);
  const json two = json::parse(sb.read("selection.json"));
  CHECK(two["ranking"].size() == 2);
  CHECK(two["merged_basis"]["functions"].size() == 3);
  CHECK(two["merged_basis"]["functions"][0]["kind"] == "constant");
  CHECK(sb.run("select-basis") == 2);
  CHECK(sb.run("select-basis leg/report.json --m 9") == 2);
}

TEST_CASE("output directory precedence", "[cli]") {
  Sandbox sb("outdir");
  fs::create_directories(sb.dir / "env");
  fs::create_directories(sb.dir / "flag");
  fs::create_directories(sb.dir / "cfg");
  sb.write("c.json", R"({"potential":"zero","forward":{"modes":2},"out":"cfg"})");
  REQUIRE(sb.run("forward --config c.json") == 0);
  CHECK(fs::exists(sb.dir / "cfg" / "eigenvalues.csv"));
  REQUIRE(sb.run("forward --config c.json", "SLINV_OUT_DIR=env") == 0);
  CHECK(fs::exists(sb.dir / "env" / "eigenvalues.csv"));
  REQUIRE(sb.run("forward --config c.json --out flag", "SLINV_OUT_DIR=env") == 0);
  CHECK(fs::exists(sb.dir / "flag" / "eigenvalues.csv"));
}

TEST_CASE("demo reproduces an example end to end", "[cli]") {
  Sandbox sb("demo");
  REQUIRE(sb.run("demo sin4pi") == 0);
  const json s = json::parse(sb.read("demo-sin4pi/summary.json"));
  CHECK(s["selection"]["ranking"].size() == 2);
  CHECK(fs::exists(sb.dir / "demo-sin4pi"));
}
