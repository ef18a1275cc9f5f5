#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "shiftig/cli.hpp"
#include "shiftig/report.hpp"

using namespace shiftig;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("shiftig_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("synth writes duration times rate rows and is reproducible") {
  auto dir = scratch("synth");
  auto r1 = run({"synth", "--out", (dir / "a").string(), "--seed", "5", "--snr", "20"});
  REQUIRE(r1.code == 0);
  auto r2 = run({"synth", "--out", (dir / "b").string(), "--seed", "5", "--snr", "20"});
  REQUIRE(r2.code == 0);
  const auto csv = slurp(dir / "a" / "synth.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5120 + 1);
  CHECK(csv == slurp(dir / "b" / "synth.csv"));
  auto truth = nlohmann::json::parse(slurp(dir / "a" / "synth_truth.json"));
  CHECK(truth["rpeaks"].size() == 10);

  auto bad = run({"synth", "--bpm", "0", "--out", (dir / "c").string()});
  CHECK(bad.code == 1);
  CHECK(nlohmann::json::parse(bad.err)["error"] == "InvalidConfig");
}

TEST_CASE("missing model file") {
  auto r = run({"attribute", "--target", "t.csv", "--baseline", "b.csv", "--model", "/nonexistent/m.json"});
  CHECK(r.code == 1);
  CHECK(nlohmann::json::parse(r.err)["error"] == "ModelFileNotFound");
}

TEST_CASE("usage errors exit 1") {
  auto r = run({"attribute", "--target", "t.csv"});
  CHECK(r.code == 1);
  CHECK(nlohmann::json::parse(r.err)["error"] == "UsageError");
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("attribute end to end, align and bins") {
  auto dir = scratch("attribute");
  REQUIRE(run({"synth", "--out", dir.string(), "--name", "rest", "--duration", "4", "--seed", "1", "--snr",
               "35"}).code == 0);
  REQUIRE(run({"synth", "--out", dir.string(), "--name", "ex", "--duration", "4", "--seed", "2", "--snr", "35",
               "--exertion", "--offset", "123", "--emit-model", "exertion"}).code == 0);
  const auto target = (dir / "ex.csv").string();
  const auto baseline = (dir / "rest.csv").string();
  const auto model = (dir / "ex_model.json").string();

  auto r = run({"attribute", "--target", target, "--baseline", baseline, "--model", model, "--out",
                (dir / "out").string(), "--svg", "--steps", "64"});
  REQUIRE(r.code == 0);
  auto report = parse_report(slurp(dir / "out" / "attribution.json"));
  CHECK(report.scores.rows() == 3);
  CHECK(report.scores.cols() == 2048);
  CHECK(std::abs(report.residual) <= 1e-4 * std::max(1.0, std::abs(report.f_target - report.f_baseline)));
  CHECK(report.e.has_value());
  CHECK(report.steps == 64);
  CHECK(fs::exists(dir / "out" / "heatmap.svg"));

  auto shared = run({"attribute", "--target", target, "--baseline", baseline, "--model", model, "--out",
                     (dir / "shared").string(), "--steps", "8", "--shared-shift", "--scheme", "midpoint"});
  REQUIRE(shared.code == 0);
  auto shared_report = parse_report(slurp(dir / "shared" / "attribution.json"));
  CHECK(shared_report.shift_per_lead[0] == shared_report.shift_per_lead[1]);
  CHECK(shared_report.shift_per_lead[1] == shared_report.shift_per_lead[2]);
  CHECK(shared_report.scheme == "midpoint");

  auto al = run({"align", "--target", target, "--baseline", baseline, "--out", (dir / "align").string()});
  REQUIRE(al.code == 0);
  auto aj = nlohmann::json::parse(slurp(dir / "align" / "alignment.json"));
  CHECK(aj["shift_per_lead"].get<std::vector<std::size_t>>() == report.shift_per_lead);
  CHECK(fs::exists(dir / "align" / "aligned_baseline.csv"));

  auto bins = run({"bins", "--input", (dir / "out" / "attribution.json").string()});
  REQUIRE(bins.code == 0);
  auto bj = nlohmann::json::parse(bins.out);
  CHECK(bj["totals"].get<std::vector<double>>() ==
        std::vector<double>(report.bins.totals.begin(), report.bins.totals.end()));
  CHECK(bj["lead"] == "II");
  auto bins_i = run({"bins", "--input", (dir / "out" / "attribution.json").string(), "--bin-lead", "I",
                     "--target", target});
  CHECK(bins_i.code == 0);
  CHECK(run({"bins", "--input", (dir / "out" / "attribution.json").string(), "--bin-lead", "V9"}).code == 1);
}

TEST_CASE("identical target and baseline is degenerate") {
  auto dir = scratch("identical");
  REQUIRE(run({"synth", "--out", dir.string(), "--duration", "3", "--emit-model", "tanh"}).code == 0);
  const auto csv = (dir / "synth.csv").string();
  auto r = run({"attribute", "--target", csv, "--baseline", csv, "--model", (dir / "synth_model.json").string(),
                "--out", (dir / "out").string(), "--steps", "16"});
  CHECK(r.code == 2);
  auto report = parse_report(slurp(dir / "out" / "attribution.json"));
  for (double v : report.scores.flat()) CHECK(v == 0.0);
  CHECK_FALSE(report.e.has_value());
  CHECK_FALSE(report.lambda.has_value());
}

TEST_CASE("verify on bundled fixtures and on a corrupted model") {
  auto ok = run({"verify", "--points", "3", "--samples", "16"});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("FAIL") == std::string::npos);
  CHECK(ok.out.find("linear-residual") != std::string::npos);

  auto dir = scratch("verify");
  const auto path = (dir / "nan.json").string();
  std::ofstream(path)
      << R"({"kind":"mlp","input_shape":[3,4],"class_index":0,"layers":[{"w":[[null,1,1,1,1,1,1,1,1,1,1,1]],"b":[0],"act":"tanh"}]})";
  auto bad = run({"verify", "--model", path, "--points", "2"});
  CHECK(bad.code == 1);
  CHECK(bad.out.find("NonFiniteGradient") != std::string::npos);
}
