#include <doctest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "shiftig/error.hpp"
#include "shiftig/report.hpp"
#include "shiftig/svg.hpp"

using namespace shiftig;

namespace {

AttributionReport random_report(std::mt19937_64& rng, bool degenerate) {
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  std::uniform_int_distribution<std::size_t> idx(0, 5000);
  AttributionReport r;
  r.lead_names = {"I", "II", "III"};
  r.scores = oracle::random_matrix(3, 17, rng, -1e-3, 1e-3);
  r.f_target = u(rng);
  r.f_baseline = u(rng);
  r.residual = u(rng) * 1e-9;
  r.steps = 256;
  r.scheme = "trapezoid";
  r.period_samples = idx(rng);
  r.shift_per_lead = {idx(rng), idx(rng), idx(rng)};
  r.score_per_lead = {u(rng), u(rng), u(rng)};
  r.w = oracle::random_matrix(3, 3, rng, -5, 5);
  if (!degenerate) {
    r.e = oracle::random_matrix(3, 3, rng, -5, 5);
    r.lambda = u(rng);
  }
  r.regime_threshold = 0.05;
  r.regimes = {{Regime::near_zero, Regime::positive, Regime::negative},
               {Regime::positive, Regime::near_zero, Regime::near_zero},
               {Regime::negative, Regime::near_zero, Regime::near_zero}};
  r.bin_lead = "II";
  r.rpeaks = {idx(rng), idx(rng) + 6000};
  r.bins.totals = {u(rng), u(rng), u(rng), u(rng)};
  r.bins.counts = {idx(rng), idx(rng), idx(rng), idx(rng)};
  r.bins.cycles_used = idx(rng);
  r.bins.coverage_fraction = 0.8125;
  r.warnings = {"something"};
  return r;
}

}  // namespace

TEST_CASE("attribution report round-trips") {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 25; ++trial) {
    const auto r = random_report(rng, trial % 3 == 0);
    CHECK(parse_report(serialize(r)) == r);
    CHECK(serialize(parse_report(serialize(r))) == serialize(r));
  }
}

TEST_CASE("report uses the documented keys") {
  std::mt19937_64 rng(1);
  auto j = to_json(random_report(rng, false));
  for (const char* key : {"scores", "f_target", "f_baseline", "residual", "shift_per_lead", "W", "E", "lambda",
                          "regimes", "bins"}) {
    CAPTURE(key);
    CHECK(j.contains(key));
  }
  CHECK(j["bins"]["labels"] == nlohmann::json({"ST", "T", "P", "PQ"}));
  CHECK(j["bins"]["totals"].size() == 4);
  CHECK(j["regimes"][0][1] == "positive");

  auto degenerate = to_json(random_report(rng, true));
  CHECK(degenerate["E"].is_null());
  CHECK(degenerate["lambda"].is_null());
}

TEST_CASE("malformed reports") {
  CHECK_THROWS_AS(parse_report("{"), Error);
  CHECK_THROWS_AS(parse_report(R"({"scores": [[1]]})"), Error);
}

TEST_CASE("heatmap svg has one band per lead") {
  std::mt19937_64 rng(4);
  auto x = oracle::random_segment(3, 20, rng);
  auto scores = oracle::random_matrix(3, 20, rng, -1, 1);
  std::ostringstream out;
  write_heatmap_svg(out, x, scores);
  const std::string svg = out.str();
  CHECK(svg.rfind("<svg", 0) == 0);
  std::size_t rects = 0, paths = 0;
  for (std::size_t pos = 0; (pos = svg.find("<rect", pos)) != std::string::npos; ++pos) ++rects;
  for (std::size_t pos = 0; (pos = svg.find("<path", pos)) != std::string::npos; ++pos) ++paths;
  CHECK(rects == 60);
  CHECK(paths == 3);
  CHECK_THROWS_AS(write_heatmap_svg(out, x, Matrix(2, 20)), Error);
}
