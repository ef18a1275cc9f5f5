#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "shiftig/error.hpp"
#include "shiftig/signal.hpp"

using namespace shiftig;

namespace {

LeadTimeMatrix seg(const std::vector<std::vector<double>>& rows, double fs = 512.0) {
  return LeadTimeMatrix(Matrix::from_rows(rows), fs);
}

ErrorCode code_of(auto fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::IoError;
}

}  // namespace

TEST_CASE("normalize maps each lead to [0, 1]") {
  auto r = normalize(seg({{2, 4, 6}}));
  CHECK(r.signal.data() == Matrix::from_rows({{0, 0.5, 1}}));
  CHECK_FALSE(r.warning());

  auto two = normalize(seg({{0, 10}, {-1, 1}}));
  CHECK(two.signal.data() == Matrix::from_rows({{0, 1}, {0, 1}}));
}

TEST_CASE("constant lead normalizes to zeros with a warning") {
  auto r = normalize(seg({{5, 5, 5}, {1, 2, 3}}));
  CHECK(r.signal.data() == Matrix::from_rows({{0, 0, 0}, {0, 0.5, 1}}));
  REQUIRE(r.warning());
  CHECK(r.constant_leads == std::vector<std::size_t>{0});
}

TEST_CASE("non-finite entries are rejected") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK(code_of([&] { seg({{1, nan, 3}}); }) == ErrorCode::NonFiniteInput);
  CHECK(code_of([&] { seg({{1, INFINITY}}); }) == ErrorCode::NonFiniteInput);
}

TEST_CASE("segment shape invariants") {
  CHECK(code_of([] { seg({{1}}); }) == ErrorCode::ShapeMismatch);
  CHECK(code_of([] { LeadTimeMatrix(Matrix(1, 4), {"a", "b"}, 512.0); }) == ErrorCode::ShapeMismatch);
  CHECK(code_of([] { seg({{1, 2}}, 0.0); }) == ErrorCode::InvalidConfig);
}

TEST_CASE("normalize is idempotent and hits 0 and 1 exactly") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    auto x = LeadTimeMatrix(oracle::random_matrix(3, 40, rng, -5.0, 7.0), 512.0);
    auto once = normalize(x).signal;
    auto twice = normalize(once).signal;
    CHECK(once == twice);
    for (std::size_t i = 0; i < 3; ++i) {
      auto lead = once.lead(i);
      CHECK(*std::min_element(lead.begin(), lead.end()) == 0.0);
      CHECK(*std::max_element(lead.begin(), lead.end()) == 1.0);
    }
  }
}

TEST_CASE("delta") {
  CHECK(delta(seg({{1, 2}}), seg({{0, 2}})).data == Matrix::from_rows({{1, 0}}));

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    auto x = oracle::random_segment(2, 9, rng);
    auto d = delta(x, x).data;
    for (double v : d.flat()) CHECK(v == 0.0);
  }

  CHECK(code_of([] { delta(LeadTimeMatrix(Matrix(3, 100), 512.0), LeadTimeMatrix(Matrix(3, 99), 512.0)); }) ==
        ErrorCode::ShapeMismatch);
  CHECK(code_of([] { delta(seg({{1, 2}}, 512.0), seg({{1, 2}}, 256.0)); }) == ErrorCode::ShapeMismatch);
}

TEST_CASE("rotate delays every lead circularly") {
  auto r = rotate(seg({{1, 2, 3, 4}, {5, 6, 7, 8}}), 1);
  CHECK(r.data() == Matrix::from_rows({{4, 1, 2, 3}, {8, 5, 6, 7}}));
  CHECK(rotate(r, -1) == seg({{1, 2, 3, 4}, {5, 6, 7, 8}}));
}

TEST_CASE("CSV round trip infers the sample rate") {
  std::mt19937_64 rng(5);
  auto x = LeadTimeMatrix(oracle::random_matrix(3, 100, rng, -2, 2), {"I", "II", "III"}, 512.0);
  std::stringstream ss;
  write_csv(ss, x);
  auto back = read_csv(ss);
  CHECK(back == x);
  CHECK(back.sample_rate_hz() == 512.0);
}

TEST_CASE("CSV ingestion errors") {
  std::istringstream bad_header("t,I\n0,1\n1,2\n");
  CHECK(code_of([&] { read_csv(bad_header); }) == ErrorCode::ParseError);

  std::istringstream not_increasing("time,I\n0,1\n0,2\n");
  CHECK(code_of([&] { read_csv(not_increasing); }) == ErrorCode::ParseError);

  std::istringstream ragged("time,I,II\n0,1,2\n0.5,1\n");
  CHECK(code_of([&] { read_csv(ragged); }) == ErrorCode::ParseError);

  std::istringstream nan_cell("time,I\n0,1\n0.5,nan\n");
  CHECK(code_of([&] { read_csv(nan_cell); }) == ErrorCode::NonFiniteInput);

  CHECK(code_of([] { read_csv_file("/nonexistent/file.csv"); }) == ErrorCode::InputFileNotFound);
}

TEST_CASE("median spacing tolerates one irregular gap") {
  std::istringstream in("time,I\n0,1\n0.01,2\n0.02,3\n0.05,4\n0.06,5\n");
  auto x = read_csv(in);
  CHECK(x.sample_rate_hz() == doctest::Approx(100.0));
  CHECK(x.lead_names() == std::vector<std::string>{"I"});
}
