#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "shiftig/error.hpp"
#include "shiftig/fixtures.hpp"
#include "shiftig/model.hpp"
#include "shiftig/verify.hpp"

using namespace shiftig;

namespace {

ErrorCode code_of(auto fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::IoError;
}

LeadTimeMatrix row(const std::vector<double>& v) { return LeadTimeMatrix(Matrix::from_rows({v}), 512.0); }

}  // namespace

TEST_CASE("linear forward") {
  auto m = DifferentiableModel::linear(Matrix::from_rows({{1, 1, 1}}), 0.0);
  CHECK(forward(m, row({1, 2, 3})) == 6.0);

  std::mt19937_64 rng(1);
  auto w = oracle::random_matrix(2, 5, rng, -1, 1);
  auto m2 = DifferentiableModel::linear(w, 0.75);
  CHECK(forward(m2, LeadTimeMatrix(Matrix(2, 5), 512.0)) == 0.75);
}

TEST_CASE("single identity layer mlp reduces to the linear model") {
  std::mt19937_64 rng(2);
  auto w = oracle::random_matrix(2, 4, rng, -1, 1);
  auto lin = DifferentiableModel::linear(w, 0.3);
  auto flat = w.flat();
  auto mlp = DifferentiableModel::mlp(
      {2, 4}, {{Matrix(1, 8, std::vector<double>(flat.begin(), flat.end())), {0.3}, Activation::identity}});
  for (int trial = 0; trial < 10; ++trial) {
    auto x = oracle::random_segment(2, 4, rng);
    CHECK(forward(lin, x) == forward(mlp, x));
    CHECK(gradient(lin, x) == gradient(mlp, x));
  }
}

TEST_CASE("linear gradient is the weight map and fd agrees") {
  std::mt19937_64 rng(3);
  auto w = oracle::random_matrix(3, 6, rng, -1, 1);
  auto m = DifferentiableModel::linear(w, -0.2);
  auto x = oracle::random_segment(3, 6, rng);
  CHECK(gradient(m, x) == w);
  auto fd = fd_gradient(m, x, 1e-3);
  for (std::size_t k = 0; k < w.size(); ++k) CHECK(fd.flat()[k] == doctest::Approx(w.flat()[k]).epsilon(1e-9));
}

TEST_CASE("sum of squares: analytic and central-difference gradients") {
  oracle::SquareModel sq({1, 2});
  auto x = row({1, 1});
  CHECK(gradient(sq, x) == Matrix::from_rows({{2, 2}}));
  auto fd = fd_gradient(sq, x, 1e-4);
  CHECK(std::abs(fd(0, 0) - 2.0) <= 1e-7);
  CHECK(std::abs(fd(0, 1) - 2.0) <= 1e-7);
  CHECK(code_of([&] { fd_gradient(sq, x, 0.0); }) == ErrorCode::InvalidStep);
  CHECK(code_of([&] { fd_gradient(sq, x, -1.0); }) == ErrorCode::InvalidStep);
}

TEST_CASE("relu derivative at exactly zero is zero") {
  // F = relu(x0 - x1): the kink sits at x0 = x1.
  auto m = DifferentiableModel::mlp({1, 2}, {{Matrix::from_rows({{1, -1}}), {0.0}, Activation::relu}});
  CHECK(gradient(m, row({0.5, 0.5})) == Matrix::from_rows({{0, 0}}));
  CHECK(gradient(m, row({0.6, 0.5})) == Matrix::from_rows({{1, -1}}));
}

TEST_CASE("logit and probability outputs") {
  // Two logits: z = (x0, x1).
  auto m = DifferentiableModel::mlp({1, 2}, {{Matrix::from_rows({{1, 0}, {0, 1}}), {0, 0}, Activation::identity}}, 1);
  auto x = row({0.2, 1.3});
  CHECK(forward(m, x) == 1.3);
  auto p = m.with_output_mode(OutputMode::probability);
  const double expect = std::exp(1.3) / (std::exp(0.2) + std::exp(1.3));
  CHECK(forward(p, x) == doctest::Approx(expect).epsilon(1e-14));
  auto g = gradient(p, x);
  CHECK(g(0, 0) == doctest::Approx(-expect * (1 - expect)).epsilon(1e-12));
  CHECK(g(0, 1) == doctest::Approx(expect * (1 - expect)).epsilon(1e-12));
  CHECK(forward(m.with_class_index(0), x) == 0.2);
  CHECK(code_of([&] { (void)m.with_class_index(2); }) == ErrorCode::InvalidModel);
}

TEST_CASE("bundled models pass the finite-difference oracle") {
  std::mt19937_64 rng(17);
  for (const auto& [name, model] : bundled_models({3, 16}, 5)) {
    CAPTURE(name);
    for (int trial = 0; trial < 10; ++trial) {
      auto x = oracle::random_matrix(3, 16, rng);
      CHECK(gradient_relative_error(model, x, kGradientStep) <= kGradientRelTol);
    }
  }
}

TEST_CASE("forward and gradient are deterministic") {
  auto m = make_tanh_mlp({3, 32}, 4);
  std::mt19937_64 rng(8);
  auto x = oracle::random_segment(3, 32, rng);
  CHECK(forward(m, x) == forward(m, x));
  CHECK(gradient(m, x) == gradient(m, x));
}

TEST_CASE("shape checks") {
  auto m = make_tanh_mlp({3, 8}, 1);
  CHECK(code_of([&] { forward(m, LeadTimeMatrix(Matrix(3, 9), 512.0)); }) == ErrorCode::ShapeMismatch);
  CHECK(code_of([&] { gradient(m, LeadTimeMatrix(Matrix(2, 8), 512.0)); }) == ErrorCode::ShapeMismatch);
  CHECK(code_of([] {
          DifferentiableModel::mlp({1, 3}, {{Matrix(2, 4), {0, 0}, Activation::tanh}});
        }) == ErrorCode::InvalidModel);
  CHECK(code_of([] {
          DifferentiableModel::mlp({1, 3}, {{Matrix(2, 3), {0}, Activation::tanh}});
        }) == ErrorCode::InvalidModel);
  CHECK(code_of([] {
          DifferentiableModel::linear(Matrix::from_rows({{1, std::numeric_limits<double>::quiet_NaN()}}), 0);
        }) == ErrorCode::NonFiniteParameter);
}

TEST_CASE("model JSON uses the documented schema and round-trips") {
  auto m = make_logits_mlp({3, 4}, 9);
  auto j = m.to_json();
  CHECK(j["kind"] == "mlp");
  CHECK(j["input_shape"] == nlohmann::json({3, 4}));
  CHECK(j["class_index"] == 1);
  CHECK(j["layers"][0]["act"] == "tanh");
  CHECK(j["layers"][0]["w"].size() == 12);
  auto back = DifferentiableModel::from_json(nlohmann::json::parse(j.dump()));
  CHECK(back.layers().size() == m.layers().size());
  for (std::size_t l = 0; l < m.layers().size(); ++l) {
    CHECK(back.layers()[l].weights == m.layers()[l].weights);
    CHECK(back.layers()[l].bias == m.layers()[l].bias);
  }

  auto lin = make_linear_model({2, 3}, 4);
  auto lj = lin.to_json();
  CHECK(lj["kind"] == "linear");
  CHECK(lj["layers"][0]["w"].size() == 2);
  CHECK(lj["layers"][0]["w"][0].size() == 3);
  auto lin_back = DifferentiableModel::from_json(lj);
  CHECK(lin_back.kind() == ModelKind::linear);
  CHECK(lin_back.layers()[0].weights == lin.layers()[0].weights);
}

TEST_CASE("model files") {
  CHECK(code_of([] { load_model_file("/nonexistent/model.json"); }) == ErrorCode::ModelFileNotFound);

  const auto dir = std::filesystem::temp_directory_path() / "shiftig_test_model";
  std::filesystem::create_directories(dir);
  const auto bad = (dir / "bad.json").string();
  std::ofstream(bad) << "{not json";
  CHECK(code_of([&] { load_model_file(bad); }) == ErrorCode::ParseError);

  const auto nan_file = (dir / "nan.json").string();
  std::ofstream(nan_file)
      << R"({"kind":"mlp","input_shape":[1,2],"class_index":0,"layers":[{"w":[[null,1]],"b":[0],"act":"tanh"}]})";
  CHECK(code_of([&] { load_model_file(nan_file); }) == ErrorCode::InvalidModel);
  auto lenient = load_model_file(nan_file, false);
  CHECK_FALSE(lenient.parameters_finite());

  const auto good = (dir / "good.json").string();
  save_model_file(good, make_relu_mlp({2, 3}, 2));
  CHECK(load_model_file(good).has_relu());
}
