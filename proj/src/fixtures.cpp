#include "shiftig/fixtures.hpp"

#include <cmath>
#include <random>

#include "shiftig/error.hpp"

namespace shiftig {

namespace {

Matrix random_matrix(std::size_t rows, std::size_t cols, double scale, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, scale);
  Matrix m(rows, cols);
  for (double& v : m.flat()) v = dist(rng);
  return m;
}

std::vector<double> random_vector(std::size_t n, double scale, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, scale);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

std::vector<DenseLayer> random_stack(std::size_t in, const std::vector<std::size_t>& hidden,
                                     std::size_t out, Activation act, std::mt19937_64& rng) {
  std::vector<DenseLayer> layers;
  for (std::size_t width : hidden) {
    layers.push_back({random_matrix(width, in, 1.0 / std::sqrt(static_cast<double>(in)), rng),
                      random_vector(width, 0.5, rng), act});
    in = width;
  }
  layers.push_back({random_matrix(out, in, 1.0 / std::sqrt(static_cast<double>(in)), rng),
                    random_vector(out, 0.1, rng), Activation::identity});
  return layers;
}

}  // namespace

DifferentiableModel make_linear_model(Shape input, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Matrix w = random_matrix(input.rows, input.cols, 1.0 / std::sqrt(static_cast<double>(input.size())), rng);
  std::normal_distribution<double> bias(0.0, 0.5);
  return DifferentiableModel::linear(std::move(w), bias(rng));
}

DifferentiableModel make_tanh_mlp(Shape input, std::uint64_t seed,
                                  const std::vector<std::size_t>& hidden) {
  std::mt19937_64 rng(seed);
  return DifferentiableModel::mlp(input, random_stack(input.size(), hidden, 1, Activation::tanh, rng));
}

DifferentiableModel make_relu_mlp(Shape input, std::uint64_t seed,
                                  const std::vector<std::size_t>& hidden) {
  std::mt19937_64 rng(seed);
  return DifferentiableModel::mlp(input, random_stack(input.size(), hidden, 1, Activation::relu, rng));
}

DifferentiableModel make_logits_mlp(Shape input, std::uint64_t seed, std::size_t classes) {
  std::mt19937_64 rng(seed);
  return DifferentiableModel::mlp(
      input, random_stack(input.size(), {12}, classes, Activation::tanh, rng), classes > 1 ? 1 : 0);
}

DifferentiableModel make_exertion_model(const LeadTimeMatrix& rest, const LeadTimeMatrix& exertion,
                                        std::uint64_t seed) {
  const DeltaMatrix diff = delta(exertion, rest);
  const Shape shape = rest.shape();
  const std::size_t d = shape.size();
  auto tmpl = diff.data.flat();
  double norm2 = 0.0;
  for (double v : tmpl) norm2 += v * v;
  if (norm2 == 0.0) {
    throw Error(ErrorCode::InvalidModel, "exertion and rest references are identical");
  }

  // Unit 0: z = <u, x - rest> with u = template / |template|^2, so z = 0 at
  // rest and z = 1 at the exertion reference.
  std::mt19937_64 rng(seed);
  Matrix w1 = random_matrix(3, d, 0.02 / std::sqrt(static_cast<double>(d)), rng);
  std::vector<double> b1 = random_vector(3, 0.1, rng);
  auto rest_flat = rest.data().flat();
  double offset = 0.0;
  auto u = w1.row(0);
  for (std::size_t k = 0; k < d; ++k) {
    u[k] = 2.0 * tmpl[k] / norm2;
    offset += u[k] * rest_flat[k];
  }
  b1[0] = -offset - 1.0;

  Matrix w2(1, 3);
  w2(0, 0) = 1.0;
  w2(0, 1) = 0.2;
  w2(0, 2) = -0.2;
  std::vector<DenseLayer> layers{{std::move(w1), std::move(b1), Activation::tanh},
                                 {std::move(w2), {0.0}, Activation::identity}};
  return DifferentiableModel::mlp(shape, std::move(layers));
}

std::vector<NamedModel> bundled_models(Shape input, std::uint64_t seed) {
  std::vector<NamedModel> out;
  out.push_back({"linear", make_linear_model(input, seed)});
  out.push_back({"tanh-mlp", make_tanh_mlp(input, seed + 1)});
  out.push_back({"relu-mlp", make_relu_mlp(input, seed + 2)});
  out.push_back({"logits-mlp", make_logits_mlp(input, seed + 3)});
  out.push_back({"softmax-prob", make_logits_mlp(input, seed + 3).with_output_mode(OutputMode::probability)});
  return out;
}

}  // namespace shiftig
