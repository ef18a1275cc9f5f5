#include "shiftig/model.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "shiftig/error.hpp"

namespace shiftig {

namespace {

double activate(Activation act, double z) {
  switch (act) {
    case Activation::identity: return z;
    case Activation::tanh: return std::tanh(z);
    case Activation::relu: return z > 0.0 ? z : 0.0;
  }
  return z;
}

// Derivative from the pre-activation z and the activation a = act(z).
double activate_derivative(Activation act, double z, double a) {
  switch (act) {
    case Activation::identity: return 1.0;
    case Activation::tanh: return 1.0 - a * a;
    case Activation::relu: return z > 0.0 ? 1.0 : 0.0;
  }
  return 1.0;
}

bool finite_layers(const std::vector<DenseLayer>& layers) {
  for (const auto& l : layers) {
    if (!l.weights.all_finite()) return false;
    if (!std::all_of(l.bias.begin(), l.bias.end(), [](double v) { return std::isfinite(v); }))
      return false;
  }
  return true;
}

std::vector<double> softmax(std::span<const double> z) {
  const double zmax = *std::max_element(z.begin(), z.end());
  std::vector<double> p(z.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    p[k] = std::exp(z[k] - zmax);
    sum += p[k];
  }
  for (double& v : p) v /= sum;
  return p;
}

struct Trace {
  // pre[l] and post[l] are the pre-activation and activation of layer l.
  std::vector<std::vector<double>> pre;
  std::vector<std::vector<double>> post;
};

Trace run_layers(const std::vector<DenseLayer>& layers, std::span<const double> input) {
  Trace tr;
  tr.pre.reserve(layers.size());
  tr.post.reserve(layers.size());
  std::span<const double> a = input;
  for (const auto& layer : layers) {
    const std::size_t out = layer.weights.rows();
    std::vector<double> z(out);
    std::vector<double> act(out);
    for (std::size_t r = 0; r < out; ++r) {
      auto w = layer.weights.row(r);
      double s = layer.bias[r];
      for (std::size_t c = 0; c < w.size(); ++c) s += w[c] * a[c];
      z[r] = s;
      act[r] = activate(layer.activation, s);
    }
    tr.pre.push_back(std::move(z));
    tr.post.push_back(std::move(act));
    a = tr.post.back();
  }
  return tr;
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double json_number(const nlohmann::json& v, bool require_finite) {
  if (v.is_null() && !require_finite) return std::numeric_limits<double>::quiet_NaN();
  if (!v.is_number()) throw Error(ErrorCode::InvalidModel, "expected a number in model file");
  const double d = v.get<double>();
  if (require_finite && !std::isfinite(d)) {
    throw Error(ErrorCode::NonFiniteParameter, "model parameter is not finite");
  }
  return d;
}

nlohmann::json json_matrix(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return rows;
}

}  // namespace

std::string to_string(Activation act) {
  switch (act) {
    case Activation::identity: return "identity";
    case Activation::tanh: return "tanh";
    case Activation::relu: return "relu";
  }
  return "identity";
}

Activation activation_from_string(const std::string& name) {
  if (name == "identity" || name == "linear") return Activation::identity;
  if (name == "tanh") return Activation::tanh;
  if (name == "relu") return Activation::relu;
  throw Error(ErrorCode::InvalidModel, "unknown activation '" + name + "'");
}

DifferentiableModel::DifferentiableModel(ModelKind kind, Shape input_shape,
                                         std::vector<DenseLayer> layers, std::size_t class_index)
    : kind_(kind),
      input_shape_(input_shape),
      layers_(std::move(layers)),
      class_index_(class_index) {
  if (input_shape_.rows < 1 || input_shape_.cols < 1) {
    throw Error(ErrorCode::InvalidModel, "input shape must be positive");
  }
  if (layers_.empty()) throw Error(ErrorCode::InvalidModel, "model has no layers");
  std::size_t in = input_shape_.size();
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const auto& layer = layers_[l];
    if (layer.weights.cols() != in) {
      throw Error(ErrorCode::InvalidModel,
                  "layer " + std::to_string(l) + " expects input dim " +
                      std::to_string(layer.weights.cols()) + ", got " + std::to_string(in));
    }
    if (layer.weights.rows() < 1 || layer.bias.size() != layer.weights.rows()) {
      throw Error(ErrorCode::InvalidModel,
                  "layer " + std::to_string(l) + " bias does not match its output dim");
    }
    in = layer.weights.rows();
  }
  if (class_index_ >= in) {
    throw Error(ErrorCode::InvalidModel, "class_index out of range of the final layer");
  }
}

DifferentiableModel DifferentiableModel::linear(Matrix weights, double bias) {
  const Shape shape = weights.shape();
  if (!weights.all_finite() || !std::isfinite(bias)) {
    throw Error(ErrorCode::NonFiniteParameter, "model parameter is not finite");
  }
  std::vector<double> flat(weights.flat().begin(), weights.flat().end());
  std::vector<DenseLayer> layers{
      {Matrix(1, shape.size(), std::move(flat)), {bias}, Activation::identity}};
  return DifferentiableModel(ModelKind::linear, shape, std::move(layers), 0);
}

DifferentiableModel DifferentiableModel::mlp(Shape input_shape, std::vector<DenseLayer> layers,
                                             std::size_t class_index) {
  if (!finite_layers(layers)) {
    throw Error(ErrorCode::NonFiniteParameter, "model parameter is not finite");
  }
  return DifferentiableModel(ModelKind::mlp, input_shape, std::move(layers), class_index);
}

DifferentiableModel DifferentiableModel::with_class_index(std::size_t k) const {
  DifferentiableModel copy(kind_, input_shape_, layers_, k);
  copy.output_mode_ = output_mode_;
  return copy;
}

DifferentiableModel DifferentiableModel::with_output_mode(OutputMode mode) const {
  DifferentiableModel copy = *this;
  copy.output_mode_ = mode;
  return copy;
}

bool DifferentiableModel::parameters_finite() const { return finite_layers(layers_); }

bool DifferentiableModel::has_relu() const {
  return std::any_of(layers_.begin(), layers_.end(),
                     [](const DenseLayer& l) { return l.activation == Activation::relu; });
}

void DifferentiableModel::check_input(const Matrix& x) const {
  if (x.shape() != input_shape_) {
    throw Error(ErrorCode::ShapeMismatch,
                "model expects " + std::to_string(input_shape_.rows) + "x" +
                    std::to_string(input_shape_.cols) + " input, got " +
                    std::to_string(x.rows()) + "x" + std::to_string(x.cols()));
  }
}

double DifferentiableModel::evaluate(const Matrix& x) const {
  check_input(x);
  const Trace tr = run_layers(layers_, x.flat());
  const auto& out = tr.post.back();
  if (output_mode_ == OutputMode::logit) return out[class_index_];
  if (out.size() == 1) return sigmoid(out[0]);
  return softmax(out)[class_index_];
}

Matrix DifferentiableModel::evaluate_gradient(const Matrix& x) const {
  check_input(x);
  const Trace tr = run_layers(layers_, x.flat());
  const auto& out = tr.post.back();

  // dF/d(final activation)
  std::vector<double> upstream(out.size(), 0.0);
  if (output_mode_ == OutputMode::logit) {
    upstream[class_index_] = 1.0;
  } else if (out.size() == 1) {
    const double s = sigmoid(out[0]);
    upstream[0] = s * (1.0 - s);
  } else {
    const auto p = softmax(out);
    const double pk = p[class_index_];
    for (std::size_t j = 0; j < p.size(); ++j) {
      upstream[j] = pk * ((j == class_index_ ? 1.0 : 0.0) - p[j]);
    }
  }

  for (std::size_t l = layers_.size(); l-- > 0;) {
    const auto& layer = layers_[l];
    const auto& z = tr.pre[l];
    const auto& a = tr.post[l];
    std::vector<double> dz(z.size());
    for (std::size_t r = 0; r < z.size(); ++r) {
      dz[r] = upstream[r] * activate_derivative(layer.activation, z[r], a[r]);
    }
    std::vector<double> below(layer.weights.cols(), 0.0);
    for (std::size_t r = 0; r < layer.weights.rows(); ++r) {
      if (dz[r] == 0.0) continue;
      auto w = layer.weights.row(r);
      for (std::size_t c = 0; c < w.size(); ++c) below[c] += w[c] * dz[r];
    }
    upstream = std::move(below);
  }
  return Matrix(input_shape_.rows, input_shape_.cols, std::move(upstream));
}

std::vector<bool> DifferentiableModel::relu_pattern(const Matrix& x) const {
  check_input(x);
  const Trace tr = run_layers(layers_, x.flat());
  std::vector<bool> pattern;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    if (layers_[l].activation != Activation::relu) continue;
    for (double z : tr.pre[l]) pattern.push_back(z > 0.0);
  }
  return pattern;
}

nlohmann::json DifferentiableModel::to_json() const {
  nlohmann::json j;
  j["kind"] = kind_ == ModelKind::linear ? "linear" : "mlp";
  j["input_shape"] = {input_shape_.rows, input_shape_.cols};
  j["class_index"] = class_index_;
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& layer : layers_) {
    nlohmann::json lj;
    if (kind_ == ModelKind::linear) {
      auto flat = layer.weights.flat();
      lj["w"] = json_matrix(
          Matrix(input_shape_.rows, input_shape_.cols, std::vector<double>(flat.begin(), flat.end())));
    } else {
      lj["w"] = json_matrix(layer.weights);
    }
    lj["b"] = layer.bias;
    lj["act"] = to_string(layer.activation);
    layers.push_back(std::move(lj));
  }
  j["layers"] = std::move(layers);
  return j;
}

DifferentiableModel DifferentiableModel::from_json(const nlohmann::json& j, bool require_finite) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    const auto& shape_j = j.at("input_shape");
    if (!shape_j.is_array() || shape_j.size() != 2) {
      throw Error(ErrorCode::InvalidModel, "input_shape must be [C, T]");
    }
    const Shape shape{shape_j[0].get<std::size_t>(), shape_j[1].get<std::size_t>()};
    const std::size_t class_index = j.value("class_index", std::size_t{0});

    std::vector<DenseLayer> layers;
    for (const auto& lj : j.at("layers")) {
      std::vector<std::vector<double>> rows;
      for (const auto& rj : lj.at("w")) {
        std::vector<double> row;
        for (const auto& v : rj) row.push_back(json_number(v, require_finite));
        rows.push_back(std::move(row));
      }
      std::vector<double> bias;
      for (const auto& v : lj.at("b")) bias.push_back(json_number(v, require_finite));
      const Activation act = activation_from_string(lj.value("act", std::string("identity")));
      layers.push_back({Matrix::from_rows(rows), std::move(bias), act});
    }

    if (kind == "linear") {
      if (layers.size() != 1 || layers[0].bias.size() != 1 ||
          layers[0].activation != Activation::identity || layers[0].weights.shape() != shape) {
        throw Error(ErrorCode::InvalidModel,
                    "linear model needs one identity layer with a C×T weight and one bias");
      }
      auto flat = layers[0].weights.flat();
      layers[0].weights = Matrix(1, shape.size(), std::vector<double>(flat.begin(), flat.end()));
      return DifferentiableModel(ModelKind::linear, shape, std::move(layers), 0);
    }
    if (kind == "mlp") {
      return DifferentiableModel(ModelKind::mlp, shape, std::move(layers), class_index);
    }
    throw Error(ErrorCode::InvalidModel, "unknown model kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidModel, std::string("malformed model document: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ShapeMismatch) throw Error(ErrorCode::InvalidModel, e.what());
    throw;
  }
}

DifferentiableModel load_model_file(const std::string& path, bool require_finite) {
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::ModelFileNotFound, "model file not found: " + path);
  }
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ModelFileNotFound, "cannot open model file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("model file is not valid JSON: ") + e.what());
  }
  return DifferentiableModel::from_json(j, require_finite);
}

void save_model_file(const std::string& path, const DifferentiableModel& model) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << model.to_json().dump() << '\n';
}

double forward(const ModelFunction& m, const LeadTimeMatrix& x) { return m.evaluate(x.data()); }

GradientField gradient(const ModelFunction& m, const LeadTimeMatrix& x) {
  return m.evaluate_gradient(x.data());
}

GradientField fd_gradient(const ModelFunction& m, const Matrix& x, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw Error(ErrorCode::InvalidStep, "finite-difference step must be positive");
  }
  Matrix probe = x;
  Matrix out(x.rows(), x.cols());
  auto p = probe.flat();
  auto o = out.flat();
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double saved = p[k];
    p[k] = saved + h;
    const double up = m.evaluate(probe);
    p[k] = saved - h;
    const double down = m.evaluate(probe);
    p[k] = saved;
    o[k] = (up - down) / (2.0 * h);
  }
  return out;
}

GradientField fd_gradient(const ModelFunction& m, const LeadTimeMatrix& x, double h) {
  return fd_gradient(m, x.data(), h);
}

}  // namespace shiftig
