#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "shiftig/matrix.hpp"
#include "shiftig/signal.hpp"

namespace shiftig {

// Scalar function of a C×T input with an exact input gradient. Anything the
// attribution engine integrates over implements this.
class ModelFunction {
 public:
  virtual ~ModelFunction() = default;

  virtual Shape input_shape() const = 0;
  virtual double evaluate(const Matrix& x) const = 0;
  virtual Matrix evaluate_gradient(const Matrix& x) const = 0;
};

enum class Activation { identity, tanh, relu };
enum class ModelKind { linear, mlp };
// Which scalar of the final layer is exposed as F.
enum class OutputMode { logit, probability };

std::string to_string(Activation act);
Activation activation_from_string(const std::string& name);

struct DenseLayer {
  Matrix weights;  // out × in
  std::vector<double> bias;
  Activation activation = Activation::identity;
};

// Dense feed-forward model on the flattened (row-major, lead-major) input.
//
// F is the selected class logit when the final layer has several outputs,
// or the single output otherwise. In probability mode F is the softmax
// probability of the selected class (logistic sigmoid for one output).
class DifferentiableModel final : public ModelFunction {
 public:
  static DifferentiableModel linear(Matrix weights, double bias);
  static DifferentiableModel mlp(Shape input_shape, std::vector<DenseLayer> layers,
                                 std::size_t class_index = 0);

  ModelKind kind() const { return kind_; }
  const std::vector<DenseLayer>& layers() const { return layers_; }
  std::size_t class_index() const { return class_index_; }
  std::size_t output_size() const { return layers_.back().weights.rows(); }
  OutputMode output_mode() const { return output_mode_; }

  DifferentiableModel with_class_index(std::size_t k) const;
  DifferentiableModel with_output_mode(OutputMode mode) const;

  bool parameters_finite() const;

  Shape input_shape() const override { return input_shape_; }
  double evaluate(const Matrix& x) const override;
  Matrix evaluate_gradient(const Matrix& x) const override;

  // Sign pattern (z > 0) of every relu pre-activation, in layer order.
  std::vector<bool> relu_pattern(const Matrix& x) const;
  bool has_relu() const;

  // {"kind", "input_shape": [C,T], "class_index", "layers": [{"w","b","act"}]}.
  // Linear models store a single identity layer whose "w" is the C×T map.
  nlohmann::json to_json() const;
  // With require_finite = false, null or non-finite weights load as NaN so the
  // model can still be probed by the verification command.
  static DifferentiableModel from_json(const nlohmann::json& j, bool require_finite = true);

 private:
  DifferentiableModel(ModelKind kind, Shape input_shape, std::vector<DenseLayer> layers,
                      std::size_t class_index);

  void check_input(const Matrix& x) const;

  ModelKind kind_;
  Shape input_shape_;
  std::vector<DenseLayer> layers_;
  std::size_t class_index_;
  OutputMode output_mode_ = OutputMode::logit;
};

// Throws ModelFileNotFound, ParseError or InvalidModel.
DifferentiableModel load_model_file(const std::string& path, bool require_finite = true);
void save_model_file(const std::string& path, const DifferentiableModel& model);

using GradientField = Matrix;

// F(x). Throws ShapeMismatch when x does not fit the model.
double forward(const ModelFunction& m, const LeadTimeMatrix& x);

// Exact ∇F(x) as a C×T field.
GradientField gradient(const ModelFunction& m, const LeadTimeMatrix& x);

// Central differences (F(x + h e) - F(x - h e)) / 2h. Throws InvalidStep for h <= 0.
GradientField fd_gradient(const ModelFunction& m, const LeadTimeMatrix& x, double h);
GradientField fd_gradient(const ModelFunction& m, const Matrix& x, double h);

}  // namespace shiftig
