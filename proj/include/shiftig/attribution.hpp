#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "shiftig/matrix.hpp"
#include "shiftig/model.hpp"
#include "shiftig/signal.hpp"

namespace shiftig {

enum class QuadratureScheme { trapezoid, midpoint };

std::string to_string(QuadratureScheme scheme);
QuadratureScheme scheme_from_string(const std::string& name);

inline constexpr std::size_t kDefaultSteps = 256;

// Straight-line path gamma(alpha) = baseline + alpha * (target - baseline).
struct PathSpec {
  LeadTimeMatrix baseline;
  LeadTimeMatrix target;
  std::size_t steps = kDefaultSteps;
  QuadratureScheme scheme = QuadratureScheme::trapezoid;
};

// Nodes and weights of the m-step rule on [0, 1]. Trapezoid has m + 1 nodes
// {0, 1/m, ..., 1}; midpoint has m nodes at (k + 1/2)/m.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

QuadratureRule quadrature_rule(QuadratureScheme scheme, std::size_t steps);

struct AttributionMap {
  Matrix scores;  // IG per (lead, sample)
  double f_target = 0.0;
  double f_baseline = 0.0;
  // (f_target - f_baseline) - sum(scores)
  double completeness_residual = 0.0;
  std::size_t steps_used = 0;
  QuadratureScheme scheme = QuadratureScheme::trapezoid;
  // Quadrature estimate of the path-averaged gradient; scores = delta ⊙ this.
  Matrix path_gradient;
  std::vector<std::string> lead_names;

  double delta_f() const { return f_target - f_baseline; }
};

// Throws ShapeMismatch, InvalidSteps, NonFiniteGradient.
AttributionMap integrated_gradients(const ModelFunction& m, const PathSpec& path);

// |residual| <= rel_tol * max(1, |f_target - f_baseline|)
bool completeness_check(const AttributionMap& a, double rel_tol);

// |residual| / max(1, |f_target - f_baseline|)
double relative_residual(const AttributionMap& a);

}  // namespace shiftig
