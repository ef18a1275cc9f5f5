#include "shiftig/attribution.hpp"

#include <algorithm>
#include <cmath>

#include "shiftig/error.hpp"
#include "shiftig/parallel.hpp"

namespace shiftig {

namespace {

// Gradients are evaluated in blocks so memory stays bounded for long paths;
// the reduction walks nodes in index order regardless of thread layout.
constexpr std::size_t kNodeBlock = 64;

}  // namespace

std::string to_string(QuadratureScheme scheme) {
  return scheme == QuadratureScheme::trapezoid ? "trapezoid" : "midpoint";
}

QuadratureScheme scheme_from_string(const std::string& name) {
  if (name == "trapezoid") return QuadratureScheme::trapezoid;
  if (name == "midpoint") return QuadratureScheme::midpoint;
  throw Error(ErrorCode::InvalidConfig, "unknown quadrature scheme '" + name + "'");
}

QuadratureRule quadrature_rule(QuadratureScheme scheme, std::size_t steps) {
  if (steps < 1) throw Error(ErrorCode::InvalidSteps, "step count must be at least 1");
  QuadratureRule rule;
  const double m = static_cast<double>(steps);
  if (scheme == QuadratureScheme::trapezoid) {
    rule.nodes.resize(steps + 1);
    rule.weights.assign(steps + 1, 1.0 / m);
    for (std::size_t k = 0; k <= steps; ++k) rule.nodes[k] = static_cast<double>(k) / m;
    rule.weights.front() = 0.5 / m;
    rule.weights.back() = 0.5 / m;
  } else {
    rule.nodes.resize(steps);
    rule.weights.assign(steps, 1.0 / m);
    for (std::size_t k = 0; k < steps; ++k) rule.nodes[k] = (static_cast<double>(k) + 0.5) / m;
  }
  return rule;
}

AttributionMap integrated_gradients(const ModelFunction& m, const PathSpec& path) {
  const auto& x = path.target;
  const auto& xb = path.baseline;
  const DeltaMatrix dx = delta(x, xb);
  if (x.shape() != m.input_shape()) {
    throw Error(ErrorCode::ShapeMismatch, "segment shape does not match the model input");
  }
  const QuadratureRule rule = quadrature_rule(path.scheme, path.steps);
  const std::size_t n_nodes = rule.nodes.size();

  Matrix avg(x.leads(), x.samples());
  auto acc = avg.flat();
  auto base = xb.data().flat();
  auto d = dx.data.flat();

  std::vector<Matrix> block(std::min(kNodeBlock, n_nodes));
  for (std::size_t start = 0; start < n_nodes; start += kNodeBlock) {
    const std::size_t count = std::min(kNodeBlock, n_nodes - start);
    parallel_for(count, [&](std::size_t j) {
      const double alpha = rule.nodes[start + j];
      Matrix point(x.leads(), x.samples());
      auto p = point.flat();
      for (std::size_t k = 0; k < p.size(); ++k) p[k] = base[k] + alpha * d[k];
      block[j] = m.evaluate_gradient(point);
    });
    for (std::size_t j = 0; j < count; ++j) {
      if (!block[j].all_finite()) {
        throw Error(ErrorCode::NonFiniteGradient,
                    "gradient is not finite at alpha = " + format_double(rule.nodes[start + j]));
      }
      const double w = rule.weights[start + j];
      auto g = block[j].flat();
      for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += w * g[k];
    }
  }

  AttributionMap out;
  out.scores = Matrix(x.leads(), x.samples());
  auto s = out.scores.flat();
  double total = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    s[k] = d[k] * acc[k];
    total += s[k];
  }
  out.f_target = m.evaluate(x.data());
  out.f_baseline = m.evaluate(xb.data());
  if (!std::isfinite(out.f_target) || !std::isfinite(out.f_baseline)) {
    throw Error(ErrorCode::NonFiniteGradient, "model output is not finite at a path end point");
  }
  out.completeness_residual = (out.f_target - out.f_baseline) - total;
  out.steps_used = path.steps;
  out.scheme = path.scheme;
  out.path_gradient = std::move(avg);
  out.lead_names = x.lead_names();
  return out;
}

double relative_residual(const AttributionMap& a) {
  return std::abs(a.completeness_residual) / std::max(1.0, std::abs(a.delta_f()));
}

bool completeness_check(const AttributionMap& a, double rel_tol) {
  return std::abs(a.completeness_residual) <= rel_tol * std::max(1.0, std::abs(a.delta_f()));
}

}  // namespace shiftig
