#pragma once

// Independent reference computations for the unit and acceptance suites.
// Nothing here calls into the code paths it is used to check.

#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "shiftig/attribution.hpp"
#include "shiftig/matrix.hpp"
#include "shiftig/model.hpp"
#include "shiftig/signal.hpp"

namespace oracle {

using shiftig::Matrix;

// F(x) = sum x^2.
class SquareModel final : public shiftig::ModelFunction {
 public:
  explicit SquareModel(shiftig::Shape shape) : shape_(shape) {}
  shiftig::Shape input_shape() const override { return shape_; }
  double evaluate(const Matrix& x) const override {
    double s = 0.0;
    for (double v : x.flat()) s += v * v;
    return s;
  }
  Matrix evaluate_gradient(const Matrix& x) const override {
    Matrix g(x.rows(), x.cols());
    for (std::size_t k = 0; k < g.size(); ++k) g.flat()[k] = 2.0 * x.flat()[k];
    return g;
  }

 private:
  shiftig::Shape shape_;
};

// Explicit circulant matrix rows B[p][k] = b[(k + p) mod T], n = B t.
inline std::vector<double> circulant_products(const std::vector<double>& b,
                                              const std::vector<double>& t, std::size_t period) {
  const std::size_t len = b.size();
  std::vector<std::vector<double>> rows(period, std::vector<double>(len));
  for (std::size_t p = 0; p < period; ++p)
    for (std::size_t k = 0; k < len; ++k) rows[p][k] = b[(k + p) % len];
  std::vector<double> n(period, 0.0);
  for (std::size_t p = 0; p < period; ++p)
    for (std::size_t k = 0; k < len; ++k) n[p] += rows[p][k] * t[k];
  return n;
}

inline std::size_t brute_force_shift(const std::vector<double>& b, const std::vector<double>& t,
                                     std::size_t period) {
  const auto n = circulant_products(b, t, period);
  std::size_t best = 0;
  for (std::size_t p = 0; p < period; ++p)
    if (std::fabs(n[p]) > std::fabs(n[best])) best = p;
  return best;
}

// Literal W_ij: for each node alpha, evaluate G at the path point and add
// weight * <G_i - G_j, dX_i - dX_j>.
inline Matrix literal_alignment(const shiftig::ModelFunction& m, const Matrix& target,
                                const Matrix& baseline, std::size_t steps, bool trapezoid) {
  const std::size_t c = target.rows(), t = target.cols();
  std::vector<double> nodes, weights;
  if (trapezoid) {
    for (std::size_t k = 0; k <= steps; ++k) {
      nodes.push_back(double(k) / double(steps));
      weights.push_back((k == 0 || k == steps ? 0.5 : 1.0) / double(steps));
    }
  } else {
    for (std::size_t k = 0; k < steps; ++k) {
      nodes.push_back((double(k) + 0.5) / double(steps));
      weights.push_back(1.0 / double(steps));
    }
  }
  Matrix w(c, c);
  for (std::size_t q = 0; q < nodes.size(); ++q) {
    Matrix point(c, t);
    for (std::size_t i = 0; i < c; ++i)
      for (std::size_t s = 0; s < t; ++s)
        point(i, s) = baseline(i, s) + nodes[q] * (target(i, s) - baseline(i, s));
    const Matrix g = m.evaluate_gradient(point);
    for (std::size_t i = 0; i < c; ++i) {
      for (std::size_t j = 0; j < c; ++j) {
        if (i == j) continue;
        double inner = 0.0;
        for (std::size_t s = 0; s < t; ++s) {
          const double dgi = g(i, s) - g(j, s);
          const double ddx = (target(i, s) - baseline(i, s)) - (target(j, s) - baseline(j, s));
          inner += dgi * ddx;
        }
        w(i, j) += weights[q] * inner;
      }
    }
  }
  return w;
}

inline Matrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng,
                            double lo = 0.0, double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  Matrix m(rows, cols);
  for (double& v : m.flat()) v = d(rng);
  return m;
}

inline shiftig::LeadTimeMatrix random_segment(std::size_t rows, std::size_t cols,
                                              std::mt19937_64& rng) {
  return shiftig::LeadTimeMatrix(random_matrix(rows, cols, rng), 512.0);
}

}  // namespace oracle
