#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "shiftig/attribution.hpp"
#include "shiftig/matrix.hpp"
#include "shiftig/model.hpp"

namespace shiftig {

inline constexpr double kDegeneracyEpsilon = 1e-9;
inline constexpr double kDefaultRegimeThreshold = 0.05;

// Pairwise lead alignment W: symmetric, zero diagonal.
struct AlignmentMatrix {
  Matrix w;
  std::size_t steps_used = 0;

  std::size_t leads() const { return w.rows(); }
  // Sum over unique pairs i < j.
  double pair_sum() const;
};

struct EdgeScoreMatrix {
  Matrix e;
  double lambda = 0.0;
  double delta_f = 0.0;

  double pair_sum() const;
};

enum class Regime { positive, negative, near_zero };

std::string to_string(Regime r);
Regime regime_from_string(const std::string& s);

struct RegimeLabelMatrix {
  std::vector<std::vector<Regime>> labels;
  double threshold = 0.0;
};

// W_ij = integral over alpha of <G_i - G_j, dX_i - dX_j>. Runs the same path
// integral as integrated_gradients.
AlignmentMatrix alignment_scores(const ModelFunction& m, const PathSpec& path);

// Reuses the path-averaged gradient of an existing attribution so W and IG
// come from one set of gradient evaluations. Quadrature is linear, so the
// integral of the inner product equals the inner product with the averaged
// gradient.
AlignmentMatrix alignment_scores(const AttributionMap& a, const DeltaMatrix& dx);

// lambda = delta_f / sum_{i<j} W, E = lambda W. Throws DegenerateAlignment
// when |sum W| <= kDegeneracyEpsilon * max |W| (including all-zero W).
EdgeScoreMatrix edge_scores(const AlignmentMatrix& w, double f_target, double f_baseline);

// Throws InvalidThreshold unless 0 < threshold_frac < 1.
RegimeLabelMatrix classify_regimes(const AlignmentMatrix& w,
                                   double threshold_frac = kDefaultRegimeThreshold);

// Unordered pair (i, j), i < j, with the smallest |W_ij|; first in
// lexicographic order on ties.
std::pair<std::size_t, std::size_t> complementary_pair(const AlignmentMatrix& w);

}  // namespace shiftig
