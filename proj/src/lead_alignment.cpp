#include "shiftig/lead_alignment.hpp"

#include <cmath>

#include "shiftig/error.hpp"

namespace shiftig {

namespace {

double upper_sum(const Matrix& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j) s += m(i, j);
  return s;
}

double upper_max_abs(const Matrix& m) {
  double v = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j) v = std::max(v, std::abs(m(i, j)));
  return v;
}

}  // namespace

double AlignmentMatrix::pair_sum() const { return upper_sum(w); }
double EdgeScoreMatrix::pair_sum() const { return upper_sum(e); }

std::string to_string(Regime r) {
  switch (r) {
    case Regime::positive: return "positive";
    case Regime::negative: return "negative";
    case Regime::near_zero: return "near_zero";
  }
  return "near_zero";
}

Regime regime_from_string(const std::string& s) {
  if (s == "positive") return Regime::positive;
  if (s == "negative") return Regime::negative;
  if (s == "near_zero") return Regime::near_zero;
  throw Error(ErrorCode::ParseError, "unknown regime label '" + s + "'");
}

AlignmentMatrix alignment_scores(const AttributionMap& a, const DeltaMatrix& dx) {
  const Matrix& g = a.path_gradient;
  const Matrix& d = dx.data;
  if (g.shape() != d.shape()) {
    throw Error(ErrorCode::ShapeMismatch, "attribution and deviation shapes differ");
  }
  const std::size_t c = d.rows();
  if (c < 2) throw Error(ErrorCode::ShapeMismatch, "alignment needs at least two leads");
  AlignmentMatrix out{Matrix(c, c), a.steps_used};
  for (std::size_t i = 0; i < c; ++i) {
    for (std::size_t j = i + 1; j < c; ++j) {
      auto gi = g.row(i), gj = g.row(j);
      auto di = d.row(i), dj = d.row(j);
      double s = 0.0;
      for (std::size_t t = 0; t < d.cols(); ++t) s += (gi[t] - gj[t]) * (di[t] - dj[t]);
      out.w(i, j) = s;
      out.w(j, i) = s;
    }
  }
  return out;
}

AlignmentMatrix alignment_scores(const ModelFunction& m, const PathSpec& path) {
  if (path.target.leads() < 2) {
    throw Error(ErrorCode::ShapeMismatch, "alignment needs at least two leads");
  }
  const AttributionMap a = integrated_gradients(m, path);
  return alignment_scores(a, delta(path.target, path.baseline));
}

EdgeScoreMatrix edge_scores(const AlignmentMatrix& w, double f_target, double f_baseline) {
  const double total = w.pair_sum();
  const double scale = upper_max_abs(w.w);
  if (scale == 0.0 || std::abs(total) <= kDegeneracyEpsilon * scale) {
    throw Error(ErrorCode::DegenerateAlignment,
                "pairwise alignment scores cancel; lambda is undefined");
  }
  EdgeScoreMatrix out;
  out.delta_f = f_target - f_baseline;
  out.lambda = out.delta_f / total;
  out.e = Matrix(w.leads(), w.leads());
  for (std::size_t i = 0; i < w.leads(); ++i)
    for (std::size_t j = 0; j < w.leads(); ++j) out.e(i, j) = out.lambda * w.w(i, j);
  return out;
}

RegimeLabelMatrix classify_regimes(const AlignmentMatrix& w, double threshold_frac) {
  if (!(threshold_frac > 0.0 && threshold_frac < 1.0)) {
    throw Error(ErrorCode::InvalidThreshold, "threshold fraction must lie in (0, 1)");
  }
  const std::size_t c = w.leads();
  RegimeLabelMatrix out;
  out.threshold = threshold_frac * upper_max_abs(w.w);
  out.labels.assign(c, std::vector<Regime>(c, Regime::near_zero));
  for (std::size_t i = 0; i < c; ++i) {
    for (std::size_t j = i + 1; j < c; ++j) {
      const double v = w.w(i, j);
      Regime r = Regime::near_zero;
      if (std::abs(v) > out.threshold) r = v > 0.0 ? Regime::positive : Regime::negative;
      out.labels[i][j] = r;
      out.labels[j][i] = r;
    }
  }
  return out;
}

std::pair<std::size_t, std::size_t> complementary_pair(const AlignmentMatrix& w) {
  const std::size_t c = w.leads();
  if (c < 2) throw Error(ErrorCode::ShapeMismatch, "need at least two leads");
  std::pair<std::size_t, std::size_t> best{0, 1};
  double best_v = std::abs(w.w(0, 1));
  for (std::size_t i = 0; i < c; ++i) {
    for (std::size_t j = i + 1; j < c; ++j) {
      const double v = std::abs(w.w(i, j));
      if (v < best_v) {
        best_v = v;
        best = {i, j};
      }
    }
  }
  return best;
}

}  // namespace shiftig
