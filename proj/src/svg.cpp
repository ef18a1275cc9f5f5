#include "shiftig/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "shiftig/error.hpp"

namespace shiftig {

namespace {

constexpr double kRowHeight = 80.0;
constexpr double kLabelWidth = 40.0;
constexpr double kPlotWidth = 1200.0;

std::string color(double v) {
  // v in [-1, 1]; white at 0, red for positive, blue for negative.
  const double a = std::clamp(std::abs(v), 0.0, 1.0);
  const int r0 = v >= 0 ? 178 : 33, g0 = v >= 0 ? 24 : 102, b0 = v >= 0 ? 43 : 172;
  auto mix = [a](int c) { return static_cast<int>(std::lround(255.0 + a * (c - 255.0))); };
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", mix(r0), mix(g0), mix(b0));
  return buf;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

void write_heatmap_svg(std::ostream& out, const LeadTimeMatrix& signal, const Matrix& scores) {
  if (scores.shape() != signal.shape()) {
    throw Error(ErrorCode::ShapeMismatch, "scores and signal shapes differ");
  }
  const std::size_t c = signal.leads();
  const std::size_t t = signal.samples();
  double max_abs = 0.0;
  for (double v : scores.flat()) max_abs = std::max(max_abs, std::abs(v));
  const double scale = max_abs > 0.0 ? 1.0 / max_abs : 0.0;
  const double dx = kPlotWidth / static_cast<double>(t);

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kLabelWidth + kPlotWidth)
      << "\" height=\"" << num(kRowHeight * static_cast<double>(c)) << "\">\n";
  for (std::size_t i = 0; i < c; ++i) {
    const double top = kRowHeight * static_cast<double>(i);
    out << "<g>\n<text x=\"4\" y=\"" << num(top + kRowHeight / 2) << "\" font-size=\"14\">"
        << signal.lead_names()[i] << "</text>\n";
    for (std::size_t k = 0; k < t; ++k) {
      out << "<rect x=\"" << num(kLabelWidth + dx * static_cast<double>(k)) << "\" y=\""
          << num(top) << "\" width=\"" << num(dx + 0.01) << "\" height=\"" << num(kRowHeight)
          << "\" fill=\"" << color(scores(i, k) * scale) << "\"/>\n";
    }
    auto lead = signal.lead(i);
    auto [lo, hi] = std::minmax_element(lead.begin(), lead.end());
    const double range = *hi - *lo > 0.0 ? *hi - *lo : 1.0;
    out << "<path fill=\"none\" stroke=\"black\" stroke-width=\"1\" d=\"";
    for (std::size_t k = 0; k < t; ++k) {
      const double y = top + kRowHeight * (0.9 - 0.8 * (lead[k] - *lo) / range);
      out << (k == 0 ? "M" : " L") << num(kLabelWidth + dx * (static_cast<double>(k) + 0.5))
          << ',' << num(y);
    }
    out << "\"/>\n</g>\n";
  }
  out << "</svg>\n";
}

}  // namespace shiftig
