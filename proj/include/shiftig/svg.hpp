#pragma once

#include <iosfwd>

#include "shiftig/matrix.hpp"
#include "shiftig/signal.hpp"

namespace shiftig {

// One band per lead: per-sample cells on a blue-white-red scale symmetric
// about zero, with the lead trace drawn on top.
void write_heatmap_svg(std::ostream& out, const LeadTimeMatrix& signal, const Matrix& scores);

}  // namespace shiftig
