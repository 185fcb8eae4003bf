#pragma once

#include <string>

#include "peg/solver.hpp"

namespace peg {

/// Renders the curve, one polygon per orbit with its diagonals, and orbit
/// labels with signs. Degenerate families are drawn as a shaded vertex
/// locus. The frame is the curve bounding box plus a 10% margin with the
/// y-axis flipped to mathematical orientation; stroke colors are keyed by
/// orbit sign.
std::string render_svg(const FourierCurve& curve, const SolveReport& report);

void write_svg(const FourierCurve& curve, const SolveReport& report, const std::string& path);

}  // namespace peg
