#pragma once

#include "cmol/placer.hpp"

#include <string>

namespace cmol {

/// Grid diagram of a placed design: one square per cell, gate names inside,
/// a red output pin at the lower left and a blue input pin at the upper right
/// of every occupied cell, and a line per net from driver to receiver.  Dead
/// cells are shaded.  Output is byte-stable for a given design.
std::string render_svg(const Design& design);

/// Text version: the grid (top row first, `.` empty, `#` dead, `name#` a gate
/// on a dead cell) followed by one line per net.
std::string render_ascii(const Design& design);

} // namespace cmol
