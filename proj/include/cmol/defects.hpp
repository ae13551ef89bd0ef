#pragma once

#include "cmol/fabric.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

namespace cmol {

struct InjectionConfig {
  double sigma = 3.0;
  std::optional<Coord> center;  ///< uniform over the fabric when absent
  std::uint64_t seed = 1;
  std::set<DefectKind> kinds{DefectKind::WireBreak, DefectKind::StuckOpen, DefectKind::StuckClosed,
                             DefectKind::DeadCell};
};

/// Spatial Gaussian density at (x, y) around `center`.
double defect_pdf(double x, double y, Coord center, double sigma);

struct Injection {
  Fabric fabric;
  std::vector<DefectSpec> defects;
  Coord center;
};

/*! \brief Samples defects around a center.
 *
 * Kinds are visited in the order DeadCell, WireBreak, StuckOpen, StuckClosed.
 * Cell sites run in row-major order (a WireBreak site tries the input wire,
 * then the output wire); device sites run by receiving cell in row-major
 * order, then by driver in domain order, and use the receiver's position.
 * One uniform draw per site; a defect is injected when the draw is at most
 * the density there.  A WireBreak then draws its kept fraction from
 * (0.2, 0.8).  All randomness comes from one stream seeded by `seed`, and
 * when no center is given it is drawn first.
 */
Injection inject(const Fabric& fabric, const InjectionConfig& config);

} // namespace cmol
