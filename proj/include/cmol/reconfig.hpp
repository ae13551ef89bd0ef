#pragma once

#include "cmol/circuit.hpp"
#include "cmol/encoder.hpp"
#include "cmol/fabric.hpp"
#include "cmol/placement.hpp"
#include "cmol/placer.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace cmol {

struct Conflict {
  GateId gate;
  Coord cell;
  std::string rule;  ///< dead_cell, domain, stuck_closed_input, stuck_closed_fanin
};

/// Gates whose current cell clashes with the fabric's defects.  A broken edge
/// flags both of its endpoints.
std::vector<Conflict> find_conflicts(const Circuit& circuit, const Fabric& fabric, const Placement& placement);

/// Mean conflict position, rounded to the nearest cell with ties going down.
Coord conflict_center(const std::vector<Conflict>& conflicts);

/// Inclusive rectangle of cells.
struct Region {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  bool contains(Coord c) const { return c.x >= x0 && c.x <= x1 && c.y >= y0 && c.y <= y1; }
  bool operator==(const Region&) const = default;
};

/// Square of half-width `half` around `center`, clipped to the fabric.
Region region_around(Coord center, int half, const Fabric& fabric);

/*! \brief Re-placement problem for the gates inside `region`.
 *
 * Every gate on a cell of the region is freed; all others stay where they
 * are.  Nets and closed devices that cross the region boundary become
 * restrictions on the freed gates: cells that a fixed neighbour cannot reach
 * are ruled out, and a fixed receiver of a closed device whose driver lies in
 * the region needs one of its fanins placed there.
 */
AssignmentProblem make_local_problem(const Circuit& circuit, const Fabric& fabric, const PinSet& pins,
                                     const Placement& placement, const Region& region);

struct ReconfigOptions {
  PlaceOptions place;
  int initial_half = 1;          ///< 3x3 start window
  double budget_seconds = 0.0;   ///< 0 = unlimited
  std::size_t max_iterations = 10000;
};

struct ReconfigAttempt {
  std::size_t iteration = 0;
  Coord center;
  Region region;
  std::size_t conflicts = 0;
  std::size_t freed_gates = 0;
  std::size_t cells = 0;
  bool had_conflicted_gate = false;
  SolveStatus status = SolveStatus::Unsat;
  SolveStats stats;
};

nlohmann::json attempt_to_json(const ReconfigAttempt& a);

struct ReconfigResult {
  bool success = false;
  Placement placement;                 ///< repaired placement (partial progress on failure)
  std::vector<ReconfigAttempt> attempts;
  std::size_t iterations = 0;          ///< successful local repairs
  double solver_seconds = 0.0;         ///< cumulative over every solver call
  std::string failure;                 ///< empty on success
  std::vector<Conflict> remaining;
};

/*! \brief Local, growing-region repair.
 *
 * Repeats until no conflict is left: pick the conflicts' center, try a small
 * window around it and grow it by one cell per side until the local problem
 * is satisfiable.  Fails when the window already spans the fabric or the
 * budget runs out.
 */
ReconfigResult reconfigure(const Circuit& circuit, const Fabric& fabric, const PinSet& pins, const Placement& placement,
                           const ReconfigOptions& options = {});

} // namespace cmol
