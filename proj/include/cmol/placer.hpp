#pragma once

#include "cmol/circuit.hpp"
#include "cmol/encoder.hpp"
#include "cmol/fabric.hpp"
#include "cmol/placement.hpp"
#include "cmol/simulate.hpp"
#include "cmol/solver.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace cmol {

struct PlaceOptions {
  SolverOptions solver;
  /// Shell command of an external DIMACS solver; empty = embedded solver.
  std::string external_solver;
};

struct PlaceResult {
  SolveStatus status = SolveStatus::TimedOut;
  std::optional<Placement> placement;  ///< set iff Sat
  int num_vars = 0;
  std::size_t num_clauses = 0;
  ClauseCounts before_propagation;
  ClauseCounts after_propagation;
  std::vector<Diagnostic> diagnostics;
  SolveStats solver;
  double encode_seconds = 0.0;
};

/// Encodes, solves, decodes and validates.  A Sat placement that fails
/// validation throws InternalError.
PlaceResult place(const Circuit& circuit, const Fabric& fabric, const PinSet& pins, const PlaceOptions& options = {});

/// Solves an arbitrary assignment problem; returns the cell index per gate
/// or nullopt.  `status` receives the verdict.
std::optional<std::vector<std::size_t>> solve_problem(const AssignmentProblem& problem, const PlaceOptions& options,
                                                      SolveStatus& status, SolveStats* stats = nullptr);

struct Violation {
  std::string rule;     ///< unplaced, out_of_bounds, injective, domain, pin_must, pin_forbid,
                        ///< dead_cell, stuck_closed_input, stuck_closed_fanin
  std::string gate;
  std::vector<Coord> cells;
  std::string message;
};

nlohmann::json violation_to_json(const Violation& v);

/*! \brief Independent structural check of a placement.
 *
 * Every placeable gate must sit on its own in-bounds, live cell, every fanin
 * must lie in the input domain of its sink, pins must hold and stuck-closed
 * devices must either feed an empty cell or connect a real fanin.
 */
std::vector<Violation> validate(const Circuit& circuit, const Fabric& fabric, const PinSet& pins,
                                const Placement& placement);

/*! \brief Evaluates the programmed fabric.
 *
 * Each occupied cell outputs the NOR of the cells wired to its input: fanin
 * cells that lie in its input domain plus the drivers of stuck-closed
 * devices.  Input cells carry the stimulus and unoccupied cells drive 1.
 * Rows follow `circuit.outputs()`.  Throws InputError for unplaced gates or a
 * feedback loop created by stuck-closed devices.
 */
std::vector<std::vector<std::uint64_t>> simulate_fabric(const Circuit& circuit, const Fabric& fabric,
                                                        const Placement& placement, const Patterns& stimulus);

/// Compares the fabric against `reference` (matched by input order), using
/// every vector when there are at most `exhaustive_limit` inputs.
EquivalenceReport check_fabric(const Circuit& circuit, const Fabric& fabric, const Placement& placement,
                               const Circuit& reference, std::size_t exhaustive_limit = 16,
                               std::size_t random_vectors = 10000, std::uint64_t seed = 1);

/// Flip-flop carving, sweep and NOR conversion.
Circuit prepare_circuit(const Circuit& raw);

/// Near-square region with at least 1.1x the gate count in cells and enough
/// perimeter cells for `io` pins.
std::pair<int, int> default_region(std::size_t gates, std::size_t io);

/// Pins every input and every output driver to the perimeter of a w x h array.
PinSet perimeter_pins(const Circuit& circuit, int width, int height);

struct Design {
  Circuit circuit;
  Fabric fabric;
  PinSet pins;
  Placement placement;
};

/// `{"cells":{"gate":[x,y]},"fabric":{...},"circuit":{...},"pins":{...}}`
nlohmann::json design_to_json(const Design& design);
Design design_from_json(const nlohmann::json& doc);

} // namespace cmol
