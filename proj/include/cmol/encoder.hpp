#pragma once

#include "cmol/circuit.hpp"
#include "cmol/cnf.hpp"
#include "cmol/fabric.hpp"
#include "cmol/placement.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace cmol {

/*! \brief Placement restrictions by gate name.
 *
 * `must[g]` lists the only cells g may use, `forbid[g]` cells it may not.
 * Names of output signals resolve to the gate driving that output.  The key
 * `*` applies to every gate that has no entry of its own on that side.
 */
struct PinSet {
  std::map<std::string, std::set<Coord>> must;
  std::map<std::string, std::set<Coord>> forbid;

  /// Throws InputError on empty must-sets or must/forbid overlap.
  void check() const;
};

nlohmann::json pins_to_json(const PinSet& pins);
PinSet pins_from_json(const nlohmann::json& doc);

/// Resolves a pin name to a placeable gate of `circuit`; throws InputError.
GateId resolve_pin_gate(const Circuit& circuit, const std::string& name);

/// Cell sets per placeable gate for one side of a PinSet, with `*` expanded.
std::map<GateId, std::set<Coord>> resolve_pins(const Circuit& circuit,
                                               const std::map<std::string, std::set<Coord>>& side);

/*! \brief Generic cell-assignment instance.
 *
 * Rows are gates, columns are cells.  Both the full-fabric encoding and the
 * local problems of reconfiguration are expressed in this form.  Indices
 * below refer to positions in `gates` / `cells`.
 */
struct AssignmentProblem {
  std::vector<GateId> gates;
  std::vector<Coord> cells;
  std::vector<std::vector<std::size_t>> fanin;     ///< in-problem drivers per gate
  std::vector<bool> primary;                       ///< gate has no fanin at all in its circuit
  std::vector<std::vector<std::size_t>> domain;    ///< input domain per cell
  std::vector<bool> dead;                          ///< per cell
  std::vector<std::uint8_t> allowed;               ///< gates x cells, 0 = pinned off
  std::vector<std::pair<std::size_t, std::size_t>> stuck_closed;  ///< (driver, receiver) cells
  /// Extra clauses of positive assignment literals (gate index, cell index).
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> required;

  bool is_allowed(std::size_t g, std::size_t c) const { return allowed[g * cells.size() + c] != 0; }
};

/// Builds the problem for placing every gate of a NOR/NOT circuit anywhere on
/// the fabric, subject to `pins`.  Throws InputError for AND/OR/DFF gates or
/// unknown pin names.
AssignmentProblem make_problem(const Circuit& circuit, const Fabric& fabric, const PinSet& pins);

/// (gate, cell) pairs are either live CNF variables or constants.
class VarMap {
public:
  VarMap() = default;
  VarMap(std::vector<GateId> gates, std::vector<Coord> cells);

  const std::vector<GateId>& gates() const { return gates_; }
  const std::vector<Coord>& cells() const { return cells_; }
  int num_vars() const { return static_cast<int>(pairs_.size()); }

  /// Variable index, or 0 when the pair is a constant.
  int var(std::size_t g, std::size_t c) const { return slot(g, c) > 0 ? slot(g, c) : 0; }
  std::optional<bool> constant(std::size_t g, std::size_t c) const;
  std::pair<std::size_t, std::size_t> pair_of(int var) const { return pairs_.at(static_cast<std::size_t>(var) - 1); }

  int make_var(std::size_t g, std::size_t c);
  void set_constant(std::size_t g, std::size_t c, bool value);

private:
  int slot(std::size_t g, std::size_t c) const { return slots_[g * cells_.size() + c]; }

  static constexpr int kFalse = 0;
  static constexpr int kTrue = -1;
  std::vector<GateId> gates_;
  std::vector<Coord> cells_;
  std::vector<int> slots_;
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
};

/// Clause counts per constraint family.
struct ClauseCounts {
  std::size_t cell_mutex = 0;    ///< each gate on at most one cell
  std::size_t placed = 0;        ///< each gate on at least one cell
  std::size_t gate_mutex = 0;    ///< at most one gate per cell
  std::size_t domain = 0;        ///< connected gates inside input domains
  std::size_t stuck_closed = 0;  ///< receiver of a closed device needs a fanin at the driver
  std::size_t required = 0;

  std::size_t total() const { return cell_mutex + placed + gate_mutex + domain + stuck_closed + required; }
};

struct Diagnostic {
  std::string code;
  std::string message;
};

struct Encoding {
  CnfFormula cnf;
  VarMap vars;
  ClauseCounts before_propagation;
  ClauseCounts after_propagation;
  std::size_t constants = 0;
  bool trivially_unsat = false;
  std::vector<Diagnostic> diagnostics;
};

/*! \brief Pairwise CNF encoding with constant propagation.
 *
 * Pinned-off pairs, pairs on dead cells and primary gates on receivers of
 * stuck-closed devices are constants.  Every clause of every family is
 * enumerated, constants are substituted, satisfied clauses are dropped and
 * false literals removed.  If a clause becomes empty, or there are more
 * gates than live cells, the formula is replaced by a single empty clause
 * and a diagnostic explains why.
 */
Encoding encode_problem(const AssignmentProblem& problem);

/// `make_problem` followed by `encode_problem`.
Encoding encode(const Circuit& circuit, const Fabric& fabric, const PinSet& pins);

/// Cell index per problem gate.  Throws InternalError unless exactly one
/// pair per gate is true.
std::vector<std::size_t> decode_indices(const Model& model, const VarMap& vars);

/// Placement of every gate in `vars` (sized for `num_gates` circuit gates).
Placement decode(const Model& model, const VarMap& vars, std::size_t num_gates);

} // namespace cmol
