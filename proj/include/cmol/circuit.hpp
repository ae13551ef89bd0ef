#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cmol {

using GateId = std::uint32_t;

/// Gate kinds of the netlist IR.  `Dff` only appears between parsing and
/// sequential carving; every other stage is purely combinational.
enum class GateKind : std::uint8_t { Input, Output, And, Or, Not, Nor, Dff };

std::string_view to_string(GateKind kind);
std::optional<GateKind> gate_kind_from_string(std::string_view text);

struct Gate {
  GateId id = 0;
  GateKind kind = GateKind::Input;
  std::vector<GateId> fanin;
  std::string name;
};

/*! \brief Directed gate graph.
 *
 * Gates are stored densely by id.  OUTPUT gates are markers with exactly one
 * fanin (the driver); they carry the output signal name and are never placed.
 * Every other gate has a unique name which `find` resolves.
 */
class Circuit {
public:
  /// Appends a gate and returns its id.  INPUT and OUTPUT gates are also
  /// appended to `inputs()` / `outputs()`.  Non-output names must be unique.
  GateId add_gate(GateKind kind, std::vector<GateId> fanin, std::string name);

  /// Returns `base` if no non-output gate uses it yet, else `base_1`, `base_2`...
  std::string unique_name(std::string_view base) const;

  /// Rewires a gate.  Only meant for builders that need forward references
  /// (flip-flop feedback); call `check()` afterwards.
  void set_fanin(GateId id, std::vector<GateId> fanin);

  const Gate& gate(GateId id) const { return gates_.at(id); }
  std::span<const Gate> gates() const { return gates_; }
  std::size_t size() const { return gates_.size(); }
  const std::vector<GateId>& inputs() const { return inputs_; }
  const std::vector<GateId>& outputs() const { return outputs_; }

  std::optional<GateId> find(std::string_view name) const;
  std::size_t count(GateKind kind) const;

  /// Gates that have to occupy a fabric cell: everything except OUTPUT markers.
  std::vector<GateId> placeable_gates() const;

  std::vector<std::vector<GateId>> fanouts() const;

  /// Topological order over all gates; flip-flop fanin edges are ignored, so
  /// sequential circuits are ordered by their combinational part.
  /// Throws InputError naming a gate on the cycle if one exists.
  std::vector<GateId> topological_order() const;

  /// Checks arity, reference and acyclicity invariants; throws InputError.
  void check() const;

private:
  std::vector<Gate> gates_;
  std::vector<GateId> inputs_;
  std::vector<GateId> outputs_;
  std::unordered_map<std::string, GateId> by_name_;
};

} // namespace cmol
