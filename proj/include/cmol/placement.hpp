#pragma once

#include "cmol/circuit.hpp"
#include "cmol/fabric.hpp"

#include <map>
#include <optional>
#include <vector>

namespace cmol {

/// Partial map from gate id to fabric cell.  OUTPUT markers are never placed.
class Placement {
public:
  Placement() = default;
  explicit Placement(std::size_t num_gates) : cells_(num_gates) {}

  std::size_t size() const { return cells_.size(); }
  std::optional<Coord> cell(GateId g) const { return g < cells_.size() ? cells_[g] : std::nullopt; }
  void assign(GateId g, Coord c) {
    if (g >= cells_.size())
      cells_.resize(g + 1);
    cells_[g] = c;
  }
  void clear(GateId g) {
    if (g < cells_.size())
      cells_[g].reset();
  }

  /// Gate occupying each cell.  With a non-injective placement the lowest
  /// gate id wins; `validate` reports the clash.
  std::map<Coord, GateId> occupancy() const {
    std::map<Coord, GateId> result;
    for (GateId g = 0; g < cells_.size(); ++g)
      if (cells_[g])
        result.emplace(*cells_[g], g);
    return result;
  }

  bool operator==(const Placement&) const = default;

private:
  std::vector<std::optional<Coord>> cells_;
};

} // namespace cmol
