#pragma once

// Shared fixtures for the unit tests and the acceptance runner: random
// instance generators and a brute-force placement oracle that shares no code
// with the encoder or the validator.

#include "cmol/circuit.hpp"
#include "cmol/encoder.hpp"
#include "cmol/fabric.hpp"
#include "cmol/placement.hpp"
#include "cmol/rng.hpp"

#include <algorithm>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace cmol::fixtures {

inline std::filesystem::path bench_dir() { return CMOL_BENCH_DIR; }

/// Random NOR/NOT circuit with `inputs` inputs and `logic` further gates.
/// Every logic gate draws 1-3 distinct fanins from earlier gates; the last
/// gate and a random subset of the others are outputs.
inline Circuit random_nor_circuit(Rng& rng, std::size_t inputs, std::size_t logic) {
  Circuit c;
  std::vector<GateId> pool;
  for (std::size_t i = 0; i < inputs; ++i)
    pool.push_back(c.add_gate(GateKind::Input, {}, "i" + std::to_string(i)));
  std::vector<GateId> made;
  for (std::size_t k = 0; k < logic; ++k) {
    const std::size_t arity = std::min<std::size_t>(pool.size(), 1 + rng.below(3));
    std::vector<GateId> fanin;
    while (fanin.size() < arity) {
      const GateId f = pool[rng.below(pool.size())];
      if (std::find(fanin.begin(), fanin.end(), f) == fanin.end())
        fanin.push_back(f);
    }
    const auto kind = arity == 1 && rng.coin() ? GateKind::Not : GateKind::Nor;
    const GateId id = c.add_gate(kind, fanin, "g" + std::to_string(k));
    pool.push_back(id);
    made.push_back(id);
  }
  for (std::size_t k = 0; k < made.size(); ++k)
    if (k + 1 == made.size() || rng.coin(0.3))
      c.add_gate(GateKind::Output, {made[k]}, "o" + std::to_string(k));
  return c;
}

/// Number of fanin edges between placeable gates, counted per distinct driver.
inline std::size_t count_edges(const Circuit& c) {
  std::size_t edges = 0;
  for (const Gate& g : c.gates())
    if (g.kind != GateKind::Output)
      edges += std::set<GateId>(g.fanin.begin(), g.fanin.end()).size();
  return edges;
}

/// Random defect that is legal on `f` (devices only between existing pairs).
inline std::optional<DefectSpec> random_defect(Rng& rng, const Fabric& f) {
  const auto cells = f.cells();
  DefectSpec d;
  d.kind = static_cast<DefectKind>(rng.below(4));
  d.a = cells[rng.below(cells.size())];
  if (d.kind == DefectKind::WireBreak) {
    d.wire = rng.coin() ? Wire::Input : Wire::Output;
    d.break_fraction = rng.uniform(0.1, 0.9);
  } else if (d.kind == DefectKind::StuckOpen || d.kind == DefectKind::StuckClosed) {
    const Coord b = cells[rng.below(cells.size())];
    const auto base = f.base_input_domain(b);
    if (base.empty())
      return std::nullopt;
    d.b = b;
    d.a = base[rng.below(base.size())];
  }
  return d;
}

/// Fabric of at most max_w x max_h cells with a random radius, occasional
/// irregular domains and up to `max_defects` random defects.
inline Fabric random_fabric(Rng& rng, int max_w, int max_h, std::size_t max_defects) {
  const int w = 1 + static_cast<int>(rng.below(max_w));
  const int h = 1 + static_cast<int>(rng.below(max_h));
  const int r = 2 + static_cast<int>(rng.below(3));
  DomainOverrides overrides;
  if (rng.coin(0.3)) {
    for (int x = 0; x < w; ++x)
      for (int y = 0; y < h; ++y) {
        if (!rng.coin(0.5))
          continue;
        std::vector<Coord> dom;
        for (int u = 0; u < w; ++u)
          for (int v = 0; v < h; ++v)
            if (Coord{u, v} != Coord{x, y} && rng.coin(0.5))
              dom.push_back({u, v});
        overrides[{x, y}] = dom;
      }
  }
  Fabric f(w, h, r, overrides);
  const std::size_t n = rng.below(max_defects + 1);
  for (std::size_t i = 0; i < n; ++i)
    if (auto d = random_defect(rng, f))
      f = f.apply_defect(*d);
  return f;
}

/// Occasional must/forbid pins on named gates, never overlapping.
inline PinSet random_pins(Rng& rng, const Circuit& c, const Fabric& f) {
  PinSet pins;
  const auto cells = f.cells();
  for (GateId g : c.placeable_gates()) {
    if (rng.coin(0.2)) {
      std::set<Coord> must;
      for (Coord cell : cells)
        if (rng.coin(0.5))
          must.insert(cell);
      if (must.empty())
        must.insert(cells[rng.below(cells.size())]);
      pins.must[c.gate(g).name] = must;
    } else if (rng.coin(0.2)) {
      pins.forbid[c.gate(g).name] = {cells[rng.below(cells.size())]};
    }
  }
  return pins;
}

/*! \brief Exhaustive search over injective gate-to-cell maps.
 *
 * Rules straight from the architecture: live cells, pins by gate name,
 * every fanin inside its sink's input domain, and a gate on the receiver of
 * a closed device must have a fanin and one of them on the driver.
 */
inline std::optional<Placement> brute_force_place(const Circuit& c, const Fabric& f, const PinSet& pins) {
  const auto gates = c.placeable_gates();
  const auto cells = f.cells();
  std::vector<std::optional<Coord>> at(c.size());
  std::set<Coord> used;

  auto pinned_ok = [&](GateId g, Coord cell) {
    const auto& name = c.gate(g).name;
    if (auto it = pins.must.find(name); it != pins.must.end() && !it->second.contains(cell))
      return false;
    if (auto it = pins.forbid.find(name); it != pins.forbid.end() && it->second.contains(cell))
      return false;
    return true;
  };
  auto edges_ok = [&](GateId g) {
    const Gate& gate = c.gate(g);
    for (GateId fi : gate.fanin)
      if (at[fi] && !f.can_drive(*at[fi], *at[g]))
        return false;
    for (const Gate& other : c.gates())
      if (other.kind != GateKind::Output && at[other.id])
        for (GateId fi : other.fanin)
          if (fi == g && !f.can_drive(*at[g], *at[other.id]))
            return false;
    return true;
  };
  auto closed_ok = [&] {
    for (auto [a, b] : f.stuck_closed_pairs())
      for (GateId g : gates)
        if (at[g] == b) {
          const auto& fanin = c.gate(g).fanin;
          if (std::none_of(fanin.begin(), fanin.end(), [&](GateId fi) { return at[fi] == a; }))
            return false;
        }
    return true;
  };

  std::optional<Placement> found;
  auto search = [&](auto&& self, std::size_t k) -> bool {
    if (k == gates.size()) {
      if (!closed_ok())
        return false;
      Placement p(c.size());
      for (GateId g : gates)
        p.assign(g, *at[g]);
      found = p;
      return true;
    }
    const GateId g = gates[k];
    for (Coord cell : cells) {
      if (used.contains(cell) || f.is_dead(cell) || !pinned_ok(g, cell))
        continue;
      at[g] = cell;
      used.insert(cell);
      const bool done = edges_ok(g) && self(self, k + 1);
      used.erase(cell);
      at[g].reset();
      if (done)
        return true;
    }
    return false;
  };
  search(search, 0);
  return found;
}

/// Random two-level product-of-sums circuit: ORs over literals of the
/// inputs (one shared inverter per negated input), ANDs over >= 2 ORs.
inline Circuit random_pos(Rng& rng) {
  Circuit c;
  const std::size_t n = 2 + rng.below(5);
  std::vector<GateId> in, inv(n, 0);
  std::vector<bool> has_inv(n, false);
  for (std::size_t i = 0; i < n; ++i)
    in.push_back(c.add_gate(GateKind::Input, {}, "x" + std::to_string(i)));
  const std::size_t terms = 2 + rng.below(5);
  std::vector<GateId> ors;
  for (std::size_t t = 0; t < terms; ++t) {
    const std::size_t width = std::min<std::size_t>(n, 2 + rng.below(3));
    std::vector<std::size_t> vars;
    while (vars.size() < width) {
      const std::size_t v = rng.below(n);
      if (std::find(vars.begin(), vars.end(), v) == vars.end())
        vars.push_back(v);
    }
    std::vector<GateId> lits;
    for (std::size_t v : vars) {
      if (rng.coin()) {
        if (!has_inv[v]) {
          inv[v] = c.add_gate(GateKind::Not, {in[v]}, "n" + std::to_string(v));
          has_inv[v] = true;
        }
        lits.push_back(inv[v]);
      } else {
        lits.push_back(in[v]);
      }
    }
    ors.push_back(c.add_gate(GateKind::Or, lits, "t" + std::to_string(t)));
  }
  // every OR feeds at least one AND; each AND takes >= 2 ORs
  const std::size_t outs = 1 + rng.below(2);
  std::vector<std::vector<GateId>> groups(outs);
  for (std::size_t t = 0; t < ors.size(); ++t)
    groups[t % outs].push_back(ors[t]);
  for (std::size_t o = 0; o < outs; ++o) {
    auto& grp = groups[o];
    while (grp.size() < 2) {
      const GateId extra = ors[rng.below(ors.size())];
      if (std::find(grp.begin(), grp.end(), extra) == grp.end())
        grp.push_back(extra);
    }
    const GateId a = c.add_gate(GateKind::And, grp, "f" + std::to_string(o));
    c.add_gate(GateKind::Output, {a}, "y" + std::to_string(o));
  }
  return c;
}

/// A placed design plus one defect that breaks it.
struct Scenario {
  std::string name;
  Circuit circuit;
  Fabric fabric;
  Placement placement;
};

/*! \brief Minimal broken designs, one per defect kind.
 *
 * F = NOR(X, Y) feeds H = NOR(F, W) on a 5x5 fabric whose domains are the
 * eight neighbours.  X(1,2), Y(1,1), F(2,2), W(4,1), H(3,2) is valid before
 * the defect; afterwards:
 *   wire break   X's output wire no longer reaches F
 *   stuck open   the X->F device is off
 *   stuck closed an empty cell (3,3) is shorted onto F's input
 *   dead cell    F's own cell is dead
 */
inline std::vector<Scenario> defect_scenarios() {
  Circuit c;
  const auto X = c.add_gate(GateKind::Input, {}, "X");
  const auto Y = c.add_gate(GateKind::Input, {}, "Y");
  const auto W = c.add_gate(GateKind::Input, {}, "W");
  const auto F = c.add_gate(GateKind::Nor, {X, Y}, "F");
  const auto H = c.add_gate(GateKind::Nor, {F, W}, "H");
  c.add_gate(GateKind::Output, {H}, "out");

  Placement p(c.size());
  p.assign(X, {1, 2});
  p.assign(Y, {1, 1});
  p.assign(W, {4, 1});
  p.assign(F, {2, 2});
  p.assign(H, {3, 2});

  const Fabric clean(5, 5, 3);
  DefectSpec wire{DefectKind::WireBreak, {1, 2}};
  wire.wire = Wire::Output;
  wire.break_fraction = 0.5;
  return {
      {"WireBreak", c, clean.apply_defect(wire), p},
      {"StuckOpen", c, clean.apply_defect({DefectKind::StuckOpen, {1, 2}, Coord{2, 2}}), p},
      {"StuckClosed", c, clean.apply_defect({DefectKind::StuckClosed, {3, 3}, Coord{2, 2}}), p},
      {"DeadCell", c, clean.apply_defect({DefectKind::DeadCell, {2, 2}}), p},
  };
}

} // namespace cmol::fixtures
