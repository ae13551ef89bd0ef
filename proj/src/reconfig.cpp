#include "cmol/reconfig.hpp"

#include "cmol/error.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

namespace cmol {

std::vector<Conflict> find_conflicts(const Circuit& circuit, const Fabric& fabric, const Placement& placement) {
  std::vector<Conflict> out;
  std::map<Coord, GateId> at;
  for (const Gate& g : circuit.gates()) {
    if (g.kind == GateKind::Output)
      continue;
    const auto c = placement.cell(g.id);
    if (!c || !fabric.contains(*c))
      throw InputError("gate '" + g.name + "' has no cell on the fabric");
    at.emplace(*c, g.id);
    if (fabric.is_dead(*c))
      out.push_back({g.id, *c, "dead_cell"});
  }
  for (const Gate& g : circuit.gates()) {
    if (g.kind == GateKind::Output)
      continue;
    const Coord sink = *placement.cell(g.id);
    for (GateId f : g.fanin) {
      const Coord source = *placement.cell(f);
      if (!fabric.can_drive(source, sink)) {
        out.push_back({f, source, "domain"});
        out.push_back({g.id, sink, "domain"});
      }
    }
  }
  for (auto [a, b] : fabric.stuck_closed_pairs()) {
    auto it = at.find(b);
    if (it == at.end())
      continue;
    const Gate& g = circuit.gate(it->second);
    if (g.fanin.empty()) {
      out.push_back({g.id, b, "stuck_closed_input"});
      continue;
    }
    const bool fed =
        std::any_of(g.fanin.begin(), g.fanin.end(), [&](GateId f) { return *placement.cell(f) == a; });
    if (!fed)
      out.push_back({g.id, b, "stuck_closed_fanin"});
  }
  return out;
}

Coord conflict_center(const std::vector<Conflict>& conflicts) {
  if (conflicts.empty())
    throw InputError("no conflicts to center on");
  double sx = 0, sy = 0;
  for (const auto& c : conflicts) {
    sx += c.cell.x;
    sy += c.cell.y;
  }
  const double n = static_cast<double>(conflicts.size());
  return {static_cast<int>(std::ceil(sx / n - 0.5)), static_cast<int>(std::ceil(sy / n - 0.5))};
}

Region region_around(Coord center, int half, const Fabric& fabric) {
  return {std::max(0, center.x - half), std::max(0, center.y - half), std::min(fabric.width() - 1, center.x + half),
          std::min(fabric.height() - 1, center.y + half)};
}

AssignmentProblem make_local_problem(const Circuit& circuit, const Fabric& fabric, const PinSet& pins,
                                     const Placement& placement, const Region& region) {
  AssignmentProblem p;
  std::map<Coord, GateId> at;
  for (GateId g : circuit.placeable_gates())
    at.emplace(*placement.cell(g), g);

  std::map<GateId, std::size_t> row;
  for (GateId g : circuit.placeable_gates())
    if (region.contains(*placement.cell(g))) {
      row.emplace(g, p.gates.size());
      p.gates.push_back(g);
    }
  std::map<Coord, std::size_t> col;
  for (int y = region.y0; y <= region.y1; ++y)
    for (int x = region.x0; x <= region.x1; ++x)
      if (!fabric.is_dead({x, y})) {
        col.emplace(Coord{x, y}, p.cells.size());
        p.cells.push_back({x, y});
      }
  const std::size_t nc = p.cells.size();

  const auto fanouts = circuit.fanouts();
  for (GateId g : p.gates) {
    std::vector<std::size_t> fanin;
    for (GateId f : circuit.gate(g).fanin)
      if (auto it = row.find(f); it != row.end())
        fanin.push_back(it->second);
    std::sort(fanin.begin(), fanin.end());
    fanin.erase(std::unique(fanin.begin(), fanin.end()), fanin.end());
    p.fanin.push_back(std::move(fanin));
    p.primary.push_back(circuit.gate(g).fanin.empty());
  }
  for (Coord c : p.cells) {
    std::vector<std::size_t> domain;
    for (Coord d : fabric.input_domain(c))
      if (auto it = col.find(d); it != col.end())
        domain.push_back(it->second);
    p.domain.push_back(std::move(domain));
  }
  p.dead.assign(nc, false);
  p.allowed.assign(p.gates.size() * nc, 1);

  const auto must = resolve_pins(circuit, pins.must);
  const auto forbid = resolve_pins(circuit, pins.forbid);
  const auto closed = fabric.stuck_closed_pairs();

  for (std::size_t gi = 0; gi < p.gates.size(); ++gi) {
    const GateId g = p.gates[gi];
    std::vector<Coord> fixed_fanin, fixed_fanout;
    for (GateId f : circuit.gate(g).fanin)
      if (!row.contains(f))
        fixed_fanin.push_back(*placement.cell(f));
    for (GateId h : fanouts[g])
      if (circuit.gate(h).kind != GateKind::Output && !row.contains(h))
        fixed_fanout.push_back(*placement.cell(h));
    const auto* must_cells = must.contains(g) ? &must.at(g) : nullptr;
    const auto* forbid_cells = forbid.contains(g) ? &forbid.at(g) : nullptr;

    for (std::size_t ci = 0; ci < nc; ++ci) {
      const Coord c = p.cells[ci];
      bool ok = (!must_cells || must_cells->contains(c)) && (!forbid_cells || !forbid_cells->contains(c));
      for (Coord s : fixed_fanin)
        ok = ok && fabric.can_drive(s, c);
      for (Coord t : fixed_fanout)
        ok = ok && fabric.can_drive(c, t);
      // closed device whose driver no freed gate can occupy
      for (auto [a, b] : closed)
        if (ok && b == c && !col.contains(a))
          ok = !p.primary[gi] && std::find(fixed_fanin.begin(), fixed_fanin.end(), a) != fixed_fanin.end();
      p.allowed[gi * nc + ci] = ok ? 1 : 0;
    }
  }

  for (auto [a, b] : closed) {
    auto ia = col.find(a);
    if (ia == col.end())
      continue;
    if (auto ib = col.find(b); ib != col.end()) {
      p.stuck_closed.emplace_back(ia->second, ib->second);
      continue;
    }
    // fixed receiver outside the region
    auto it = at.find(b);
    if (it == at.end() || row.contains(it->second))
      continue;
    const Gate& h = circuit.gate(it->second);
    if (h.fanin.empty())
      continue;  // an input on a closed receiver is a conflict of its own
    std::vector<std::pair<std::size_t, std::size_t>> clause;
    for (GateId f : h.fanin)
      if (auto fr = row.find(f); fr != row.end())
        clause.emplace_back(fr->second, ia->second);
    p.required.push_back(std::move(clause));
  }
  return p;
}

nlohmann::json attempt_to_json(const ReconfigAttempt& a) {
  return {{"iteration", a.iteration},
          {"center", coord_to_json(a.center)},
          {"region", {a.region.x0, a.region.y0, a.region.x1, a.region.y1}},
          {"conflicts", a.conflicts},
          {"freed_gates", a.freed_gates},
          {"cells", a.cells},
          {"has_conflicted_gate", a.had_conflicted_gate},
          {"status", to_string(a.status)},
          {"conflicts_solver", a.stats.conflicts},
          {"decisions", a.stats.decisions},
          {"seconds", a.stats.seconds}};
}

ReconfigResult reconfigure(const Circuit& circuit, const Fabric& fabric, const PinSet& pins, const Placement& placement,
                           const ReconfigOptions& options) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };

  ReconfigResult result;
  result.placement = placement;
  const Region whole{0, 0, fabric.width() - 1, fabric.height() - 1};

  for (std::size_t iteration = 0;; ++iteration) {
    const auto conflicts = find_conflicts(circuit, fabric, result.placement);
    if (conflicts.empty()) {
      result.success = true;
      return result;
    }
    result.remaining = conflicts;
    if (iteration >= options.max_iterations) {
      result.failure = "iteration limit reached";
      return result;
    }
    const Coord center = conflict_center(conflicts);
    bool repaired = false;
    for (int half = options.initial_half;; ++half) {
      const Region region = region_around(center, half, fabric);
      ReconfigAttempt attempt;
      attempt.iteration = iteration;
      attempt.center = center;
      attempt.region = region;
      attempt.conflicts = conflicts.size();
      attempt.had_conflicted_gate =
          std::any_of(conflicts.begin(), conflicts.end(), [&](const Conflict& c) { return region.contains(c.cell); });

      if (attempt.had_conflicted_gate) {
        const auto problem = make_local_problem(circuit, fabric, pins, result.placement, region);
        attempt.freed_gates = problem.gates.size();
        attempt.cells = problem.cells.size();
        PlaceOptions local = options.place;
        if (options.budget_seconds > 0) {
          const double left = options.budget_seconds - elapsed();
          if (left <= 0) {
            result.failure = "time budget exhausted";
            return result;
          }
          local.solver.time_limit_seconds =
              local.solver.time_limit_seconds > 0 ? std::min(local.solver.time_limit_seconds, left) : left;
        }
        SolveStatus status = SolveStatus::Unsat;
        const auto cells = solve_problem(problem, local, status, &attempt.stats);
        attempt.status = status;
        result.solver_seconds += attempt.stats.seconds;
        result.attempts.push_back(attempt);
        if (status == SolveStatus::TimedOut) {
          result.failure = "time budget exhausted";
          return result;
        }
        if (cells) {
          for (std::size_t g = 0; g < problem.gates.size(); ++g)
            result.placement.assign(problem.gates[g], problem.cells[(*cells)[g]]);
          repaired = true;
          break;
        }
      } else {
        result.attempts.push_back(attempt);
      }
      if (region == whole) {
        result.failure = "no placement exists even with every gate free";
        return result;
      }
      if (options.budget_seconds > 0 && elapsed() >= options.budget_seconds) {
        result.failure = "time budget exhausted";
        return result;
      }
    }
    if (repaired)
      ++result.iterations;
  }
}

} // namespace cmol
