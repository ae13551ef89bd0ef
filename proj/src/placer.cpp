#include "cmol/placer.hpp"

#include "cmol/error.hpp"
#include "cmol/netlist.hpp"
#include "cmol/nor_transform.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <unordered_map>

namespace cmol {

std::optional<std::vector<std::size_t>> solve_problem(const AssignmentProblem& problem, const PlaceOptions& options,
                                                      SolveStatus& status, SolveStats* stats) {
  const auto enc = encode_problem(problem);
  if (enc.trivially_unsat) {
    status = SolveStatus::Unsat;
    return std::nullopt;
  }
  const auto result = options.external_solver.empty() ? solve(enc.cnf, options.solver)
                                                      : solve_external(enc.cnf, options.external_solver, options.solver);
  status = result.status;
  if (stats)
    *stats = result.stats;
  if (result.status != SolveStatus::Sat)
    return std::nullopt;
  return decode_indices(result.model, enc.vars);
}

PlaceResult place(const Circuit& circuit, const Fabric& fabric, const PinSet& pins, const PlaceOptions& options) {
  PlaceResult out;
  const auto t0 = std::chrono::steady_clock::now();
  const auto enc = encode(circuit, fabric, pins);
  out.encode_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.num_vars = enc.cnf.num_vars();
  out.num_clauses = enc.cnf.num_clauses();
  out.before_propagation = enc.before_propagation;
  out.after_propagation = enc.after_propagation;
  out.diagnostics = enc.diagnostics;
  if (enc.trivially_unsat) {
    out.status = SolveStatus::Unsat;
    return out;
  }
  const auto result = options.external_solver.empty() ? solve(enc.cnf, options.solver)
                                                      : solve_external(enc.cnf, options.external_solver, options.solver);
  out.status = result.status;
  out.solver = result.stats;
  if (result.status != SolveStatus::Sat)
    return out;
  auto placement = decode(result.model, enc.vars, circuit.size());
  const auto violations = validate(circuit, fabric, pins, placement);
  if (!violations.empty())
    throw InternalError("solver placement violates '" + violations.front().rule + "': " + violations.front().message);
  out.placement = std::move(placement);
  return out;
}

nlohmann::json violation_to_json(const Violation& v) {
  nlohmann::json cells = nlohmann::json::array();
  for (Coord c : v.cells)
    cells.push_back(coord_to_json(c));
  return {{"rule", v.rule}, {"gate", v.gate}, {"cells", cells}, {"message", v.message}};
}

std::vector<Violation> validate(const Circuit& circuit, const Fabric& fabric, const PinSet& pins,
                                const Placement& placement) {
  std::vector<Violation> out;
  auto report = [&](std::string rule, const Gate& g, std::vector<Coord> cells, std::string message) {
    out.push_back({std::move(rule), g.name, std::move(cells), std::move(message)});
  };

  std::map<Coord, GateId> owner;
  std::vector<bool> usable(circuit.size(), false);
  for (const Gate& g : circuit.gates()) {
    if (g.kind == GateKind::Output)
      continue;
    const auto cell = placement.cell(g.id);
    if (!cell) {
      report("unplaced", g, {}, "gate '" + g.name + "' has no cell");
      continue;
    }
    if (!fabric.contains(*cell)) {
      report("out_of_bounds", g, {*cell}, "gate '" + g.name + "' sits outside the fabric at " + to_string(*cell));
      continue;
    }
    usable[g.id] = true;
    if (auto [it, fresh] = owner.emplace(*cell, g.id); !fresh)
      report("injective", g, {*cell},
             "gates '" + circuit.gate(it->second).name + "' and '" + g.name + "' share " + to_string(*cell));
    if (fabric.is_dead(*cell))
      report("dead_cell", g, {*cell}, "gate '" + g.name + "' sits on dead cell " + to_string(*cell));
  }

  for (const Gate& g : circuit.gates()) {
    if (g.kind == GateKind::Output || !usable[g.id])
      continue;
    const Coord sink = *placement.cell(g.id);
    for (GateId f : g.fanin) {
      if (!usable[f])
        continue;
      const Coord source = *placement.cell(f);
      if (!fabric.can_drive(source, sink))
        report("domain", g, {source, sink},
               "fanin '" + circuit.gate(f).name + "' at " + to_string(source) + " is outside the input domain of " +
                   to_string(sink));
    }
  }

  auto check_pins = [&](const std::map<std::string, std::set<Coord>>& side, bool must) {
    for (const auto& [id, cells] : resolve_pins(circuit, side)) {
      const Gate& g = circuit.gate(id);
      if (!usable[g.id])
        continue;
      const Coord c = *placement.cell(g.id);
      if (cells.contains(c) != must)
        report(must ? "pin_must" : "pin_forbid", g, {c},
               "gate '" + g.name + "' is " + (must ? "not pinned to " : "forbidden from ") + to_string(c));
    }
  };
  check_pins(pins.must, true);
  check_pins(pins.forbid, false);

  for (auto [a, b] : fabric.stuck_closed_pairs()) {
    auto it = owner.find(b);
    if (it == owner.end())
      continue;
    const Gate& g = circuit.gate(it->second);
    if (g.fanin.empty()) {
      report("stuck_closed_input", g, {a, b},
             "input '" + g.name + "' at " + to_string(b) + " is shorted to " + to_string(a) + " by a closed device");
      continue;
    }
    const bool fed = std::any_of(g.fanin.begin(), g.fanin.end(), [&](GateId f) {
      return usable[f] && *placement.cell(f) == a;
    });
    if (!fed)
      report("stuck_closed_fanin", g, {a, b},
             "gate '" + g.name + "' at " + to_string(b) + " has no fanin at " + to_string(a) +
                 " although the device between them is closed");
  }
  return out;
}

std::vector<std::vector<std::uint64_t>> simulate_fabric(const Circuit& circuit, const Fabric& fabric,
                                                        const Placement& placement, const Patterns& stimulus) {
  if (stimulus.words.size() != circuit.inputs().size())
    throw InputError("stimulus does not match the circuit's inputs");
  const std::size_t words = (stimulus.num_vectors + 63) / 64;
  const std::uint64_t mask = stimulus.num_vectors % 64 ? (std::uint64_t{1} << (stimulus.num_vectors % 64)) - 1 : ~0ull;

  // cell -> occupying gate, and the wired sources of every occupied cell
  std::map<Coord, GateId> at;
  for (const Gate& g : circuit.gates()) {
    if (g.kind == GateKind::Output)
      continue;
    const auto c = placement.cell(g.id);
    if (!c)
      throw InputError("gate '" + g.name + "' is not placed");
    at.emplace(*c, g.id);
  }
  std::vector<std::vector<Coord>> wired(circuit.size());
  for (const Gate& g : circuit.gates()) {
    if (g.kind == GateKind::Output || g.kind == GateKind::Input)
      continue;
    const Coord sink = *placement.cell(g.id);
    for (GateId f : g.fanin) {
      const Coord source = *placement.cell(f);
      if (fabric.can_drive(source, sink))
        wired[g.id].push_back(source);
    }
  }
  for (auto [a, b] : fabric.stuck_closed_pairs())
    if (auto it = at.find(b); it != at.end() && circuit.gate(it->second).kind != GateKind::Input)
      wired[it->second].push_back(a);
  for (auto& w : wired) {
    std::sort(w.begin(), w.end());
    w.erase(std::unique(w.begin(), w.end()), w.end());
  }

  // evaluation order over the wired graph (Kahn)
  std::vector<std::vector<GateId>> fanout(circuit.size());
  std::vector<std::size_t> pending(circuit.size(), 0);
  for (const auto& [cell, id] : at)
    for (Coord s : wired[id])
      if (auto it = at.find(s); it != at.end()) {
        fanout[it->second].push_back(id);
        ++pending[id];
      }
  std::vector<GateId> order;
  for (const auto& [cell, id] : at)
    if (pending[id] == 0)
      order.push_back(id);
  for (std::size_t i = 0; i < order.size(); ++i)
    for (GateId n : fanout[order[i]])
      if (--pending[n] == 0)
        order.push_back(n);
  if (order.size() != at.size())
    throw InputError("the programmed fabric contains a feedback loop");

  std::vector<std::vector<std::uint64_t>> value(circuit.size());
  for (std::size_t i = 0; i < circuit.inputs().size(); ++i)
    value[circuit.inputs()[i]] = stimulus.words[i];
  const std::vector<std::uint64_t> ones(words, ~0ull);
  for (GateId id : order) {
    if (circuit.gate(id).kind == GateKind::Input)
      continue;
    std::vector<std::uint64_t> acc(words, 0);
    for (Coord s : wired[id]) {
      auto it = at.find(s);
      const auto& src = it == at.end() ? ones : value[it->second];
      for (std::size_t w = 0; w < words; ++w)
        acc[w] |= src[w];
    }
    for (auto& w : acc)
      w = ~w;
    value[id] = std::move(acc);
  }

  std::vector<std::vector<std::uint64_t>> out;
  for (GateId o : circuit.outputs()) {
    auto row = value[circuit.gate(o).fanin[0]];
    if (!row.empty())
      row.back() &= mask;
    out.push_back(std::move(row));
  }
  return out;
}

EquivalenceReport check_fabric(const Circuit& circuit, const Fabric& fabric, const Placement& placement,
                               const Circuit& reference, std::size_t exhaustive_limit, std::size_t random_vectors,
                               std::uint64_t seed) {
  EquivalenceReport report;
  const std::size_t n = circuit.inputs().size();
  report.exhaustive = n <= exhaustive_limit;
  const Patterns stimulus = report.exhaustive ? exhaustive_patterns(n) : random_patterns(n, random_vectors, seed);
  report.vectors = stimulus.num_vectors;

  std::unordered_map<std::string, std::size_t> row_of;
  for (std::size_t i = 0; i < n; ++i)
    row_of.emplace(circuit.gate(circuit.inputs()[i]).name, i);
  Patterns ref_stimulus;
  ref_stimulus.num_vectors = stimulus.num_vectors;
  for (GateId in : reference.inputs()) {
    auto it = row_of.find(reference.gate(in).name);
    if (it == row_of.end())
      throw InputError("reference input '" + reference.gate(in).name + "' is missing from the placed circuit");
    ref_stimulus.words.push_back(stimulus.words[it->second]);
  }

  const auto got = simulate_fabric(circuit, fabric, placement, stimulus);
  const auto want = simulate(reference, ref_stimulus);
  std::unordered_map<std::string, std::size_t> ref_out;
  for (std::size_t i = 0; i < reference.outputs().size(); ++i)
    ref_out.emplace(reference.gate(reference.outputs()[i]).name, i);
  for (std::size_t i = 0; i < circuit.outputs().size(); ++i) {
    const auto& name = circuit.gate(circuit.outputs()[i]).name;
    auto it = ref_out.find(name);
    if (it == ref_out.end())
      continue;
    ++report.compared_outputs;
    if (got[i] != want[it->second] && report.equivalent) {
      report.equivalent = false;
      report.mismatch = name;
    }
  }
  return report;
}

Circuit prepare_circuit(const Circuit& raw) { return to_nor(sweep(carve_sequential(raw))); }

std::pair<int, int> default_region(std::size_t gates, std::size_t io) {
  const double need = 1.1 * static_cast<double>(gates);
  int x = std::max(1, static_cast<int>(std::ceil(std::sqrt(need))));
  int y = (x - 1) * x >= need ? x - 1 : x;
  auto perimeter = [](int w, int h) -> std::size_t {
    return w <= 1 || h <= 1 ? static_cast<std::size_t>(w) * h : static_cast<std::size_t>(2 * (w + h) - 4);
  };
  while (perimeter(x, y) < io) {
    if (y < x)
      ++y;
    else
      ++x;
  }
  return {x, y};
}

PinSet perimeter_pins(const Circuit& circuit, int width, int height) {
  std::set<Coord> border;
  for (int x = 0; x < width; ++x)
    for (int y = 0; y < height; ++y)
      if (x == 0 || y == 0 || x == width - 1 || y == height - 1)
        border.insert({x, y});
  PinSet pins;
  for (GateId in : circuit.inputs())
    pins.must[circuit.gate(in).name] = border;
  for (GateId out : circuit.outputs())
    pins.must[circuit.gate(circuit.gate(out).fanin[0]).name] = border;
  return pins;
}

nlohmann::json design_to_json(const Design& design) {
  nlohmann::json cells = nlohmann::json::object();
  for (const Gate& g : design.circuit.gates())
    if (g.kind != GateKind::Output)
      if (auto c = design.placement.cell(g.id))
        cells[g.name] = coord_to_json(*c);
  return {{"cells", cells},
          {"fabric", fabric_to_json(design.fabric)},
          {"circuit", circuit_to_json(design.circuit)},
          {"pins", pins_to_json(design.pins)}};
}

Design design_from_json(const nlohmann::json& doc) {
  try {
    Design design{circuit_from_json(doc.at("circuit")), fabric_from_json(doc.at("fabric")),
                  doc.contains("pins") ? pins_from_json(doc.at("pins")) : PinSet{}, Placement{}};
    design.placement = Placement(design.circuit.size());
    for (const auto& [name, cell] : doc.at("cells").items()) {
      const auto id = design.circuit.find(name);
      if (!id)
        throw InputError("placement names unknown gate '" + name + "'");
      design.placement.assign(*id, coord_from_json(cell));
    }
    return design;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed placement JSON: ") + e.what());
  }
}

} // namespace cmol
