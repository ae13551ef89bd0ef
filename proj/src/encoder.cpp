#include "cmol/encoder.hpp"

#include "cmol/error.hpp"

#include <algorithm>
#include <unordered_map>

namespace cmol {

void PinSet::check() const {
  for (const auto& [gate, cells] : must) {
    if (cells.empty())
      throw InputError("must-pin set of '" + gate + "' is empty");
    if (auto it = forbid.find(gate); it != forbid.end())
      for (Coord c : it->second)
        if (cells.contains(c))
          throw InputError("gate '" + gate + "' is both pinned to and forbidden from " + to_string(c));
  }
}

nlohmann::json pins_to_json(const PinSet& pins) {
  auto side = [](const std::map<std::string, std::set<Coord>>& m) {
    nlohmann::json doc = nlohmann::json::object();
    for (const auto& [gate, cells] : m) {
      nlohmann::json list = nlohmann::json::array();
      for (Coord c : cells)
        list.push_back(coord_to_json(c));
      doc[gate] = list;
    }
    return doc;
  };
  return {{"must", side(pins.must)}, {"forbid", side(pins.forbid)}};
}

PinSet pins_from_json(const nlohmann::json& doc) {
  if (!doc.is_object())
    throw InputError("pin file must be a JSON object");
  PinSet pins;
  auto read = [&](const char* key, std::map<std::string, std::set<Coord>>& out) {
    if (!doc.contains(key))
      return;
    if (!doc.at(key).is_object())
      throw InputError(std::string("pin section '") + key + "' must be an object");
    for (const auto& [gate, list] : doc.at(key).items()) {
      if (!list.is_array())
        throw InputError("pin list of '" + gate + "' must be an array of [x, y]");
      auto& cells = out[gate];
      for (const auto& c : list)
        cells.insert(coord_from_json(c));
    }
  };
  read("must", pins.must);
  read("forbid", pins.forbid);
  pins.check();
  return pins;
}

GateId resolve_pin_gate(const Circuit& circuit, const std::string& name) {
  if (auto id = circuit.find(name))
    return *id;
  for (GateId out : circuit.outputs())
    if (circuit.gate(out).name == name)
      return circuit.gate(out).fanin.at(0);
  throw InputError("pin refers to unknown gate '" + name + "'");
}

std::map<GateId, std::set<Coord>> resolve_pins(const Circuit& circuit,
                                               const std::map<std::string, std::set<Coord>>& side) {
  std::map<GateId, std::set<Coord>> result;
  for (const auto& [name, cells] : side)
    if (name != "*") {
      auto& slot = result[resolve_pin_gate(circuit, name)];
      slot.insert(cells.begin(), cells.end());
    }
  if (auto it = side.find("*"); it != side.end())
    for (GateId g : circuit.placeable_gates())
      result.try_emplace(g, it->second);
  return result;
}

AssignmentProblem make_problem(const Circuit& circuit, const Fabric& fabric, const PinSet& pins) {
  pins.check();
  AssignmentProblem p;
  std::unordered_map<GateId, std::size_t> row;
  for (const Gate& g : circuit.gates()) {
    if (g.kind == GateKind::Output)
      continue;
    if (g.kind != GateKind::Input && g.kind != GateKind::Nor && g.kind != GateKind::Not)
      throw InputError("cannot place " + std::string(to_string(g.kind)) + " gate '" + g.name +
                       "': convert the circuit to NOR/NOT first");
    row.emplace(g.id, p.gates.size());
    p.gates.push_back(g.id);
  }
  for (GateId id : p.gates) {
    std::vector<std::size_t> fanin;
    for (GateId f : circuit.gate(id).fanin)
      fanin.push_back(row.at(f));
    std::sort(fanin.begin(), fanin.end());
    fanin.erase(std::unique(fanin.begin(), fanin.end()), fanin.end());
    p.primary.push_back(fanin.empty());
    p.fanin.push_back(std::move(fanin));
  }

  p.cells = fabric.cells();
  for (Coord c : p.cells) {
    std::vector<std::size_t> domain;
    for (Coord d : fabric.input_domain(c))
      domain.push_back(fabric.index(d));
    p.domain.push_back(std::move(domain));
    p.dead.push_back(fabric.is_dead(c));
  }

  const std::size_t nc = p.cells.size();
  p.allowed.assign(p.gates.size() * nc, 1);
  for (const auto& [id, cells] : resolve_pins(circuit, pins.must))
    for (std::size_t c = 0; c < nc; ++c)
      if (!cells.contains(p.cells[c]))
        p.allowed[row.at(id) * nc + c] = 0;
  for (const auto& [id, cells] : resolve_pins(circuit, pins.forbid))
    for (std::size_t c = 0; c < nc; ++c)
      if (cells.contains(p.cells[c]))
        p.allowed[row.at(id) * nc + c] = 0;

  for (auto [a, b] : fabric.stuck_closed_pairs())
    p.stuck_closed.emplace_back(fabric.index(a), fabric.index(b));
  return p;
}

VarMap::VarMap(std::vector<GateId> gates, std::vector<Coord> cells)
    : gates_(std::move(gates)), cells_(std::move(cells)), slots_(gates_.size() * cells_.size(), kFalse) {}

std::optional<bool> VarMap::constant(std::size_t g, std::size_t c) const {
  const int s = slot(g, c);
  if (s > 0)
    return std::nullopt;
  return s == kTrue;
}

int VarMap::make_var(std::size_t g, std::size_t c) {
  int& s = slots_[g * cells_.size() + c];
  if (s <= 0) {
    pairs_.emplace_back(g, c);
    s = static_cast<int>(pairs_.size());
  }
  return s;
}

void VarMap::set_constant(std::size_t g, std::size_t c, bool value) {
  if (slot(g, c) > 0)
    throw InternalError("pair is already a live variable");
  slots_[g * cells_.size() + c] = value ? kTrue : kFalse;
}

namespace {

/// Accumulates one clause at a time, substituting constants.
class ClauseSink {
public:
  ClauseSink(CnfFormula& cnf, const VarMap& vars) : cnf_(cnf), vars_(vars) {}

  void begin() {
    lits_.clear();
    satisfied_ = false;
  }
  /// Adds p(g,c) with the given polarity.
  void add(std::size_t g, std::size_t c, bool positive) {
    if (satisfied_)
      return;
    if (const int v = vars_.var(g, c)) {
      lits_.push_back(positive ? v : -v);
      return;
    }
    if (*vars_.constant(g, c) == positive)
      satisfied_ = true;
  }
  /// Emits the clause unless satisfied; returns false if it became empty.
  bool end(std::size_t& counter) {
    if (satisfied_)
      return true;
    if (lits_.empty())
      return false;
    cnf_.add_clause(lits_);
    ++counter;
    return true;
  }

private:
  CnfFormula& cnf_;
  const VarMap& vars_;
  std::vector<int> lits_;
  bool satisfied_ = false;
};

std::size_t choose2(std::size_t n) { return n < 2 ? 0 : n * (n - 1) / 2; }

} // namespace

Encoding encode_problem(const AssignmentProblem& p) {
  const std::size_t ng = p.gates.size();
  const std::size_t nc = p.cells.size();
  if (p.fanin.size() != ng || p.primary.size() != ng || p.domain.size() != nc || p.dead.size() != nc ||
      p.allowed.size() != ng * nc)
    throw InternalError("inconsistent assignment problem");

  Encoding enc;
  enc.vars = VarMap(p.gates, p.cells);

  std::vector<bool> closed_sink(nc, false);
  for (auto [a, b] : p.stuck_closed)
    closed_sink[b] = true;

  for (std::size_t g = 0; g < ng; ++g)
    for (std::size_t c = 0; c < nc; ++c) {
      const bool off = !p.is_allowed(g, c) || p.dead[c] || (p.primary[g] && closed_sink[c]);
      if (off)
        ++enc.constants;
      else
        enc.vars.make_var(g, c);
    }
  enc.cnf.set_num_vars(enc.vars.num_vars());

  auto& pre = enc.before_propagation;
  auto& post = enc.after_propagation;
  ClauseSink sink(enc.cnf, enc.vars);
  bool empty_clause = false;
  auto finish = [&](std::size_t& counter) {
    if (!sink.end(counter))
      empty_clause = true;
  };

  // each gate on at most one cell
  for (std::size_t g = 0; g < ng; ++g) {
    pre.cell_mutex += choose2(nc);
    std::vector<int> live;
    for (std::size_t c = 0; c < nc; ++c)
      if (int v = enc.vars.var(g, c))
        live.push_back(v);
    for (std::size_t i = 0; i < live.size(); ++i)
      for (std::size_t j = i + 1; j < live.size(); ++j) {
        enc.cnf.add_clause({-live[i], -live[j]});
        ++post.cell_mutex;
      }
  }

  // each gate on at least one cell
  for (std::size_t g = 0; g < ng; ++g) {
    ++pre.placed;
    sink.begin();
    for (std::size_t c = 0; c < nc; ++c)
      sink.add(g, c, true);
    if (!sink.end(post.placed)) {
      empty_clause = true;
      enc.diagnostics.push_back({"no_admissible_cell", "gate #" + std::to_string(p.gates[g]) +
                                                            " has no usable cell left after pins and defects"});
    }
  }

  // at most one gate per cell
  for (std::size_t c = 0; c < nc; ++c) {
    pre.gate_mutex += choose2(ng);
    std::vector<int> live;
    for (std::size_t g = 0; g < ng; ++g)
      if (int v = enc.vars.var(g, c))
        live.push_back(v);
    for (std::size_t i = 0; i < live.size(); ++i)
      for (std::size_t j = i + 1; j < live.size(); ++j) {
        enc.cnf.add_clause({-live[i], -live[j]});
        ++post.gate_mutex;
      }
  }

  // every net endpoint inside the sink's input domain
  for (std::size_t g2 = 0; g2 < ng; ++g2)
    for (std::size_t g1 : p.fanin[g2])
      for (std::size_t c2 = 0; c2 < nc; ++c2) {
        ++pre.domain;
        sink.begin();
        sink.add(g2, c2, false);
        for (std::size_t c1 : p.domain[c2])
          sink.add(g1, c1, true);
        finish(post.domain);
      }

  // a gate on the receiver of a closed device needs a fanin on its driver
  for (auto [a, b] : p.stuck_closed)
    for (std::size_t g = 0; g < ng; ++g) {
      if (p.primary[g])
        continue;
      ++pre.stuck_closed;
      sink.begin();
      sink.add(g, b, false);
      for (std::size_t f : p.fanin[g])
        sink.add(f, a, true);
      finish(post.stuck_closed);
    }

  for (const auto& clause : p.required) {
    ++pre.required;
    sink.begin();
    for (auto [g, c] : clause)
      sink.add(g, c, true);
    finish(post.required);
  }

  std::size_t usable = 0;
  for (std::size_t c = 0; c < nc; ++c)
    usable += p.dead[c] ? 0 : 1;
  if (ng > usable) {
    empty_clause = true;
    enc.diagnostics.push_back({"insufficient_cells", std::to_string(ng) + " gates but only " +
                                                         std::to_string(usable) + " usable cells"});
  }

  if (empty_clause) {
    if (enc.diagnostics.empty())
      enc.diagnostics.push_back({"conflicting_constants", "a constraint is violated by the fixed assignments alone"});
    enc.trivially_unsat = true;
    enc.cnf = CnfFormula(enc.vars.num_vars());
    enc.cnf.add_clause(std::span<const int>{});
  }
  return enc;
}

Encoding encode(const Circuit& circuit, const Fabric& fabric, const PinSet& pins) {
  return encode_problem(make_problem(circuit, fabric, pins));
}

std::vector<std::size_t> decode_indices(const Model& model, const VarMap& vars) {
  if (model.size() < static_cast<std::size_t>(vars.num_vars()))
    throw InternalError("model does not cover every variable");
  const std::size_t nc = vars.cells().size();
  std::vector<std::size_t> result(vars.gates().size());
  for (std::size_t g = 0; g < result.size(); ++g) {
    std::size_t hits = 0;
    for (std::size_t c = 0; c < nc; ++c) {
      const int v = vars.var(g, c);
      const bool value = v ? model[static_cast<std::size_t>(v) - 1] : *vars.constant(g, c);
      if (value) {
        result[g] = c;
        ++hits;
      }
    }
    if (hits != 1)
      throw InternalError("model places gate #" + std::to_string(vars.gates()[g]) + " on " + std::to_string(hits) +
                          " cells");
  }
  return result;
}

Placement decode(const Model& model, const VarMap& vars, std::size_t num_gates) {
  Placement placement(num_gates);
  const auto cells = decode_indices(model, vars);
  for (std::size_t g = 0; g < cells.size(); ++g)
    placement.assign(vars.gates()[g], vars.cells()[cells[g]]);
  return placement;
}

} // namespace cmol
