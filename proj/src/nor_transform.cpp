#include "cmol/nor_transform.hpp"

#include "cmol/error.hpp"

#include <unordered_map>
#include <unordered_set>

namespace cmol {

namespace {

struct Node {
  GateKind kind;
  std::vector<std::size_t> fanin;
  std::string name;
};

class NorRewriter {
public:
  explicit NorRewriter(const Circuit& source) : source_(source) {
    for (const auto& g : source.gates())
      used_.insert(g.name);
  }

  Circuit run() {
    convert();
    while (remove_stacked_inverters() | merge_duplicate_inverters()) {
    }
    return emit();
  }

private:
  std::size_t add(GateKind kind, std::vector<std::size_t> fanin, std::string name) {
    if (kind == GateKind::Nor && fanin.size() == 1)
      kind = GateKind::Not;
    nodes_.push_back(Node{kind, std::move(fanin), std::move(name)});
    return nodes_.size() - 1;
  }

  std::string fresh(const std::string& base) {
    std::string candidate = base;
    for (std::size_t n = 1; used_.contains(candidate); ++n)
      candidate = base + "_" + std::to_string(n);
    used_.insert(candidate);
    return candidate;
  }

  // De Morgan rewrite of every AND/OR gate.
  void convert() {
    std::vector<std::size_t> value(source_.size(), 0);
    for (GateId id : source_.inputs())
      value[id] = add(GateKind::Input, {}, source_.gate(id).name);
    for (GateId id : source_.topological_order()) {
      const auto& g = source_.gate(id);
      switch (g.kind) {
      case GateKind::Input:
        break;
      case GateKind::Not:
        value[id] = add(GateKind::Not, {value[g.fanin[0]]}, g.name);
        break;
      case GateKind::And: {
        std::vector<std::size_t> inverted;
        for (GateId f : g.fanin)
          inverted.push_back(add(GateKind::Not, {value[f]}, fresh(source_.gate(f).name + "$inv")));
        value[id] = add(GateKind::Nor, std::move(inverted), g.name);
        break;
      }
      case GateKind::Or: {
        std::vector<std::size_t> fanin;
        for (GateId f : g.fanin)
          fanin.push_back(value[f]);
        const auto nor = add(GateKind::Nor, std::move(fanin), fresh(g.name + "$nor"));
        value[id] = add(GateKind::Not, {nor}, g.name);
        break;
      }
      case GateKind::Output:
        outputs_.emplace_back(g.name, value[g.fanin[0]]);
        break;
      default:
        throw InputError("NOR transform: unsupported gate kind " + std::string(to_string(g.kind)) +
                         " at '" + g.name + "'");
      }
    }
  }

  bool is_not(std::size_t n) const { return nodes_[n].kind == GateKind::Not; }

  // Sinks of NOT(NOT(x)) read x instead.
  std::size_t skip_double_inversion(std::size_t n, bool& changed) const {
    while (is_not(n) && is_not(nodes_[n].fanin[0])) {
      n = nodes_[nodes_[n].fanin[0]].fanin[0];
      changed = true;
    }
    return n;
  }

  bool remove_stacked_inverters() {
    bool changed = false;
    for (auto& node : nodes_)
      for (auto& f : node.fanin)
        f = skip_double_inversion(f, changed);
    for (auto& [name, driver] : outputs_)
      driver = skip_double_inversion(driver, changed);
    return changed;
  }

  std::vector<bool> live() const {
    std::vector<bool> mark(nodes_.size(), false);
    std::vector<std::size_t> stack;
    for (const auto& [name, driver] : outputs_)
      stack.push_back(driver);
    while (!stack.empty()) {
      const auto n = stack.back();
      stack.pop_back();
      if (mark[n])
        continue;
      mark[n] = true;
      for (auto f : nodes_[n].fanin)
        stack.push_back(f);
    }
    return mark;
  }

  bool merge_duplicate_inverters() {
    const auto alive = live();
    std::unordered_map<std::size_t, std::size_t> by_fanin;
    std::vector<std::size_t> replacement(nodes_.size());
    bool changed = false;
    for (std::size_t n = 0; n < nodes_.size(); ++n) {
      replacement[n] = n;
      if (!alive[n] || !is_not(n))
        continue;
      auto [it, inserted] = by_fanin.emplace(nodes_[n].fanin[0], n);
      if (!inserted) {
        replacement[n] = it->second;
        changed = true;
      }
    }
    if (!changed)
      return false;
    for (auto& node : nodes_)
      for (auto& f : node.fanin)
        f = replacement[f];
    for (auto& [name, driver] : outputs_)
      driver = replacement[driver];
    return true;
  }

  // Node order is topological: rewiring only ever points to older nodes.
  Circuit emit() const {
    const auto alive = live();
    Circuit out;
    std::vector<GateId> map(nodes_.size(), 0);
    for (std::size_t n = 0; n < nodes_.size(); ++n) {
      const auto& node = nodes_[n];
      if (node.kind != GateKind::Input && !alive[n])
        continue;
      std::vector<GateId> fanin;
      for (auto f : node.fanin)
        fanin.push_back(map[f]);
      map[n] = out.add_gate(node.kind, std::move(fanin), node.name);
    }
    for (const auto& [name, driver] : outputs_)
      out.add_gate(GateKind::Output, {map[driver]}, name);
    return out;
  }

  const Circuit& source_;
  std::vector<Node> nodes_;
  std::vector<std::pair<std::string, std::size_t>> outputs_;
  std::unordered_set<std::string> used_;
};

bool all_of_kind(const Circuit& c, const std::vector<GateId>& ids, GateKind kind) {
  for (GateId id : ids)
    if (c.gate(id).kind != kind)
      return false;
  return true;
}

std::string pos_violation(const Circuit& c) {
  if (c.count(GateKind::And) == 0)
    return "no AND gate";
  const auto fanouts = c.fanouts();
  std::unordered_set<GateId> inverted_inputs;
  for (const auto& g : c.gates()) {
    switch (g.kind) {
    case GateKind::Input:
      break;
    case GateKind::Output:
      if (c.gate(g.fanin[0]).kind != GateKind::And)
        return "output '" + g.name + "' is not driven by an AND gate";
      break;
    case GateKind::And:
      if (g.fanin.size() < 2 || !all_of_kind(c, g.fanin, GateKind::Or))
        return "AND gate '" + g.name + "' needs two or more OR-driven inputs";
      break;
    case GateKind::Or:
      if (g.fanin.size() < 2)
        return "OR gate '" + g.name + "' has a single input";
      for (GateId f : g.fanin)
        if (c.gate(f).kind != GateKind::Input && c.gate(f).kind != GateKind::Not)
          return "OR gate '" + g.name + "' has a non-literal input";
      if (fanouts[g.id].empty() || !all_of_kind(c, fanouts[g.id], GateKind::And))
        return "OR gate '" + g.name + "' feeds something other than AND gates";
      break;
    case GateKind::Not:
      if (c.gate(g.fanin[0]).kind != GateKind::Input)
        return "NOT gate '" + g.name + "' is not on a primary input";
      if (!inverted_inputs.insert(g.fanin[0]).second)
        return "input '" + c.gate(g.fanin[0]).name + "' is inverted twice";
      if (fanouts[g.id].empty() || !all_of_kind(c, fanouts[g.id], GateKind::Or))
        return "NOT gate '" + g.name + "' feeds something other than OR gates";
      break;
    default:
      return "gate '" + g.name + "' has kind " + std::string(to_string(g.kind));
    }
  }
  return {};
}

} // namespace

Circuit to_nor(const Circuit& circuit) { return NorRewriter(circuit).run(); }

std::size_t count_stacked_inverters(const Circuit& circuit) {
  std::size_t n = 0;
  for (const auto& g : circuit.gates())
    if (g.kind == GateKind::Not && circuit.gate(g.fanin[0]).kind == GateKind::Not)
      ++n;
  return n;
}

std::size_t count_duplicate_inverters(const Circuit& circuit) {
  std::unordered_set<GateId> seen;
  std::size_t n = 0;
  for (const auto& g : circuit.gates())
    if (g.kind == GateKind::Not && !seen.insert(g.fanin[0]).second)
      ++n;
  return n;
}

ConservationReport check_gate_conservation(const Circuit& source, const Circuit& converted) {
  ConservationReport report;
  report.source_gates =
      source.count(GateKind::And) + source.count(GateKind::Or) + source.count(GateKind::Not);
  report.nor_gates = converted.count(GateKind::Nor) + converted.count(GateKind::Not);
  report.reason = pos_violation(source);
  if (!report.reason.empty())
    report.status = ConservationStatus::PreconditionUnmet;
  else
    report.status =
        report.source_gates == report.nor_gates ? ConservationStatus::Holds : ConservationStatus::CountMismatch;
  return report;
}

} // namespace cmol
