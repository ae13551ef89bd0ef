#include "cmol/circuit.hpp"

#include "cmol/error.hpp"

#include <algorithm>
#include <array>

namespace cmol {

namespace {

constexpr std::array<std::pair<GateKind, std::string_view>, 7> kind_names{{
    {GateKind::Input, "INPUT"},
    {GateKind::Output, "OUTPUT"},
    {GateKind::And, "AND"},
    {GateKind::Or, "OR"},
    {GateKind::Not, "NOT"},
    {GateKind::Nor, "NOR"},
    {GateKind::Dff, "DFF"},
}};

} // namespace

std::string_view to_string(GateKind kind) {
  for (const auto& [k, name] : kind_names)
    if (k == kind)
      return name;
  return "?";
}

std::optional<GateKind> gate_kind_from_string(std::string_view text) {
  for (const auto& [k, name] : kind_names)
    if (name == text)
      return k;
  return std::nullopt;
}

GateId Circuit::add_gate(GateKind kind, std::vector<GateId> fanin, std::string name) {
  const auto id = static_cast<GateId>(gates_.size());
  if (kind != GateKind::Output) {
    auto [it, inserted] = by_name_.emplace(name, id);
    if (!inserted)
      throw InputError("duplicate definition of signal '" + name + "'");
  }
  for (GateId f : fanin)
    if (f >= id && kind != GateKind::Dff)
      throw InputError("gate '" + name + "' references an undefined gate");
  gates_.push_back(Gate{id, kind, std::move(fanin), std::move(name)});
  if (kind == GateKind::Input)
    inputs_.push_back(id);
  else if (kind == GateKind::Output)
    outputs_.push_back(id);
  return id;
}

std::string Circuit::unique_name(std::string_view base) const {
  std::string candidate(base);
  for (std::size_t n = 1; by_name_.contains(candidate); ++n)
    candidate = std::string(base) + "_" + std::to_string(n);
  return candidate;
}

void Circuit::set_fanin(GateId id, std::vector<GateId> fanin) {
  for (GateId f : fanin)
    if (f >= gates_.size())
      throw InputError("gate '" + gates_.at(id).name + "' references an undefined gate");
  gates_.at(id).fanin = std::move(fanin);
}

std::optional<GateId> Circuit::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end())
    return std::nullopt;
  return it->second;
}

std::size_t Circuit::count(GateKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(gates_.begin(), gates_.end(), [kind](const Gate& g) { return g.kind == kind; }));
}

std::vector<GateId> Circuit::placeable_gates() const {
  std::vector<GateId> result;
  for (const auto& g : gates_)
    if (g.kind != GateKind::Output)
      result.push_back(g.id);
  return result;
}

std::vector<std::vector<GateId>> Circuit::fanouts() const {
  std::vector<std::vector<GateId>> result(gates_.size());
  for (const auto& g : gates_)
    for (GateId f : g.fanin)
      result[f].push_back(g.id);
  return result;
}

std::vector<GateId> Circuit::topological_order() const {
  // Kahn's algorithm; flip-flops act as sources.
  std::vector<std::uint32_t> pending(gates_.size(), 0);
  std::vector<std::vector<GateId>> out(gates_.size());
  for (const auto& g : gates_) {
    if (g.kind == GateKind::Dff)
      continue;
    for (GateId f : g.fanin) {
      ++pending[g.id];
      out[f].push_back(g.id);
    }
  }
  std::vector<GateId> order;
  order.reserve(gates_.size());
  for (const auto& g : gates_)
    if (pending[g.id] == 0)
      order.push_back(g.id);
  for (std::size_t head = 0; head < order.size(); ++head)
    for (GateId succ : out[order[head]])
      if (--pending[succ] == 0)
        order.push_back(succ);
  if (order.size() != gates_.size()) {
    auto it = std::find_if(pending.begin(), pending.end(), [](std::uint32_t p) { return p != 0; });
    throw InputError("cyclic combinational path through '" +
                     gates_[static_cast<std::size_t>(it - pending.begin())].name + "'");
  }
  return order;
}

void Circuit::check() const {
  for (const auto& g : gates_) {
    for (GateId f : g.fanin) {
      if (f >= gates_.size())
        throw InputError("gate '" + g.name + "' has a dangling fanin");
      if (gates_[f].kind == GateKind::Output)
        throw InputError("gate '" + g.name + "' is driven by an output marker");
    }
    const auto arity = g.fanin.size();
    bool ok = true;
    switch (g.kind) {
    case GateKind::Input: ok = arity == 0; break;
    case GateKind::Output:
    case GateKind::Not:
    case GateKind::Dff: ok = arity == 1; break;
    case GateKind::And:
    case GateKind::Or:
    case GateKind::Nor: ok = arity >= 1; break;
    }
    if (!ok)
      throw InputError("gate '" + g.name + "' of kind " + std::string(to_string(g.kind)) +
                       " has invalid fanin count " + std::to_string(arity));
  }
  topological_order();
}

} // namespace cmol
