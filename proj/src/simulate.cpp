#include "cmol/simulate.hpp"

#include "cmol/error.hpp"
#include "cmol/rng.hpp"

#include <algorithm>
#include <unordered_map>

namespace cmol {

namespace {

std::size_t word_count(std::size_t vectors) { return (vectors + 63) / 64; }

std::uint64_t tail_mask(std::size_t vectors) {
  const auto rem = vectors % 64;
  return rem == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << rem) - 1;
}

} // namespace

Patterns exhaustive_patterns(std::size_t num_inputs) {
  if (num_inputs > 24)
    throw InputError("exhaustive simulation limited to 24 inputs");
  Patterns p;
  p.num_vectors = std::size_t{1} << num_inputs;
  const auto words = word_count(p.num_vectors);
  p.words.assign(num_inputs, std::vector<std::uint64_t>(words, 0));
  for (std::size_t i = 0; i < num_inputs; ++i) {
    for (std::size_t w = 0; w < words; ++w) {
      std::uint64_t word = 0;
      for (std::size_t b = 0; b < 64; ++b) {
        const std::size_t k = w * 64 + b;
        if (k < p.num_vectors && ((k >> i) & 1))
          word |= std::uint64_t{1} << b;
      }
      p.words[i][w] = word;
    }
  }
  return p;
}

Patterns random_patterns(std::size_t num_inputs, std::size_t num_vectors, std::uint64_t seed) {
  Rng rng(seed);
  Patterns p;
  p.num_vectors = num_vectors;
  const auto words = word_count(num_vectors);
  p.words.assign(num_inputs, std::vector<std::uint64_t>(words, 0));
  for (auto& row : p.words) {
    for (auto& w : row)
      w = rng.next();
    if (!row.empty())
      row.back() &= tail_mask(num_vectors);
  }
  return p;
}

std::vector<std::vector<std::uint64_t>> simulate(const Circuit& circuit, const Patterns& stimulus) {
  if (stimulus.words.size() != circuit.inputs().size())
    throw InputError("stimulus has " + std::to_string(stimulus.words.size()) + " rows but circuit has " +
                     std::to_string(circuit.inputs().size()) + " inputs");
  const auto words = word_count(stimulus.num_vectors);
  const auto mask = tail_mask(stimulus.num_vectors);
  std::vector<std::vector<std::uint64_t>> value(circuit.size());
  for (std::size_t i = 0; i < circuit.inputs().size(); ++i)
    value[circuit.inputs()[i]] = stimulus.words[i];

  for (GateId id : circuit.topological_order()) {
    const auto& g = circuit.gate(id);
    if (g.kind == GateKind::Input)
      continue;
    auto& out = value[id];
    out.assign(words, 0);
    switch (g.kind) {
    case GateKind::Output:
      out = value[g.fanin[0]];
      break;
    case GateKind::Not:
      for (std::size_t w = 0; w < words; ++w)
        out[w] = ~value[g.fanin[0]][w];
      break;
    case GateKind::And:
      std::fill(out.begin(), out.end(), ~std::uint64_t{0});
      for (GateId f : g.fanin)
        for (std::size_t w = 0; w < words; ++w)
          out[w] &= value[f][w];
      break;
    case GateKind::Or:
    case GateKind::Nor:
      for (GateId f : g.fanin)
        for (std::size_t w = 0; w < words; ++w)
          out[w] |= value[f][w];
      if (g.kind == GateKind::Nor)
        for (auto& w : out)
          w = ~w;
      break;
    case GateKind::Dff:
      throw InputError("cannot simulate flip-flop '" + g.name + "'; carve the circuit first");
    case GateKind::Input:
      break;
    }
    if (!out.empty())
      out.back() &= mask;
  }

  std::vector<std::vector<std::uint64_t>> result;
  result.reserve(circuit.outputs().size());
  for (GateId id : circuit.outputs())
    result.push_back(value[id]);
  return result;
}

EquivalenceReport check_equivalence(const Circuit& a, const Circuit& b, std::size_t exhaustive_limit,
                                    std::size_t random_vectors, std::uint64_t seed) {
  std::vector<std::string> names;
  std::unordered_map<std::string, std::size_t> row_of;
  for (const Circuit* c : {&a, &b})
    for (GateId id : c->inputs())
      if (row_of.emplace(c->gate(id).name, names.size()).second)
        names.push_back(c->gate(id).name);

  EquivalenceReport report;
  report.exhaustive = names.size() <= exhaustive_limit;
  const Patterns all = report.exhaustive ? exhaustive_patterns(names.size())
                                         : random_patterns(names.size(), random_vectors, seed);
  report.vectors = all.num_vectors;

  auto restrict = [&](const Circuit& c) {
    Patterns p;
    p.num_vectors = all.num_vectors;
    for (GateId id : c.inputs())
      p.words.push_back(all.words[row_of.at(c.gate(id).name)]);
    return p;
  };
  const auto out_a = simulate(a, restrict(a));
  const auto out_b = simulate(b, restrict(b));

  std::unordered_map<std::string, std::size_t> b_index;
  for (std::size_t j = 0; j < b.outputs().size(); ++j)
    b_index.emplace(b.gate(b.outputs()[j]).name, j);
  for (std::size_t i = 0; i < a.outputs().size(); ++i) {
    auto it = b_index.find(a.gate(a.outputs()[i]).name);
    if (it == b_index.end())
      continue;
    ++report.compared_outputs;
    if (report.equivalent && out_a[i] != out_b[it->second]) {
      report.equivalent = false;
      report.mismatch = it->first;
    }
  }
  return report;
}

} // namespace cmol
