// Generates deterministic sequential benchmarks with a given interface.
//
//   gen_synthetic --name s208_like --inputs 10 --outputs 1 --dffs 8 --cells 136 --seed 208 > s208_like.bench
//
// Random AND/OR/NAND/NOR/NOT logic is grown over the primary inputs and
// flip-flop outputs until the NOR/NOT pipeline yields about `--cells`
// assignable gates.

#include "cmol/circuit.hpp"
#include "cmol/netlist.hpp"
#include "cmol/placer.hpp"
#include "cmol/rng.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

namespace {

struct Interface {
  int inputs = 0;
  int outputs = 0;
  int dffs = 0;
};

std::string generate(const Interface& io, int gates, std::uint64_t seed) {
  cmol::Rng rng(seed);
  std::vector<std::string> pool;
  std::vector<int> uses;
  std::string body;
  std::string header;
  for (int i = 0; i < io.inputs; ++i) {
    pool.push_back("I" + std::to_string(i));
    header += "INPUT(" + pool.back() + ")\n";
  }
  for (int i = 0; i < io.dffs; ++i)
    pool.push_back("Q" + std::to_string(i));
  uses.assign(pool.size(), 0);
  const std::size_t sources = pool.size();

  static const char* kKinds[] = {"AND", "OR", "NAND", "NOR", "NOT"};
  auto pick = [&](std::size_t lo) {
    // prefer recent signals so the logic gains depth
    const std::size_t n = pool.size() - lo;
    const std::size_t back = std::min<std::size_t>(n, 12);
    const std::size_t i = rng.coin(0.7) ? pool.size() - 1 - rng.below(back) : lo + rng.below(n);
    return i;
  };
  auto emit = [&](const std::string& kind, std::vector<std::size_t> fanin) {
    const std::string name = "N" + std::to_string(pool.size());
    body += name + " = " + kind + "(";
    for (std::size_t k = 0; k < fanin.size(); ++k) {
      body += (k ? ", " : "") + pool[fanin[k]];
      ++uses[fanin[k]];
    }
    body += ")\n";
    pool.push_back(name);
    uses.push_back(0);
  };

  // every source is consumed by a leading two-input gate
  for (std::size_t i = 0; i < sources; i += 2) {
    const std::size_t j = i + 1 < sources ? i + 1 : rng.below(sources);
    if (i == j)
      emit("NOT", {i});
    else
      emit(kKinds[rng.below(4)], {i, j});
  }
  while (static_cast<int>(pool.size() - sources) < gates) {
    const auto kind = kKinds[rng.below(10) < 2 ? 4 : rng.below(4)];
    if (std::string(kind) == "NOT") {
      emit(kind, {pick(sources)});
      continue;
    }
    const std::size_t arity = 2 + rng.below(2);
    std::vector<std::size_t> fanin;
    while (fanin.size() < arity) {
      const auto s = pick(0);
      if (std::find(fanin.begin(), fanin.end(), s) == fanin.end())
        fanin.push_back(s);
    }
    emit(kind, fanin);
  }

  // fold unused gates together until they fit the output slots
  const int slots = io.outputs + io.dffs;
  auto unused = [&] {
    std::vector<std::size_t> u;
    for (std::size_t i = sources; i < pool.size(); ++i)
      if (uses[i] == 0)
        u.push_back(i);
    return u;
  };
  for (auto u = unused(); static_cast<int>(u.size()) > slots; u = unused())
    emit(rng.coin() ? "OR" : "AND", {u[0], u[1]});
  // too few: add gates over the sources only, so nothing unused is consumed
  while (static_cast<int>(unused().size()) < slots) {
    const std::size_t a = rng.below(sources);
    const std::size_t b = rng.below(sources);
    if (a == b)
      emit("NOT", {a});
    else
      emit(kKinds[rng.below(4)], {a, b});
  }
  const auto u = unused();

  std::string tail;
  for (int i = 0; i < io.outputs; ++i)
    header += "OUTPUT(" + pool[u[static_cast<std::size_t>(i)]] + ")\n";
  for (int i = 0; i < io.dffs; ++i)
    tail += "Q" + std::to_string(i) + " = DFF(" + pool[u[static_cast<std::size_t>(io.outputs + i)]] + ")\n";
  return header + "\n" + tail + "\n" + body;
}

std::size_t pipeline_cells(const std::string& text) {
  return cmol::prepare_circuit(cmol::parse_bench(text)).placeable_gates().size();
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"synthetic sequential benchmark generator"};
  std::string name = "synthetic";
  Interface io;
  int cells = 100;
  std::uint64_t seed = 1;
  app.add_option("--name", name);
  app.add_option("--inputs", io.inputs)->required();
  app.add_option("--outputs", io.outputs)->required();
  app.add_option("--dffs", io.dffs)->required();
  app.add_option("--cells", cells, "target assignable gates after the NOR pipeline")->required();
  app.add_option("--seed", seed);
  CLI11_PARSE(app, argc, argv);

  std::string best;
  long best_gap = -1;
  std::size_t best_cells = 0;
  for (int gates = 1; gates <= cells * 2; ++gates) {
    const auto text = generate(io, gates, seed);
    const auto got = pipeline_cells(text);
    const long gap = std::labs(static_cast<long>(got) - cells);
    if (best_gap < 0 || gap < best_gap) {
      best_gap = gap;
      best = text;
      best_cells = got;
    }
    if (gap == 0 || static_cast<long>(got) > 2 * cells)
      break;
  }
  std::cout << "# " << name << ": synthetic stand-in, " << io.inputs << " inputs, " << io.outputs << " outputs, "
            << io.dffs << " flip-flops, " << best_cells << " assignable gates after NOR conversion\n"
            << "# generated by gen_synthetic --seed " << seed << "\n\n"
            << best;
  return 0;
}
