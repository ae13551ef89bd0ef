#include "cmol/encoder.hpp"
#include "cmol/error.hpp"
#include "cmol/netlist.hpp"
#include "cmol/placer.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace cmol;

namespace {

std::size_t choose2(std::size_t n) { return n * (n - 1) / 2; }

Circuit tiny() {
  // y = NOR(a, b), z = NOT(y)
  Circuit c;
  const auto a = c.add_gate(GateKind::Input, {}, "a");
  const auto b = c.add_gate(GateKind::Input, {}, "b");
  const auto y = c.add_gate(GateKind::Nor, {a, b}, "y");
  const auto z = c.add_gate(GateKind::Not, {y}, "z");
  c.add_gate(GateKind::Output, {z}, "out");
  return c;
}

} // namespace

// Pairwise reference sizes: cell mutex, gate mutex, placement, one domain clause
// per edge and sink cell, plus one clause per closed device and non-primary gate.
TEST(Encoder, PrePropagationCountsFollowThePairwiseLaw) {
  Rng rng(41);
  std::set<std::pair<std::size_t, std::size_t>> shapes;
  for (int i = 0; i < 80; ++i) {
    const auto c = fixtures::random_nor_circuit(rng, 1 + rng.below(4), 1 + rng.below(20));
    const Fabric f = fixtures::random_fabric(rng, 7, 7, 6);
    const auto enc = encode(c, f, fixtures::random_pins(rng, c, f));
    const std::size_t G = c.placeable_gates().size();
    const std::size_t C = f.cell_count();
    shapes.emplace(G, C);
    const auto& pre = enc.before_propagation;
    EXPECT_EQ(pre.cell_mutex, G * choose2(C));
    EXPECT_EQ(pre.gate_mutex, C * choose2(G));
    EXPECT_EQ(pre.placed, G);
    EXPECT_EQ(pre.domain, fixtures::count_edges(c) * C);
    EXPECT_EQ(pre.stuck_closed, f.stuck_closed_pairs().size() * (G - c.inputs().size()));
    EXPECT_EQ(pre.required, 0u);
    EXPECT_EQ(pre.total() - pre.stuck_closed,
              G * choose2(C) + C * choose2(G) + G + fixtures::count_edges(c) * C);
  }
  EXPECT_GE(shapes.size(), 50u);
}

TEST(Encoder, UnconstrainedCountsAreLiteral) {
  const auto c = tiny();
  const Fabric f(3, 2, 2);
  const auto enc = encode(c, f, {});
  EXPECT_EQ(enc.constants, 0u);
  EXPECT_EQ(enc.cnf.num_vars(), 4 * 6);
  EXPECT_EQ(enc.before_propagation.total(), 4 * 15 + 6 * 6 + 4 + 3 * 6u);
}

TEST(Encoder, S27WithPerimeterPinsHasPublishedSize) {
  const auto s27 = prepare_circuit(read_circuit_file(fixtures::bench_dir() / "s27.bench"));
  const Fabric f(5, 5, 9);
  const auto enc = encode(s27, f, perimeter_pins(s27, 5, 5));
  EXPECT_EQ(enc.cnf.num_vars(), 376);
  EXPECT_EQ(enc.cnf.num_clauses(), 7164u);
}

TEST(Encoder, InputsCannotSitOnClosedReceivers) {
  const auto c = tiny();
  const Fabric f = Fabric(3, 3, 3).apply_defect({DefectKind::StuckClosed, {0, 0}, Coord{1, 1}});
  const auto enc = encode(c, f, {});
  const std::size_t b = f.index({1, 1});
  EXPECT_EQ(enc.vars.constant(0, b), std::optional<bool>(false));  // a
  EXPECT_EQ(enc.vars.constant(1, b), std::optional<bool>(false));  // b
  EXPECT_EQ(enc.vars.constant(2, b), std::nullopt);                // y may use it
  EXPECT_EQ(enc.before_propagation.stuck_closed, 2u);
}

TEST(Encoder, DeadCellsAndPinsBecomeConstants) {
  const auto c = tiny();
  const Fabric f = Fabric(3, 3, 3).apply_defect({DefectKind::DeadCell, {2, 2}});
  PinSet pins;
  pins.must["a"] = {{0, 0}};
  pins.forbid["z"] = {{1, 1}};
  const auto enc = encode(c, f, pins);
  for (std::size_t g = 0; g < 4; ++g)
    EXPECT_EQ(enc.vars.constant(g, f.index({2, 2})), std::optional<bool>(false));
  for (std::size_t cell = 1; cell < 9; ++cell)
    EXPECT_TRUE(enc.vars.constant(0, cell).has_value());
  EXPECT_EQ(enc.vars.constant(3, f.index({1, 1})), std::optional<bool>(false));
  EXPECT_EQ(enc.vars.var(0, 0), 1);
}

TEST(Encoder, OutputNamesAndWildcardResolve) {
  const auto c = tiny();
  PinSet pins;
  pins.must["out"] = {{0, 0}};
  pins.must["*"] = {{1, 0}, {1, 1}, {2, 1}};
  const auto resolved = resolve_pins(c, pins.must);
  EXPECT_EQ(resolved.at(3), (std::set<Coord>{{0, 0}}));
  EXPECT_EQ(resolved.at(0).size(), 3u);
  EXPECT_EQ(resolved.size(), 4u);
  EXPECT_THROW(resolve_pin_gate(c, "nope"), InputError);
}

TEST(Encoder, TriviallyUnsatCarriesDiagnostics) {
  const auto c = tiny();
  const auto crowded = encode(c, Fabric(3, 1, 2), {});
  EXPECT_TRUE(crowded.trivially_unsat);
  ASSERT_FALSE(crowded.diagnostics.empty());
  EXPECT_EQ(crowded.diagnostics.front().code, "insufficient_cells");
  EXPECT_TRUE(crowded.cnf.trivially_unsat());

  const Fabric f = Fabric(3, 3, 3).apply_defect({DefectKind::DeadCell, {0, 0}});
  PinSet pins;
  pins.must["a"] = {{0, 0}};
  const auto pinned = encode(c, f, pins);
  EXPECT_TRUE(pinned.trivially_unsat);
  EXPECT_EQ(pinned.diagnostics.front().code, "no_admissible_cell");
}

TEST(Encoder, RejectsUnconvertedLogicAndBadPins) {
  const auto raw = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = AND(a, b)\n");
  EXPECT_THROW(encode(raw, Fabric(3, 3, 3), {}), InputError);
  PinSet overlap;
  overlap.must["a"] = {{0, 0}};
  overlap.forbid["a"] = {{0, 0}};
  EXPECT_THROW(encode(tiny(), Fabric(3, 3, 3), overlap), InputError);
  PinSet empty;
  empty.must["a"] = {};
  EXPECT_THROW(encode(tiny(), Fabric(3, 3, 3), empty), InputError);
}

TEST(Encoder, DecodeInvertsAHandBuiltModel) {
  const auto c = tiny();
  const Fabric f(3, 3, 3);
  const auto enc = encode(c, f, {});
  const std::vector<std::size_t> want{0, 2, 4, 8};
  Model m(static_cast<std::size_t>(enc.cnf.num_vars()), false);
  for (std::size_t g = 0; g < want.size(); ++g)
    m[static_cast<std::size_t>(enc.vars.var(g, want[g])) - 1] = true;
  EXPECT_EQ(decode_indices(m, enc.vars), want);
  const auto p = decode(m, enc.vars, c.size());
  EXPECT_EQ(p.cell(2), std::optional<Coord>(f.coord(4)));
  EXPECT_FALSE(p.cell(4).has_value());

  m[static_cast<std::size_t>(enc.vars.var(0, 1)) - 1] = true;
  EXPECT_THROW(decode_indices(m, enc.vars), InternalError);
}

TEST(Pins, JsonRoundTrip) {
  PinSet pins;
  pins.must["a"] = {{0, 0}, {1, 2}};
  pins.forbid["*"] = {{3, 3}};
  const auto back = pins_from_json(pins_to_json(pins));
  EXPECT_EQ(back.must, pins.must);
  EXPECT_EQ(back.forbid, pins.forbid);
}
