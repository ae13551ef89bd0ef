#include "cmol/error.hpp"
#include "cmol/netlist.hpp"
#include "cmol/nor_transform.hpp"
#include "cmol/simulate.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace cmol;

namespace {

// AND/OR/NOT logic with deliberate inverter chains and repeated inverters.
Circuit random_aon(Rng& rng, std::size_t inputs, std::size_t gates) {
  Circuit c;
  std::vector<GateId> pool;
  for (std::size_t i = 0; i < inputs; ++i)
    pool.push_back(c.add_gate(GateKind::Input, {}, "i" + std::to_string(i)));
  for (std::size_t k = 0; k < gates; ++k) {
    const auto pick = [&] { return pool[rng.below(pool.size())]; };
    const auto roll = rng.below(10);
    const std::string name = "g" + std::to_string(k);
    if (roll < 4) {
      pool.push_back(c.add_gate(GateKind::Not, {pick()}, name));
    } else {
      const std::size_t arity = std::min<std::size_t>(pool.size(), 2 + rng.below(2));
      std::vector<GateId> fanin;
      while (fanin.size() < arity) {
        const auto f = pick();
        if (std::find(fanin.begin(), fanin.end(), f) == fanin.end())
          fanin.push_back(f);
      }
      pool.push_back(c.add_gate(roll < 7 ? GateKind::And : GateKind::Or, fanin, name));
    }
  }
  for (std::size_t k = pool.size() - 3; k < pool.size(); ++k)
    c.add_gate(GateKind::Output, {pool[k]}, "o" + std::to_string(k));
  return c;
}

// Reference quadratic scan: NOT gates whose fanin equals that of an earlier NOT.
std::size_t duplicates_quadratic(const Circuit& c) {
  std::size_t n = 0;
  const auto gates = c.gates();
  for (std::size_t v = 0; v < gates.size(); ++v) {
    if (gates[v].kind != GateKind::Not)
      continue;
    for (std::size_t u = 0; u < v; ++u)
      if (gates[u].kind == GateKind::Not && gates[u].fanin == gates[v].fanin) {
        ++n;
        break;
      }
  }
  return n;
}

std::size_t stacked_direct(const Circuit& c) {
  std::size_t n = 0;
  for (const Gate& g : c.gates())
    if (g.kind == GateKind::Not && c.gate(g.fanin[0]).kind == GateKind::Not)
      ++n;
  return n;
}

} // namespace

TEST(NorTransform, HashedDuplicateScanMatchesQuadraticScan) {
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const auto c = random_aon(rng, 3 + rng.below(3), 10 + rng.below(20));
    EXPECT_EQ(count_duplicate_inverters(c), duplicates_quadratic(c));
    EXPECT_EQ(count_stacked_inverters(c), stacked_direct(c));
  }
}

TEST(NorTransform, RandomCircuitsStayEquivalentAndClean) {
  Rng rng(12);
  for (int i = 0; i < 200; ++i) {
    const auto c = random_aon(rng, 2 + rng.below(6), 5 + rng.below(30));
    const auto nor = to_nor(c);
    for (const Gate& g : nor.gates())
      EXPECT_TRUE(g.kind == GateKind::Input || g.kind == GateKind::Output || g.kind == GateKind::Nor ||
                  g.kind == GateKind::Not);
    EXPECT_EQ(stacked_direct(nor), 0u);
    EXPECT_EQ(duplicates_quadratic(nor), 0u);
    EXPECT_EQ(nor.inputs().size(), c.inputs().size());
    const auto eq = check_equivalence(c, nor);
    EXPECT_TRUE(eq.equivalent) << "instance " << i << " output " << eq.mismatch.value_or("");
    EXPECT_TRUE(eq.exhaustive);
  }
}

TEST(NorTransform, AdderKeepsTwelveGates) {
  const auto src = read_circuit_file(fixtures::bench_dir() / "adder.bench");
  const auto nor = to_nor(src);
  EXPECT_EQ(nor.count(GateKind::Nor) + nor.count(GateKind::Not), 12u);
  EXPECT_EQ(nor.placeable_gates().size(), 15u);
  EXPECT_TRUE(check_gate_conservation(src, nor).holds());
  EXPECT_TRUE(check_equivalence(src, nor).equivalent);
}

TEST(NorTransform, GateCountConservedOnRandomProductOfSums) {
  Rng rng(13);
  for (int i = 0; i < 100; ++i) {
    const auto pos = fixtures::random_pos(rng);
    const auto nor = to_nor(pos);
    const auto rep = check_gate_conservation(pos, nor);
    EXPECT_EQ(rep.status, ConservationStatus::Holds) << rep.reason;
    EXPECT_EQ(rep.source_gates, pos.count(GateKind::And) + pos.count(GateKind::Or) + pos.count(GateKind::Not));
    EXPECT_EQ(rep.nor_gates, rep.source_gates);
    EXPECT_TRUE(check_equivalence(pos, nor).equivalent);
  }
}

TEST(NorTransform, NonProductOfSumsIsReportedAsSuch) {
  const auto s27 = sweep(carve_sequential(read_circuit_file(fixtures::bench_dir() / "s27.bench")));
  const auto rep = check_gate_conservation(s27, to_nor(s27));
  EXPECT_EQ(rep.status, ConservationStatus::PreconditionUnmet);
  EXPECT_FALSE(rep.reason.empty());
}

TEST(NorTransform, RejectsSequentialInput) {
  const auto s27 = read_circuit_file(fixtures::bench_dir() / "s27.bench");
  EXPECT_THROW(to_nor(s27), InputError);
}
