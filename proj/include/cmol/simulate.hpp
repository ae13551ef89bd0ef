#pragma once

#include "cmol/circuit.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cmol {

/// Bit-parallel stimulus: `words[i]` is the pattern stream of input i, 64
/// vectors per word.  Only the low `num_vectors` bits overall are meaningful.
struct Patterns {
  std::size_t num_vectors = 0;
  std::vector<std::vector<std::uint64_t>> words;
};

/// All 2^n assignments; vector k sets input i to bit i of k.  n <= 24.
Patterns exhaustive_patterns(std::size_t num_inputs);
Patterns random_patterns(std::size_t num_inputs, std::size_t num_vectors, std::uint64_t seed);

/// Evaluates a combinational circuit.  Stimulus rows follow `inputs()`, result
/// rows follow `outputs()`.  Bits past `num_vectors` in the last word are zero.
std::vector<std::vector<std::uint64_t>> simulate(const Circuit& circuit, const Patterns& stimulus);

struct EquivalenceReport {
  bool equivalent = true;
  bool exhaustive = false;
  std::size_t vectors = 0;
  std::size_t compared_outputs = 0;
  std::optional<std::string> mismatch;   ///< name of the first differing output
};

/*! \brief Compares two circuits by input/output name.
 *
 * Inputs are matched by name over the union of both input sets; outputs are
 * compared where both circuits have one of the same name.  With at most
 * `exhaustive_limit` inputs every vector is tried, otherwise `random_vectors`
 * seeded vectors are.
 */
EquivalenceReport check_equivalence(const Circuit& a, const Circuit& b,
                                    std::size_t exhaustive_limit = 16,
                                    std::size_t random_vectors = 10000,
                                    std::uint64_t seed = 1);

} // namespace cmol
