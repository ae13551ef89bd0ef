#pragma once

#include "cmol/circuit.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <string_view>

namespace cmol {

/*! \brief Parses an ISCAS-89 `.bench` netlist.
 *
 * NAND becomes AND+NOT, NOR becomes OR+NOT and XOR becomes (a & !b) | (!a & b)
 * so that the result only holds AND/OR/NOT logic.  BUFF/BUF is a wire alias.
 * DFF gates are kept as markers whose single fanin is the D input.
 *
 * Throws InputError on undefined or duplicate signals, unsupported opcodes
 * and combinational cycles.
 */
Circuit parse_bench(std::string_view text);

/// Inverse of `parse_bench` for AND/OR/NOT/NOR/DFF circuits.  NOR gates are
/// written as NOR, so re-parsing them yields OR+NOT.
std::string emit_bench(const Circuit& circuit);

/// Structural JSON: `{"inputs":[..],"outputs":[..],"gates":[{"name","kind","fanin"}]}`.
/// Gate kinds are the IR kinds plus BUFF (alias).  Unlike `.bench`, NOR is kept.
Circuit circuit_from_json(const nlohmann::json& doc);
nlohmann::json circuit_to_json(const Circuit& circuit);

/// Loads `.bench` or `.json` by extension.
Circuit read_circuit_file(const std::filesystem::path& path);

/// Turns every flip-flop output into a new primary input and every flip-flop
/// input into a new primary output.  Original inputs/outputs keep their
/// positions; the new ones follow in flip-flop order.
Circuit carve_sequential(const Circuit& circuit);

/// Dead-gate removal plus alias collapse (single-input AND/OR, repeated
/// fanins of AND/OR/NOR).  Inputs that reach no output are dropped too.
Circuit sweep(const Circuit& circuit);

} // namespace cmol
