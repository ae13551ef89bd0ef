#pragma once

#include "cmol/circuit.hpp"

#include <cstddef>
#include <string>

namespace cmol {

/*! \brief Rewrites an AND/OR/NOT circuit into NOR/NOT gates.
 *
 * AND gates become NOR gates with an inverter on every input, OR gates become
 * NOR gates followed by an inverter (single-input NORs are emitted as NOT).
 * Afterwards, until nothing changes: sinks of an inverter fed by an inverter
 * are reconnected to the first inverter's input, and inverters with the same
 * fanin are merged onto the lowest-numbered one (hashed by fanin).  Gates
 * that no longer reach an output are dropped; every input is kept.
 *
 * Throws InputError if the circuit holds anything other than
 * INPUT/OUTPUT/AND/OR/NOT.
 */
Circuit to_nor(const Circuit& circuit);

/// Number of NOT gates whose fanin is another NOT gate.
std::size_t count_stacked_inverters(const Circuit& circuit);

/// Number of NOT gates that share their fanin with a lower-numbered NOT gate.
std::size_t count_duplicate_inverters(const Circuit& circuit);

enum class ConservationStatus { Holds, CountMismatch, PreconditionUnmet };

struct ConservationReport {
  ConservationStatus status = ConservationStatus::PreconditionUnmet;
  std::size_t source_gates = 0;  ///< AND + OR + NOT in the source circuit
  std::size_t nor_gates = 0;     ///< NOR + NOT in the converted circuit
  std::string reason;            ///< why the source is not product-of-sums

  bool holds() const { return status == ConservationStatus::Holds; }
};

/*! \brief Checks gate-count conservation for product-of-sums circuits.
 *
 * The source qualifies when it has at least one AND gate, every AND has two or
 * more inputs all driven by OR gates, every OR has two or more inputs that
 * are primary inputs or inverted primary inputs and feeds only AND gates,
 * each primary input is inverted at most once, and outputs are driven by AND
 * gates.  Otherwise the status is PreconditionUnmet; counts are filled in
 * either way.
 */
ConservationReport check_gate_conservation(const Circuit& source, const Circuit& converted);

} // namespace cmol
