#pragma once

#include "cmol/cnf.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>

namespace cmol {

enum class SolveStatus { Sat, Unsat, TimedOut };

std::string_view to_string(SolveStatus status);

struct SolveStats {
  std::uint64_t conflicts = 0;
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
  std::uint64_t restarts = 0;
  std::uint64_t learnt_clauses = 0;
  double seconds = 0.0;
};

struct SolveResult {
  SolveStatus status = SolveStatus::TimedOut;
  Model model;  ///< empty unless Sat
  SolveStats stats;
};

struct SolverOptions {
  std::uint64_t conflict_limit = 0;  ///< 0 = unlimited
  double time_limit_seconds = 0.0;   ///< 0 = unlimited
  /// 0 keeps the natural variable order; other values perturb initial
  /// activities deterministically.
  std::uint64_t seed = 0;
  /// Called with every learnt clause (DIMACS literals) as it is derived.
  std::function<void(std::span<const int>)> on_learnt;
};

/*! \brief Conflict-driven clause learning.
 *
 * Two watched literals with blocker literals and implicit binary clauses,
 * first-UIP learning with recursive minimization, VSIDS with phase saving,
 * Luby restarts and LBD-based clause deletion.  Any Sat model is re-checked
 * against `cnf`; a failing check throws InternalError.
 */
SolveResult solve(const CnfFormula& cnf, const SolverOptions& options = {});

/*! \brief Runs an external DIMACS solver.
 *
 * `command` is a shell command template in which `{}` is replaced by the path
 * of a temporary DIMACS file (appended when absent).  The solver must print
 * SAT-competition style `s ...` and `v ...` lines.  The model is checked like
 * the embedded one.  Throws InputError when the output carries no verdict.
 */
SolveResult solve_external(const CnfFormula& cnf, const std::string& command, const SolverOptions& options = {});

/// Parses SAT-competition output (`s SATISFIABLE`, `v 1 -2 ... 0`).
SolveResult parse_competition_output(std::string_view text, int num_vars);

} // namespace cmol
