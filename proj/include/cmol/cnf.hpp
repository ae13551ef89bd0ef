#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cmol {

/// CNF over variables 1..num_vars with DIMACS-style signed literals.
/// Clauses live in one flat buffer.
class CnfFormula {
public:
  CnfFormula() = default;
  explicit CnfFormula(int num_vars) : num_vars_(num_vars) {}

  int num_vars() const { return num_vars_; }
  void set_num_vars(int n) { num_vars_ = n; }
  int new_var() { return ++num_vars_; }

  void add_clause(std::span<const int> literals);
  void add_clause(std::initializer_list<int> literals) {
    add_clause(std::span<const int>(literals.begin(), literals.size()));
  }

  std::size_t num_clauses() const { return starts_.size() - 1; }
  std::size_t num_literals() const { return literals_.size(); }
  std::span<const int> clause(std::size_t i) const {
    return {literals_.data() + starts_[i], starts_[i + 1] - starts_[i]};
  }

  /// True when the formula contains the empty clause.
  bool trivially_unsat() const;

private:
  int num_vars_ = 0;
  std::vector<int> literals_;
  std::vector<std::size_t> starts_{0};
};

/// Model indexed by variable - 1.
using Model = std::vector<bool>;

inline bool literal_value(const Model& model, int lit) {
  const bool v = model[static_cast<std::size_t>(lit > 0 ? lit : -lit) - 1];
  return lit > 0 ? v : !v;
}

/// `p cnf V C` header, one clause per line terminated by 0, in clause order.
std::string emit_dimacs(const CnfFormula& cnf);

/// Accepts comments and clauses spanning lines.  Throws InputError.
CnfFormula parse_dimacs(std::string_view text);

/// True iff every clause has a literal that is true under `model`.
bool check_model(const CnfFormula& cnf, const Model& model);

} // namespace cmol
