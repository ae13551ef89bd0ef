#include "cmol/cnf.hpp"

#include "cmol/error.hpp"

#include <cstdlib>
#include <sstream>

namespace cmol {

void CnfFormula::add_clause(std::span<const int> literals) {
  for (int lit : literals) {
    if (lit == 0)
      throw InputError("literal 0 inside a clause");
    const int v = lit > 0 ? lit : -lit;
    if (v > num_vars_)
      num_vars_ = v;
    literals_.push_back(lit);
  }
  starts_.push_back(literals_.size());
}

bool CnfFormula::trivially_unsat() const {
  for (std::size_t i = 0; i < num_clauses(); ++i)
    if (clause(i).empty())
      return true;
  return false;
}

std::string emit_dimacs(const CnfFormula& cnf) {
  std::string out = "p cnf " + std::to_string(cnf.num_vars()) + " " + std::to_string(cnf.num_clauses()) + "\n";
  out.reserve(out.size() + cnf.num_literals() * 6 + cnf.num_clauses() * 2);
  for (std::size_t i = 0; i < cnf.num_clauses(); ++i) {
    for (int lit : cnf.clause(i)) {
      out += std::to_string(lit);
      out += ' ';
    }
    out += "0\n";
  }
  return out;
}

CnfFormula parse_dimacs(std::string_view text) {
  std::istringstream in{std::string(text)};
  CnfFormula cnf;
  bool header = false;
  long declared_clauses = 0;
  std::vector<int> current;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first) || first == "c" || first[0] == 'c' || first == "%")
      continue;
    if (first == "p") {
      std::string fmt;
      long vars = 0;
      if (!(ls >> fmt >> vars >> declared_clauses) || fmt != "cnf" || vars < 0 || declared_clauses < 0)
        throw InputError("malformed DIMACS header: '" + line + "'");
      cnf.set_num_vars(static_cast<int>(vars));
      header = true;
      continue;
    }
    if (!header)
      throw InputError("DIMACS clause before 'p cnf' header");
    std::istringstream tokens(line);
    std::string tok;
    while (tokens >> tok) {
      char* end = nullptr;
      const long lit = std::strtol(tok.c_str(), &end, 10);
      if (*end != '\0')
        throw InputError("bad DIMACS literal '" + tok + "'");
      if (std::labs(lit) > cnf.num_vars())
        throw InputError("DIMACS literal " + tok + " exceeds the declared " + std::to_string(cnf.num_vars()) +
                         " variables");
      if (lit == 0) {
        cnf.add_clause(current);
        current.clear();
      } else {
        current.push_back(static_cast<int>(lit));
      }
    }
  }
  if (!current.empty())
    cnf.add_clause(current);
  if (!header)
    throw InputError("missing DIMACS header");
  if (static_cast<long>(cnf.num_clauses()) != declared_clauses)
    throw InputError("DIMACS header declares " + std::to_string(declared_clauses) + " clauses, found " +
                     std::to_string(cnf.num_clauses()));
  return cnf;
}

bool check_model(const CnfFormula& cnf, const Model& model) {
  if (model.size() < static_cast<std::size_t>(cnf.num_vars()))
    return false;
  for (std::size_t i = 0; i < cnf.num_clauses(); ++i) {
    bool satisfied = false;
    for (int lit : cnf.clause(i))
      if (literal_value(model, lit)) {
        satisfied = true;
        break;
      }
    if (!satisfied)
      return false;
  }
  return true;
}

} // namespace cmol
