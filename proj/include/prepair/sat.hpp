#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "prepair/constraints.hpp"

namespace prepair {

// vars 1..num_atoms are transition atoms (transition index + 1), the rest are Tseitin auxiliaries
struct CnfFormula {
  int num_vars = 0;
  int num_atoms = 0;
  std::vector<std::vector<int>> clauses;
  std::vector<std::string> names;  // per atom
};

CnfFormula to_cnf(const std::vector<Constraint>& parts, const System& sys);
CnfFormula to_cnf(const Constraint& c, const System& sys);

// decide these atoms first with the given phase, then the remaining atoms (phase true), then auxiliaries
struct Preference {
  std::vector<std::pair<int, bool>> order;
};

Preference parse_preference(const std::string& text, const System& sys);

// model over all variables (index 0 unused); nullopt = unsat
std::optional<std::vector<char>> solve_full(const CnfFormula& f, const Preference& pref = {});
// model projected on atoms
std::optional<std::vector<char>> solve(const CnfFormula& f, const Preference& pref = {});

std::string export_dimacs(const CnfFormula& f);
CnfFormula parse_dimacs(const std::string& text);
// accepts "s SATISFIABLE / v ..." or "SAT\n<lits>" or bare literal lists; projected on atoms
std::vector<char> import_model(const std::string& text, const CnfFormula& f);

}  // namespace prepair
