#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "prepair/deadlock.hpp"
#include "prepair/semantics.hpp"

namespace prepair {

enum class Op : std::uint8_t { True, False, Atom, Not, And, Or };

struct Node;
using Constraint = std::shared_ptr<const Node>;

struct Node {
  Op op = Op::True;
  int atom = -1;
  std::vector<Constraint> kids;
  std::string key;  // structural key, atoms as #index
};

Constraint c_true();
Constraint c_false();
Constraint c_atom(int t);
Constraint c_not(Constraint x);
Constraint c_and(std::vector<Constraint> xs);
Constraint c_or(std::vector<Constraint> xs);
Constraint c_one(const std::vector<int>& atoms);  // exactly one

bool evaluate(const Constraint& c, const std::vector<char>& assign);
std::vector<int> atoms_of(const Constraint& c);
// set of literals (+t+1 / -(t+1)) if c is a single clause, empty otherwise
std::vector<int> clause_literals(const Constraint& c);

std::string to_sexpr(const Constraint& c, const System& sys);
Constraint parse_sexpr(std::string_view text, const System& sys);

Constraint tr_constr(const System& sys);
Constraint pairing_constr(const System& sys);
Constraint one_hot_receive(const System& sys);

// re = [RE_{k-1}, ..., RE_0], each sorted
class ConstraintBuilder {
 public:
  ConstraintBuilder(const Engine& eng, const std::vector<std::vector<Config>>& re) : eng_(eng), re_(re) {}
  Constraint build(const Config& s, std::size_t idx = 0);

 private:
  const Engine& eng_;
  const std::vector<std::vector<Config>>& re_;
  std::map<std::pair<Config, std::size_t>, Constraint> memo_;
};

Constraint build_constr(const Engine& eng, const Config& s, const std::vector<std::vector<Config>>& re);
Constraint build_sync_constr(const Engine& eng, const Config& s, const std::vector<std::vector<Config>>& re);

// path negation plus "keep an exit of the final configuration"; full = engine over the unrestricted system
Constraint deadlock_constr(const Path& path, const Engine& full);

Constraint path_constr(const std::vector<Step>& steps);
Constraint block_assignment(const std::vector<char>& assign);

}  // namespace prepair
