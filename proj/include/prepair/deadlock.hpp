#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "prepair/mc.hpp"
#include "prepair/semantics.hpp"

namespace prepair {

struct unsupported_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// B transitions (q_i,{q_i},q_j); empty means the assumption holds
std::vector<int> check_self_guard_assumption(const System& sys);

UpSet deadlock_basis(const Engine& eng);
UpSet db_pred(const Engine& eng, const UpSet& r);
std::vector<Config> db_pred_one(const Engine& eng, const Config& r);

struct DeadlockResult {
  bool deadlock = false;
  ErrorSequence seq;  // CoverZero sequence D_0..D_k
};

DeadlockResult detect_deadlock(const Engine& eng, std::size_t cap = 0);  // cap 0 = 2^|B|
DeadlockResult detect_deadlock(const System& sys);

// A concrete run ending in a configuration without successors.
struct Path {
  std::vector<Config> states;  // states.size() == steps.size() + 1
  std::vector<Step> steps;
};

std::optional<Path> find_deadlock_path(const Engine& eng, const Config& start, std::size_t limit = 1000000);

// pairs (a!, a?) become two disjunctive transitions guarded on each other's source
System pr_overapprox(const System& sys);

}  // namespace prepair
