#pragma once

#include <string>
#include <vector>

#include "prepair/constraints.hpp"
#include "prepair/mc.hpp"
#include "prepair/sat.hpp"

namespace prepair {

enum class Mode : std::uint8_t { Full, SinglePath, Naive };

const char* mode_name(Mode m);

struct RepairOptions {
  Mode mode = Mode::Full;
  bool deadlock_check = true;
  std::size_t max_iter = 0;  // 0 = min(2^|delta|, 100000)
  Preference pref;
  std::string emit_dimacs_dir;
  int confirm_n = 4;  // bound for confirming overapproximated rendezvous deadlocks
};

struct IterationRecord {
  int iteration = 0;
  std::string kind;  // error | deadlock | safe
  std::vector<char> candidate;
  std::vector<std::vector<Config>> sequence;  // E_0..E_k or D_0..D_k
  std::vector<std::vector<Config>> re;        // RE_k..RE_0, or the concrete deadlock run
  Constraint added;
  bool excludes_candidate = true;
  std::vector<std::string> notes;
};

struct RepairOutcome {
  enum class Verdict { Repaired, Unrealizable, IterationLimit } verdict = Verdict::Unrealizable;
  std::vector<char> keep;
  int iterations = 0;  // model-checker calls
  std::vector<IterationRecord> history;
  std::vector<std::string> warnings;
  std::vector<Constraint> accumulated;
};

const char* verdict_name(RepairOutcome::Verdict v);

// RE_k..RE_0 (each sorted)
std::vector<std::vector<Config>> reachable_error_sequence(const Engine& eng, const ErrorSequence& seq);

Constraint error_constraint(const Engine& eng, const std::vector<std::vector<Config>>& re, Mode mode,
                            const std::vector<char>& candidate);

RepairOutcome repair(const System& sys, const UpSet& err, const Constraint& init, const RepairOptions& opts = {});

struct SafeSize {
  bool safe_for_all = true;
  int bound = -1;  // largest safe size m_e - 1
};

SafeSize max_safe_size(const System& sys, const UpSet& err);

}  // namespace prepair
