#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "prepair/core.hpp"
#include "prepair/semantics.hpp"

namespace prepair {

// E_0..E_k; each E_i holds only elements not subsumed earlier.
// When unsafe, the last set is E_k intersected with the initial states.
struct ErrorSequence {
  bool safe = true;
  bool capped = false;  // loop stopped by an iteration cap, not by fixpoint
  OrderKind order = OrderKind::Cover;
  std::vector<std::vector<Config>> sets;
  std::vector<Config> visited;  // full antichain at exit
};

struct BackwardSpec {
  OrderKind order = OrderKind::Cover;
  std::function<std::vector<Config>(const Config&)> pred;
  std::function<bool(const Config&)> covers_initial;
  std::function<Config(const Config&)> witness;
  bool stop_at_initial = true;
  std::size_t max_iterations = 0;  // 0 = until fixpoint
};

ErrorSequence backward_search(const std::vector<Config>& err, const BackwardSpec& spec);

UpSet pred_basis(const Engine& eng, const UpSet& r);
UpSet pred_basis(const System& sys, const UpSet& r);

OrderKind natural_order(const System& sys);

ErrorSequence model_check(const Engine& eng, const UpSet& err, bool stop_at_initial = true);
ErrorSequence model_check(const System& sys, const UpSet& err, bool stop_at_initial = true);

}  // namespace prepair
