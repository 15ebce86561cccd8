#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "prepair/deadlock.hpp"
#include "prepair/semantics.hpp"

namespace prepair {

struct resource_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr std::size_t kOracleLimit = 1000000;

bool explicit_reach(const Engine& eng, int n, const UpSet& err, std::size_t limit = kOracleLimit);
std::optional<Path> explicit_error_path(const Engine& eng, int n, const UpSet& err, std::size_t limit = kOracleLimit);
std::vector<Config> explicit_deadlocks(const Engine& eng, int n, std::size_t limit = kOracleLimit);

// every configuration with all counts <= box (and every discrete combination)
std::vector<Config> enumerate_box(const System& sys, int box);

// pred(up r) or pred*(up r) restricted to the box; the order of r decides "up"
std::vector<Config> bounded_pred(const Engine& eng, const UpSet& r, int box, bool multi);

// O-predecessors by definition: one transition fired k >= 1 times
std::vector<Config> bounded_opred(const Engine& eng, const UpSet& r, int box);

}  // namespace prepair
