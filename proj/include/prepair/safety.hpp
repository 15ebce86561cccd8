#pragma once

#include <string>

#include "prepair/semantics.hpp"

namespace prepair {

// "true", or literals joined by '&'; a literal is [!]name where name is an
// A state or <B state>_<i> for explicit process i (1..k)
Obs parse_obs(const std::string& text, const System& sys, int k);

struct ProductResult {
  System sys;
  UpSet err;
};

ProductResult product(const System& base, int k, const Automaton& aut);

}  // namespace prepair
