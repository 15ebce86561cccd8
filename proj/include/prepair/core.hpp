#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace prepair {

enum class Role : std::uint8_t { A, B };

// Cover: a equal, counts pointwise <=. CoverZero: also same zero pattern.
// Product: Cover plus equality on the discrete extras (x).
enum class OrderKind : std::uint8_t { Cover, CoverZero, Product };

const char* order_name(OrderKind o);

struct StateId {
  std::string name;
  Role owner = Role::B;
  int index = 0;
};

// a = controller state (-1 when there is no controller).
// x = extra discrete fields, only used by safety products:
//     x[0] automaton state, x[1..k] explicit B processes.
// c = counters over B states.
struct Config {
  int a = -1;
  std::vector<int> x;
  std::vector<int> c;

  auto operator<=>(const Config&) const = default;
  bool operator==(const Config&) const = default;

  int total() const;
};

struct ConfigHash {
  std::size_t operator()(const Config& s) const noexcept;
};

struct dimension_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct contract_error : std::logic_error {
  using std::logic_error::logic_error;
};

int checked_add(int x, int y);

bool config_leq(const Config& a, const Config& b, OrderKind order);

struct UpSet {
  OrderKind order = OrderKind::Cover;
  std::vector<Config> basis;  // antichain, sorted
};

UpSet min_basis(std::vector<Config> configs, OrderKind order);
bool upset_contains(const UpSet& s, const Config& c);
bool covered_by(const std::vector<Config>& basis, const Config& c, OrderKind order);

}  // namespace prepair
