#include "prepair/core.hpp"

#include <algorithm>
#include <limits>

namespace prepair {

const char* order_name(OrderKind o) {
  switch (o) {
    case OrderKind::Cover: return "Cover";
    case OrderKind::CoverZero: return "CoverZero";
    case OrderKind::Product: return "Product";
  }
  return "?";
}

int checked_add(int x, int y) {
  int r;
  if (__builtin_add_overflow(x, y, &r)) throw std::overflow_error("counter overflow");
  return r;
}

int Config::total() const {
  int t = 0;
  for (int v : c) t = checked_add(t, v);
  return t;
}

std::size_t ConfigHash::operator()(const Config& s) const noexcept {
  std::size_t h = std::hash<int>()(s.a) * 0x9e3779b97f4a7c15ULL;
  auto mix = [&h](int v) { h ^= std::hash<int>()(v) + 0x9e3779b9 + (h << 6) + (h >> 2); };
  for (int v : s.x) mix(v);
  mix(-7);
  for (int v : s.c) mix(v);
  return h;
}

bool config_leq(const Config& a, const Config& b, OrderKind order) {
  if (a.c.size() != b.c.size()) throw dimension_error("counter vectors differ in length");
  if (a.a != b.a) return false;
  if (order != OrderKind::Cover) {
    if (a.x.size() != b.x.size()) throw dimension_error("discrete components differ in length");
    if (a.x != b.x) return false;
  }
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i] > b.c[i]) return false;
    if (order == OrderKind::CoverZero && ((a.c[i] == 0) != (b.c[i] == 0))) return false;
  }
  return true;
}

UpSet min_basis(std::vector<Config> configs, OrderKind order) {
  std::sort(configs.begin(), configs.end());
  configs.erase(std::unique(configs.begin(), configs.end()), configs.end());
  // under Cover, configs differing only in x are equivalent; the first one wins
  std::vector<char> drop(configs.size(), 0);
  for (std::size_t i = 0; i < configs.size(); ++i) {
    for (std::size_t j = 0; j < configs.size() && !drop[i]; ++j) {
      if (i == j || drop[j]) continue;
      if (!config_leq(configs[j], configs[i], order)) continue;
      if (!config_leq(configs[i], configs[j], order) || j < i) drop[i] = 1;
    }
  }
  UpSet out{order, {}};
  for (std::size_t i = 0; i < configs.size(); ++i)
    if (!drop[i]) out.basis.push_back(std::move(configs[i]));
  return out;
}

bool covered_by(const std::vector<Config>& basis, const Config& c, OrderKind order) {
  return std::any_of(basis.begin(), basis.end(),
                     [&](const Config& b) { return config_leq(b, c, order); });
}

bool upset_contains(const UpSet& s, const Config& c) { return covered_by(s.basis, c, s.order); }

}  // namespace prepair
