#include "prepair/safety.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <stdexcept>

namespace prepair {

static std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\n");
  return s.substr(b, e - b + 1);
}

Obs parse_obs(const std::string& text, const System& sys, int k) {
  Obs o;
  o.text = trim(text);
  if (o.text.empty() || o.text == "true") return o;
  std::size_t start = 0;
  while (start <= o.text.size()) {
    auto amp = o.text.find('&', start);
    std::string lit = trim(o.text.substr(start, amp == std::string::npos ? std::string::npos : amp - start));
    if (lit.empty()) throw std::invalid_argument("observation '" + text + "': empty literal");
    ObsLit l;
    if (lit[0] == '!') {
      l.neg = true;
      lit = trim(lit.substr(1));
    }
    auto ai = std::find(sys.a.states.begin(), sys.a.states.end(), lit);
    if (sys.has_a && ai != sys.a.states.end()) {
      l.slot = 0;
      l.state = static_cast<int>(ai - sys.a.states.begin());
    } else {
      auto us = lit.rfind('_');
      if (us == std::string::npos) throw std::invalid_argument("observation '" + text + "': unknown atom " + lit);
      std::string name = lit.substr(0, us), num = lit.substr(us + 1);
      if (num.empty() || !std::all_of(num.begin(), num.end(), ::isdigit))
        throw std::invalid_argument("observation '" + text + "': unknown atom " + lit);
      int slot = std::stoi(num);
      if (slot < 1 || slot > k) throw std::invalid_argument("observation '" + text + "': no explicit process " + num);
      auto bi = std::find(sys.b.states.begin(), sys.b.states.end(), name);
      if (bi == sys.b.states.end()) throw std::invalid_argument("observation '" + text + "': unknown B state " + name);
      l.slot = slot;
      l.state = static_cast<int>(bi - sys.b.states.begin());
    }
    o.lits.push_back(l);
    if (amp == std::string::npos) break;
    start = amp + 1;
  }
  return o;
}

ProductResult product(const System& base, int k, const Automaton& aut) {
  if (base.kind != SystemKind::Disjunctive) throw std::invalid_argument("safety products need a disjunctive system");
  if (k < 0) throw std::invalid_argument("explicit process count must be nonnegative");
  if (aut.states.empty()) throw std::invalid_argument("automaton has no states");
  auto pi = std::make_shared<ProductInfo>();
  pi->k = k;
  pi->aut = aut;
  pi->sink = static_cast<int>(aut.states.size());
  ProductResult res;
  res.sys = base;
  res.sys.product = pi;
  res.err.order = OrderKind::Product;
  std::vector<int> as;
  if (base.has_a)
    for (int a = 0; a < static_cast<int>(base.a.states.size()); ++a) as.push_back(a);
  else
    as.push_back(-1);
  const int nb = base.nb();
  std::vector<int> x(k + 1, 0);
  std::function<void(int, int, int)> fill = [&](int slot, int a, int f) {
    if (slot > k) {
      Config c;
      c.a = a;
      c.x = x;
      c.x[0] = f;
      c.c.assign(nb, 0);
      res.err.basis.push_back(c);
      return;
    }
    for (int q = 0; q < nb; ++q) {
      x[slot] = q;
      fill(slot + 1, a, f);
    }
  };
  for (int f = 0; f < static_cast<int>(aut.states.size()); ++f) {
    if (!aut.accepting.at(f)) continue;
    for (int a : as) fill(1, a, f);
  }
  std::sort(res.err.basis.begin(), res.err.basis.end());
  return res;
}

}  // namespace prepair
