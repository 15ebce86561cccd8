#include "prepair/oracle.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <unordered_map>
#include <unordered_set>

namespace prepair {

namespace {

template <class Visit>
void bfs(const Engine& eng, const Config& start, std::size_t limit, Visit visit) {
  std::unordered_map<Config, std::pair<Config, Step>, ConfigHash> parent;
  parent.emplace(start, std::pair<Config, Step>{start, Step{}});
  std::deque<Config> queue{start};
  while (!queue.empty()) {
    Config s = std::move(queue.front());
    queue.pop_front();
    auto next = eng.successors(s);
    if (visit(s, next, parent)) return;
    for (auto& st : next) {
      if (parent.count(st.to)) continue;
      if (parent.size() >= limit) throw resource_error("explicit state space exceeds limit");
      parent.emplace(st.to, std::pair<Config, Step>{s, st});
      queue.push_back(st.to);
    }
  }
}

std::vector<std::vector<int>> discrete_combos(const System& sys) {
  std::vector<std::vector<int>> out;  // [a, x...]
  std::vector<int> as;
  if (sys.has_a)
    for (int a = 0; a < static_cast<int>(sys.a.states.size()); ++a) as.push_back(a);
  else
    as.push_back(-1);
  int k = sys.product ? sys.product->k : 0;
  int np = sys.product ? sys.product->sink + 1 : 0;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int slot) {
    if (slot > k) {
      out.push_back(cur);
      return;
    }
    int lim = slot == 0 ? np : sys.nb();
    for (int v = 0; v < lim; ++v) {
      cur.push_back(v);
      rec(slot + 1);
      cur.pop_back();
    }
  };
  for (int a : as) {
    cur = {a};
    if (sys.product)
      rec(0);
    else
      out.push_back(cur);
  }
  return out;
}

void counts_rec(int nb, int hi, int total, std::vector<int>& c, int q, const std::function<void()>& f) {
  // total < 0: no constraint on the sum
  if (q == nb) {
    if (total <= 0) f();
    return;
  }
  if (total >= 0 && q == nb - 1) {
    if (total <= hi) {
      c[q] = total;
      f();
    }
    return;
  }
  int top = total >= 0 ? std::min(hi, total) : hi;
  for (int v = 0; v <= top; ++v) {
    c[q] = v;
    counts_rec(nb, hi, total >= 0 ? total - v : -1, c, q + 1, f);
  }
}

Config make_config(const std::vector<int>& d, const std::vector<int>& c) {
  Config s;
  s.a = d[0];
  s.x.assign(d.begin() + 1, d.end());
  s.c = c;
  return s;
}

}  // namespace

std::optional<Path> explicit_error_path(const Engine& eng, int n, const UpSet& err, std::size_t limit) {
  std::optional<Path> found;
  bfs(eng, eng.initial_config(n), limit, [&](const Config& s, const std::vector<Step>&, auto& parent) {
    if (!upset_contains(err, s)) return false;
    Path p;
    Config cur = s;
    const Config start = eng.initial_config(n);
    while (!(cur == start)) {
      const auto& [prev, st] = parent.at(cur);
      p.states.push_back(cur);
      p.steps.push_back(st);
      cur = prev;
    }
    p.states.push_back(start);
    std::reverse(p.states.begin(), p.states.end());
    std::reverse(p.steps.begin(), p.steps.end());
    found = std::move(p);
    return true;
  });
  return found;
}

bool explicit_reach(const Engine& eng, int n, const UpSet& err, std::size_t limit) {
  return explicit_error_path(eng, n, err, limit).has_value();
}

std::vector<Config> explicit_deadlocks(const Engine& eng, int n, std::size_t limit) {
  std::vector<Config> out;
  bfs(eng, eng.initial_config(n), limit, [&](const Config& s, const std::vector<Step>& next, auto&) {
    if (next.empty()) out.push_back(s);
    return false;
  });
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Config> enumerate_box(const System& sys, int box) {
  std::vector<Config> out;
  std::vector<int> c(sys.nb(), 0);
  for (const auto& d : discrete_combos(sys))
    counts_rec(sys.nb(), box, -1, c, 0, [&] { out.push_back(make_config(d, c)); });
  return out;
}

std::vector<Config> bounded_pred(const Engine& eng, const UpSet& r, int box, bool multi) {
  const System& sys = eng.sys();
  std::vector<Config> out;
  if (!multi) {
    for (const auto& s : enumerate_box(sys, box)) {
      for (const auto& st : eng.successors(s))
        if (upset_contains(r, st.to)) {
          out.push_back(s);
          break;
        }
    }
    return out;
  }
  // the process count is invariant, so pred* is computed slice by slice
  const int nb = sys.nb();
  const auto combos = discrete_combos(sys);
  std::vector<int> c(nb, 0);
  for (int total = 0; total <= box * nb; ++total) {
    std::vector<Config> slice;
    for (const auto& d : combos)
      counts_rec(nb, total, total, c, 0, [&] { slice.push_back(make_config(d, c)); });
    if (nb == 0) slice.clear();
    std::unordered_map<Config, int, ConfigHash> id;
    for (std::size_t i = 0; i < slice.size(); ++i) id.emplace(slice[i], static_cast<int>(i));
    std::vector<std::vector<int>> rev(slice.size());
    std::vector<char> mark(slice.size(), 0);
    std::deque<int> queue;
    for (std::size_t i = 0; i < slice.size(); ++i) {
      for (const auto& st : eng.successors(slice[i])) {
        auto it = id.find(st.to);
        if (it == id.end()) throw contract_error("successor leaves its process-count slice");
        rev[it->second].push_back(static_cast<int>(i));
      }
      if (upset_contains(r, slice[i])) {
        mark[i] = 1;
        queue.push_back(static_cast<int>(i));
      }
    }
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      for (int u : rev[v])
        if (!mark[u]) {
          mark[u] = 1;
          queue.push_back(u);
        }
    }
    for (std::size_t i = 0; i < slice.size(); ++i) {
      if (!mark[i]) continue;
      if (std::all_of(slice[i].c.begin(), slice[i].c.end(), [&](int v) { return v <= box; })) out.push_back(slice[i]);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Config> bounded_opred(const Engine& eng, const UpSet& r, int box) {
  const System& sys = eng.sys();
  std::vector<Config> out;
  for (const auto& s : enumerate_box(sys, box)) {
    bool hit = false;
    for (int t : sys.active_indices()) {
      if (hit) break;
      const auto& tr = sys.trans[t];
      Config cur = s;
      for (int k = 1;; ++k) {
        // fire exactly t once more, if it is enabled
        Config nxt;
        bool ok = false;
        for (const auto& st : eng.successors(cur))
          if (st.parts.size() == 1 && st.parts[0] == t) {
            nxt = st.to;
            ok = true;
            break;
          }
        if (!ok) break;
        bool allowed = k == 1 || tr.role == Role::B;
        if (tr.role == Role::B && k > 1) allowed = s.c[tr.to] == 0 || nxt.c[tr.from] == 0;
        if (allowed && upset_contains(r, nxt)) {
          hit = true;
          break;
        }
        if (tr.role == Role::A || tr.from == tr.to) break;
        cur = std::move(nxt);
      }
    }
    if (hit) out.push_back(s);
  }
  return out;
}

}  // namespace prepair
