#include "prepair/deadlock.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

namespace prepair {

std::vector<int> check_self_guard_assumption(const System& sys) {
  std::vector<int> bad;
  if (sys.kind != SystemKind::Disjunctive) return bad;
  for (int t : sys.active_indices()) {
    const auto& tr = sys.trans[t];
    if (tr.role == Role::B && tr.guarded && tr.guard.size() == 1 && tr.guard[0].role == Role::B &&
        tr.guard[0].state == tr.from)
      bad.push_back(t);
  }
  return bad;
}

static void require_plain_disjunctive(const System& sys) {
  if (sys.kind != SystemKind::Disjunctive) throw unsupported_error("deadlock detection needs a disjunctive system");
  if (sys.product) throw unsupported_error("deadlock detection does not take safety products");
  auto bad = check_self_guard_assumption(sys);
  if (!bad.empty()) {
    std::string msg = "self-guarded B transitions present, normalize the model first:";
    for (int t : bad) msg += " " + sys.trans[t].id;
    throw unsupported_error(msg);
  }
}

UpSet deadlock_basis(const Engine& eng) {
  const System& sys = eng.sys();
  require_plain_disjunctive(sys);
  const int nb = sys.nb();
  std::vector<Config> out;
  std::vector<int> as;
  if (sys.has_a)
    for (int a = 0; a < static_cast<int>(sys.a.states.size()); ++a) as.push_back(a);
  else
    as.push_back(-1);
  for (int a : as) {
    for (unsigned mask = 1; mask < (1u << nb); ++mask) {
      Config c;
      c.a = a;
      c.c.assign(nb, 0);
      for (int q = 0; q < nb; ++q)
        if (mask & (1u << q)) c.c[q] = 1;
      if (eng.successors(c).empty()) out.push_back(c);
    }
  }
  return min_basis(std::move(out), OrderKind::CoverZero);
}

static bool guard_ok(const System& sys, const LocalTransition& tr, const Config& c) {
  if (!tr.guarded) return true;
  return guard_satisfied(sys, c, tr.role, tr.from, tr.guard.at(0));
}

std::vector<Config> db_pred_one(const Engine& eng, const Config& r) {
  const System& sys = eng.sys();
  std::vector<Config> out;
  auto keep = [&](const LocalTransition& tr, Config c) {
    if (tr.role == Role::B && c.c[tr.from] < 1) return;
    if (guard_ok(sys, tr, c)) out.push_back(std::move(c));
  };
  for (int t : sys.active_indices()) {
    const auto& tr = sys.trans[t];
    if (tr.role == Role::A) {
      if (r.a != tr.to) continue;
      Config c = r;
      c.a = tr.from;
      keep(tr, c);
      continue;
    }
    const int i = tr.from, j = tr.to;
    if (i == j) {
      if (r.c[i] >= 1) keep(tr, r);
      continue;
    }
    if (r.c[j] < 1) continue;
    // single step, j kept occupied afterwards
    Config e1 = r;
    e1.c[j] = std::max(r.c[j], 2) - 1;
    e1.c[i] = checked_add(r.c[i], 1);
    keep(tr, e1);
    // j was empty, all of its processes arrived from i
    Config e2 = r;
    e2.c[i] = checked_add(r.c[i], r.c[j]);
    e2.c[j] = 0;
    keep(tr, e2);
    // i is emptied by k firings
    if (r.c[i] == 0) {
      for (int k = 1; k <= r.c[j]; ++k) {
        Config e3 = r;
        e3.c[i] = k;
        e3.c[j] = r.c[j] - k;
        keep(tr, e3);
      }
    }
  }
  return out;
}

UpSet db_pred(const Engine& eng, const UpSet& r) {
  if (r.order != OrderKind::CoverZero) throw contract_error("db_pred needs CoverZero order");
  require_plain_disjunctive(eng.sys());
  std::vector<Config> cand;
  for (const auto& e : r.basis) {
    auto p = db_pred_one(eng, e);
    cand.insert(cand.end(), p.begin(), p.end());
  }
  return min_basis(std::move(cand), OrderKind::CoverZero);
}

DeadlockResult detect_deadlock(const Engine& eng, std::size_t cap) {
  const System& sys = eng.sys();
  auto basis = deadlock_basis(eng);
  BackwardSpec spec;
  spec.order = OrderKind::CoverZero;
  spec.pred = [&](const Config& r) { return db_pred_one(eng, r); };
  spec.covers_initial = [&](const Config& e) {
    if (sys.has_a && e.a != sys.a.init) return false;
    for (int q = 0; q < sys.nb(); ++q)
      if ((q == sys.b.init) != (e.c[q] > 0)) return false;
    return true;
  };
  spec.witness = [](const Config& e) { return e; };
  spec.max_iterations = cap ? cap : (std::size_t{1} << std::min(sys.nb(), 30));
  DeadlockResult res;
  res.seq = backward_search(basis.basis, spec);
  res.deadlock = !res.seq.safe;
  return res;
}

DeadlockResult detect_deadlock(const System& sys) { return detect_deadlock(Engine(sys)); }

std::optional<Path> find_deadlock_path(const Engine& eng, const Config& start, std::size_t limit) {
  std::unordered_map<Config, std::pair<Config, Step>, ConfigHash> parent;
  std::deque<Config> queue{start};
  parent.emplace(start, std::pair<Config, Step>{start, Step{}});
  while (!queue.empty()) {
    Config s = std::move(queue.front());
    queue.pop_front();
    auto next = eng.successors(s);
    if (next.empty()) {
      Path p;
      Config cur = s;
      while (!(cur == start)) {
        const auto& [prev, st] = parent.at(cur);
        p.states.push_back(cur);
        p.steps.push_back(st);
        cur = prev;
      }
      p.states.push_back(start);
      std::reverse(p.states.begin(), p.states.end());
      std::reverse(p.steps.begin(), p.steps.end());
      return p;
    }
    for (auto& st : next) {
      if (parent.count(st.to)) continue;
      if (parent.size() >= limit) throw std::runtime_error("state-space limit exceeded");
      parent.emplace(st.to, std::pair<Config, Step>{s, st});
      queue.push_back(st.to);
    }
  }
  return std::nullopt;
}

System pr_overapprox(const System& sys) {
  if (sys.kind == SystemKind::Broadcast) throw unsupported_error("no deadlock overapproximation for broadcast systems");
  if (sys.kind != SystemKind::Rendezvous) throw contract_error("pr_overapprox expects a rendezvous system");
  System out;
  out.kind = SystemKind::Disjunctive;
  out.has_a = sys.has_a;
  out.a = sys.a;
  out.b = sys.b;
  auto add = [&](const LocalTransition& src, const std::string& id, std::optional<GuardRef> g) {
    LocalTransition t;
    t.id = id;
    t.origin = src.id;
    t.role = src.role;
    t.from = src.from;
    t.to = src.to;
    t.guarded = g.has_value();
    if (g) t.guard = {*g};
    out.trans.push_back(t);
  };
  const auto act = sys.active_indices();
  for (int t : act)
    if (sys.trans[t].dir == Dir::Tau) add(sys.trans[t], sys.trans[t].id, std::nullopt);
  for (int s : act) {
    const auto& ts = sys.trans[s];
    if (ts.dir != Dir::Send) continue;
    for (int r : act) {
      const auto& tr = sys.trans[r];
      if (tr.dir != Dir::Recv || tr.action != ts.action) continue;
      if (ts.role == Role::A && tr.role == Role::A) continue;
      add(ts, ts.id + "~" + tr.id, GuardRef{tr.role, tr.from});
      add(tr, tr.id + "~" + ts.id, GuardRef{ts.role, ts.from});
    }
  }
  out.active.assign(out.trans.size(), 1);
  return out;
}

}  // namespace prepair
