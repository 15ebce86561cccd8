#include "prepair/semantics.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace prepair {

const char* kind_name(SystemKind k) {
  switch (k) {
    case SystemKind::Disjunctive: return "disjunctive";
    case SystemKind::Rendezvous: return "rendezvous";
    case SystemKind::Broadcast: return "broadcast";
  }
  return "?";
}

const char* dir_name(Dir d) {
  switch (d) {
    case Dir::None: return "";
    case Dir::Tau: return "tau";
    case Dir::Send: return "send";
    case Dir::Recv: return "recv";
    case Dir::BSend: return "bsend";
    case Dir::BRecv: return "brecv";
  }
  return "?";
}

int System::find(const std::string& id) const {
  for (std::size_t i = 0; i < trans.size(); ++i)
    if (trans[i].id == id) return static_cast<int>(i);
  return -1;
}

std::vector<int> System::find_origin(const std::string& origin) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < trans.size(); ++i)
    if (trans[i].origin == origin) out.push_back(static_cast<int>(i));
  return out;
}

const std::string& System::state_name(Role r, int i) const {
  return r == Role::A ? a.states.at(i) : b.states.at(i);
}

std::vector<int> System::active_indices() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < trans.size(); ++i)
    if (is_active(static_cast<int>(i))) out.push_back(static_cast<int>(i));
  return out;
}

std::string System::transition_text(int t) const {
  const auto& tr = trans.at(t);
  std::string s = "(" + state_name(tr.role, tr.from) + ",";
  if (kind == SystemKind::Disjunctive) {
    if (!tr.guarded) {
      s += "-";
    } else {
      s += "{";
      for (std::size_t i = 0; i < tr.guard.size(); ++i) {
        if (i) s += ",";
        s += state_name(tr.guard[i].role, tr.guard[i].state);
      }
      s += "}";
    }
  } else {
    static const char* suffix[] = {"", "", "!", "?", "!!", "??"};
    s += tr.dir == Dir::Tau ? std::string("tau") : actions.at(tr.action) + suffix[int(tr.dir)];
  }
  return s + "," + state_name(tr.role, tr.to) + ")";
}

static std::string counts_text(const std::vector<int>& c) {
  std::string s = "(";
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(c[i]);
  }
  return s + ")";
}

std::string format_config(const System& sys, const Config& s) {
  std::string inner;
  if (sys.has_a) inner = sys.a.states.at(s.a) + ",";
  if (sys.product) {
    for (int i = 1; i <= sys.product->k; ++i)
      inner += sys.b.states.at(s.x.at(i)) + "_" + std::to_string(i) + ",";
  }
  inner += counts_text(s.c);
  if (sys.has_a || sys.product) inner = "(" + inner + ")";
  if (!sys.product) return inner;
  int p = s.x.at(0);
  std::string an = p == sys.product->sink ? std::string("sink") : sys.product->aut.states.at(p);
  return "(" + inner + "," + an + ")";
}

System split_guards(const System& sys) {
  System out = sys;
  out.trans.clear();
  out.active.clear();
  for (std::size_t i = 0; i < sys.trans.size(); ++i) {
    const auto& tr = sys.trans[i];
    bool act = sys.is_active(static_cast<int>(i));
    if (tr.guarded && tr.guard.empty())
      throw std::invalid_argument("transition " + tr.id + ": empty guard");
    if (!tr.guarded || tr.guard.size() == 1) {
      out.trans.push_back(tr);
      out.active.push_back(act);
      continue;
    }
    for (const auto& g : tr.guard) {
      LocalTransition c = tr;
      c.guard = {g};
      c.id = tr.id + "{" + sys.state_name(g.role, g.state) + "}";
      out.trans.push_back(c);
      out.active.push_back(act);
    }
  }
  return out;
}

System restrict_system(const System& sys, const std::vector<char>& keep_mask) {
  if (keep_mask.size() != sys.trans.size()) throw std::invalid_argument("restriction mask has wrong size");
  System out = sys;
  out.active = keep_mask;
  return out;
}

System restrict_system(const System& sys, const std::vector<std::string>& keep_ids) {
  std::vector<char> mask(sys.trans.size(), 0);
  for (const auto& id : keep_ids) {
    int t = sys.find(id);
    if (t < 0) throw std::invalid_argument("unknown transition id: " + id);
    mask[t] = 1;
  }
  return restrict_system(sys, mask);
}

bool guard_satisfied(const System& sys, const Config& s, Role mover, int source, const GuardRef& g) {
  (void)sys;
  if (mover == Role::A) return g.role == Role::B && s.c.at(g.state) >= 1;
  if (g.role == Role::A) return s.a == g.state;
  if (g.state != source) return s.c.at(g.state) >= 1;
  return s.c.at(source) >= 2;
}

// ---------------------------------------------------------------------------

Engine::Engine(System sys) : sys_(std::move(sys)) { compile(); }

Move Engine::blank(int t) const {
  Move m;
  m.parts = {t};
  m.action = sys_.trans[t].action;
  int nb = sys_.nb();
  m.pre.assign(nb, 0);
  m.post.assign(nb, 0);
  m.need.assign(nb, 0);
  return m;
}

void Engine::compile_disjunctive(int t) {
  const auto& tr = sys_.trans[t];
  int k = sys_.product ? sys_.product->k : 0;
  if (tr.role == Role::A) {
    Move m = blank(t);
    m.a_from = tr.from;
    m.a_to = tr.to;
    if (!tr.guarded) {
      moves_.push_back(m);
      return;
    }
    const GuardRef g = tr.guard.at(0);
    if (g.role == Role::A) return;  // only B processes can witness an A guard
    Move c = m;
    c.need[g.state] = 1;
    moves_.push_back(c);
    for (int p = 1; p <= k; ++p) {
      Move e = m;
      e.ex_need = {{p, g.state}};
      moves_.push_back(e);
    }
    return;
  }
  // counted mover
  Move m = blank(t);
  m.pre[tr.from] += 1;
  m.post[tr.to] += 1;
  m.need[tr.from] = 1;
  if (!tr.guarded) {
    moves_.push_back(m);
  } else {
    const GuardRef g = tr.guard.at(0);
    if (g.role == Role::A) {
      Move c = m;
      c.a_need = g.state;
      moves_.push_back(c);
    } else {
      Move c = m;
      c.need[g.state] = g.state == tr.from ? 2 : 1;
      moves_.push_back(c);
      for (int p = 1; p <= k; ++p) {
        Move e = m;
        e.ex_need = {{p, g.state}};
        moves_.push_back(e);
      }
    }
  }
  // explicit movers
  for (int p = 1; p <= k; ++p) {
    Move e = blank(t);
    e.ex = p;
    e.ex_from = tr.from;
    e.ex_to = tr.to;
    if (!tr.guarded) {
      moves_.push_back(e);
      continue;
    }
    const GuardRef g = tr.guard.at(0);
    if (g.role == Role::A) {
      e.a_need = g.state;
      moves_.push_back(e);
      continue;
    }
    Move c = e;
    c.need[g.state] = 1;
    moves_.push_back(c);
    for (int q = 1; q <= k; ++q) {
      if (q == p) continue;
      Move w = e;
      w.ex_need = {{q, g.state}};
      moves_.push_back(w);
    }
  }
}

void Engine::compile() {
  const auto act = sys_.active_indices();
  if (sys_.kind == SystemKind::Disjunctive) {
    for (int t : act) compile_disjunctive(t);
    return;
  }
  for (int t : act) {
    const auto& tr = sys_.trans[t];
    if (tr.dir != Dir::Tau) continue;
    Move m = blank(t);
    if (tr.role == Role::A) {
      m.a_from = tr.from;
      m.a_to = tr.to;
    } else {
      m.pre[tr.from] += 1;
      m.post[tr.to] += 1;
      m.need = m.pre;
    }
    moves_.push_back(m);
  }
  if (sys_.kind == SystemKind::Rendezvous) {
    for (int s : act) {
      if (sys_.trans[s].dir != Dir::Send) continue;
      for (int r : act) {
        const auto& ts = sys_.trans[s];
        const auto& tr = sys_.trans[r];
        if (tr.dir != Dir::Recv || tr.action != ts.action) continue;
        if (ts.role == Role::A && tr.role == Role::A) continue;  // one controller only
        Move m = blank(s);
        m.parts = {std::min(s, r), std::max(s, r)};
        for (const auto* p : {&ts, &tr}) {
          if (p->role == Role::A) {
            m.a_from = p->from;
            m.a_to = p->to;
          } else {
            m.pre[p->from] += 1;
            m.post[p->to] += 1;
          }
        }
        m.need = m.pre;
        moves_.push_back(m);
      }
    }
    return;
  }
  int nb = sys_.nb();
  for (int s : act) {
    const auto& ts = sys_.trans[s];
    if (ts.dir != Dir::BSend) continue;
    Bcast b;
    b.sender = s;
    b.action = ts.action;
    b.from = ts.from;
    b.to = ts.to;
    b.recv.assign(nb, {});
    for (int r : act) {
      const auto& tr = sys_.trans[r];
      if (tr.dir == Dir::BRecv && tr.action == ts.action) b.recv[tr.from].push_back({r, tr.to});
    }
    for (int q = 0; q < nb; ++q)
      if (b.recv[q].empty()) b.recv[q].push_back({-1, q});  // no option left: stay put
    bcasts_.push_back(std::move(b));
  }
}

bool Engine::obs_holds(const Obs& o, const Config& s) const {
  for (const auto& l : o.lits) {
    int v = l.slot == 0 ? s.a : s.x.at(l.slot);
    if ((v == l.state) == l.neg) return false;
  }
  return true;
}

std::vector<int> Engine::aut_next(int p, const Config& src) const {
  const auto& pi = *sys_.product;
  if (p == pi.sink) return {pi.sink};
  std::vector<int> out;
  for (const auto& e : pi.aut.edges)
    if (e.from == p && obs_holds(e.obs, src)) out.push_back(e.to);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.empty()) out.push_back(pi.sink);
  return out;
}

void Engine::step_move(const Move& m, const Config& s, std::vector<Step>& out) const {
  if (m.a_from >= 0 && s.a != m.a_from) return;
  if (m.a_need >= 0 && s.a != m.a_need) return;
  if (m.ex && s.x[m.ex] != m.ex_from) return;
  for (auto [slot, st] : m.ex_need)
    if (s.x[slot] != st) return;
  const int nb = sys_.nb();
  for (int q = 0; q < nb; ++q)
    if (s.c[q] < m.need[q]) return;
  Config to = s;
  if (m.a_from >= 0) to.a = m.a_to;
  if (m.ex) to.x[m.ex] = m.ex_to;
  for (int q = 0; q < nb; ++q) to.c[q] = checked_add(s.c[q] - m.pre[q], m.post[q]);
  if (!sys_.product) {
    out.push_back(Step{m.parts, m.action, std::move(to)});
    return;
  }
  for (int p : aut_next(s.x[0], s)) {
    Config t2 = to;
    t2.x[0] = p;
    out.push_back(Step{m.parts, m.action, std::move(t2)});
  }
}

void Engine::step_bcast(const Bcast& b, const Config& s, std::vector<Step>& out) const {
  if (s.c[b.from] < 1) return;
  const int nb = sys_.nb();
  std::vector<int> d = s.c;
  d[b.from] -= 1;
  std::vector<int> dist(nb, 0);
  std::vector<int> used;
  std::function<void(int)> rec_state;
  // distribute d[q] processes of state q over its receive options
  std::function<void(int, std::size_t, int)> rec_opt = [&](int q, std::size_t oi, int left) {
    const auto& opts = b.recv[q];
    if (oi + 1 == opts.size()) {
      dist[opts[oi].second] += left;
      bool mark = left > 0 && opts[oi].first >= 0;
      if (mark) used.push_back(opts[oi].first);
      rec_state(q + 1);
      if (mark) used.pop_back();
      dist[opts[oi].second] -= left;
      return;
    }
    for (int take = left; take >= 0; --take) {
      dist[opts[oi].second] += take;
      bool mark = take > 0 && opts[oi].first >= 0;
      if (mark) used.push_back(opts[oi].first);
      rec_opt(q, oi + 1, left - take);
      if (mark) used.pop_back();
      dist[opts[oi].second] -= take;
    }
  };
  rec_state = [&](int q) {
    if (q == nb) {
      Step st;
      st.parts = used;
      st.parts.push_back(b.sender);
      std::sort(st.parts.begin(), st.parts.end());
      st.parts.erase(std::unique(st.parts.begin(), st.parts.end()), st.parts.end());
      st.action = b.action;
      st.to = s;
      st.to.c = dist;
      st.to.c[b.to] = checked_add(st.to.c[b.to], 1);
      out.push_back(std::move(st));
      return;
    }
    if (d[q] == 0) {
      rec_state(q + 1);
      return;
    }
    rec_opt(q, 0, d[q]);
  };
  rec_state(0);
}

std::vector<Step> Engine::successors(const Config& s) const {
  if (static_cast<int>(s.c.size()) != sys_.nb()) throw dimension_error("configuration has wrong width");
  std::vector<Step> out;
  for (const auto& m : moves_) step_move(m, s, out);
  for (const auto& b : bcasts_) step_bcast(b, s, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<int> Engine::enabled_local(const Config& s) const {
  std::vector<int> out;
  for (const auto& st : successors(s)) out.insert(out.end(), st.parts.begin(), st.parts.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Config Engine::successor(const Config& s, int t) const {
  for (const auto& st : successors(s))
    if (std::binary_search(st.parts.begin(), st.parts.end(), t)) return st.to;
  throw contract_error("transition " + sys_.trans.at(t).id + " is not enabled in " + format_config(sys_, s));
}

std::vector<Config> Engine::succ_set(const std::vector<Config>& r) const {
  std::vector<Config> out;
  for (const auto& s : r)
    for (auto& st : successors(s)) out.push_back(std::move(st.to));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void Engine::pred_move(const Move& m, const Config& r, std::vector<Config>& out) const {
  Config src = r;
  if (m.a_from >= 0) {
    if (r.a != m.a_to) return;
    src.a = m.a_from;
  }
  if (m.a_need >= 0 && src.a != m.a_need) return;
  if (m.ex) {
    if (r.x[m.ex] != m.ex_to) return;
    src.x[m.ex] = m.ex_from;
  }
  for (auto [slot, st] : m.ex_need)
    if (src.x[slot] != st) return;
  const int nb = sys_.nb();
  for (int q = 0; q < nb; ++q)
    src.c[q] = std::max({m.need[q], checked_add(r.c[q], m.pre[q]) - m.post[q], 0});
  if (!sys_.product) {
    out.push_back(std::move(src));
    return;
  }
  const int np = sys_.product->sink + 1;
  for (int p = 0; p < np; ++p) {
    src.x[0] = p;
    auto nx = aut_next(p, src);
    if (std::binary_search(nx.begin(), nx.end(), r.x[0])) out.push_back(src);
  }
}

void Engine::pred_bcast(const Bcast& b, const Config& r, std::vector<Config>& out) const {
  const int nb = sys_.nb();
  std::vector<std::vector<int>> sources(nb);  // target -> source states
  for (int p = 0; p < nb; ++p)
    for (auto [t, q] : b.recv[p]) {
      (void)t;
      if (std::find(sources[q].begin(), sources[q].end(), p) == sources[q].end()) sources[q].push_back(p);
    }
  std::vector<int> need(nb);
  for (int q = 0; q < nb; ++q) need[q] = std::max(0, r.c[q] - (q == b.to ? 1 : 0));
  std::vector<int> d(nb, 0);
  std::function<void(int)> rec_target;
  std::function<void(int, std::size_t, int)> rec_src = [&](int q, std::size_t si, int left) {
    const auto& src = sources[q];
    if (si + 1 == src.size()) {
      d[src[si]] += left;
      rec_target(q + 1);
      d[src[si]] -= left;
      return;
    }
    for (int take = left; take >= 0; --take) {
      d[src[si]] += take;
      rec_src(q, si + 1, left - take);
      d[src[si]] -= take;
    }
  };
  rec_target = [&](int q) {
    if (q == nb) {
      Config c = r;
      c.c = d;
      c.c[b.from] = checked_add(c.c[b.from], 1);
      out.push_back(std::move(c));
      return;
    }
    if (need[q] == 0) {
      rec_target(q + 1);
      return;
    }
    if (sources[q].empty()) return;
    rec_src(q, 0, need[q]);
  };
  rec_target(0);
}

std::vector<Config> Engine::pred_candidates(const Config& r) const {
  if (static_cast<int>(r.c.size()) != sys_.nb()) throw dimension_error("configuration has wrong width");
  std::vector<Config> out;
  for (const auto& m : moves_) pred_move(m, r, out);
  for (const auto& b : bcasts_) pred_bcast(b, r, out);
  return out;
}

bool Engine::covers_initial(const Config& e) const {
  if (sys_.has_a && e.a != sys_.a.init) return false;
  if (sys_.product) {
    if (e.x.at(0) != sys_.product->aut.init) return false;
    for (int i = 1; i <= sys_.product->k; ++i)
      if (e.x.at(i) != sys_.b.init) return false;
  }
  for (int q = 0; q < sys_.nb(); ++q)
    if (q != sys_.b.init && e.c[q] != 0) return false;
  return true;
}

bool Engine::is_initial(const Config& s) const { return covers_initial(s); }

Config Engine::initial_witness(const Config& e) const {
  Config s = e;
  if (sys_.kind == SystemKind::Broadcast && s.c[sys_.b.init] == 0) s.c[sys_.b.init] = 1;
  return s;
}

Config Engine::initial_config(int n) const {
  Config s;
  s.a = sys_.has_a ? sys_.a.init : -1;
  if (sys_.product) {
    s.x.assign(sys_.product->k + 1, sys_.b.init);
    s.x[0] = sys_.product->aut.init;
  }
  s.c.assign(sys_.nb(), 0);
  s.c[sys_.b.init] = n;
  return s;
}

}  // namespace prepair
