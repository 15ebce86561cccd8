#include "prepair/frontend.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "prepair/safety.hpp"

namespace prepair {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& msg) { throw input_error(where + ": " + msg); }

const json& need(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) bad(where, std::string("missing '") + key + "'");
  return j.at(key);
}

std::string str(const json& j, const std::string& where) {
  if (!j.is_string()) bad(where, "expected a string");
  return j.get<std::string>();
}

int index_of(const std::vector<std::string>& v, const std::string& s) {
  auto it = std::find(v.begin(), v.end(), s);
  return it == v.end() ? -1 : static_cast<int>(it - v.begin());
}

Dir parse_dir(const std::string& d, const std::string& where) {
  if (d == "tau") return Dir::Tau;
  if (d == "send") return Dir::Send;
  if (d == "recv") return Dir::Recv;
  if (d == "bsend") return Dir::BSend;
  if (d == "brecv") return Dir::BRecv;
  bad(where, "unknown dir '" + d + "'");
}

}  // namespace

Document parse_document(const std::string& text, const std::string& name) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw input_error(name + ": " + e.what());
  }
  if (!j.is_object()) bad(name, "top level must be an object");
  Document doc;
  doc.name = name;
  System& sys = doc.original;
  const std::string kind = str(need(j, "kind", name), name + ".kind");
  if (kind == "disjunctive")
    sys.kind = SystemKind::Disjunctive;
  else if (kind == "rendezvous")
    sys.kind = SystemKind::Rendezvous;
  else if (kind == "broadcast")
    sys.kind = SystemKind::Broadcast;
  else
    bad(name + ".kind", "unknown kind '" + kind + "'");
  if (j.contains("meta")) doc.meta = j["meta"];

  const json& tpls = need(j, "templates", name);
  if (!tpls.is_array() || tpls.empty()) bad(name + ".templates", "expected a nonempty list");
  bool seen_a = false, seen_b = false;
  for (std::size_t ti = 0; ti < tpls.size(); ++ti) {
    const std::string w = name + ".templates[" + std::to_string(ti) + "]";
    const std::string role = str(need(tpls[ti], "role", w), w + ".role");
    Template* t = nullptr;
    if (role == "A") {
      if (seen_a) bad(w, "second A template");
      if (sys.kind == SystemKind::Broadcast) bad(w, "broadcast systems have no controller template");
      seen_a = true;
      t = &sys.a;
      t->role = Role::A;
    } else if (role == "B") {
      if (seen_b) bad(w, "second B template");
      seen_b = true;
      t = &sys.b;
      t->role = Role::B;
    } else {
      bad(w + ".role", "must be A or B");
    }
    const json& st = need(tpls[ti], "states", w);
    if (!st.is_array() || st.empty()) bad(w + ".states", "expected a nonempty list");
    for (const auto& s : st) t->states.push_back(str(s, w + ".states"));
    t->init = index_of(t->states, str(need(tpls[ti], "init", w), w + ".init"));
    if (t->init < 0) bad(w + ".init", "not a state of the template");
  }
  if (!seen_b) bad(name + ".templates", "missing B template");
  sys.has_a = seen_a;
  {
    std::set<std::string> all;
    for (const auto* t : {&sys.a, &sys.b})
      for (const auto& s : t->states)
        if (!all.insert(s).second) bad(name + ".templates", "state name '" + s + "' used twice");
  }

  auto resolve_state = [&](const std::string& s, const std::string& w) -> GuardRef {
    int i = index_of(sys.a.states, s);
    if (i >= 0) return {Role::A, i};
    i = index_of(sys.b.states, s);
    if (i >= 0) return {Role::B, i};
    bad(w, "unknown state '" + s + "'");
  };

  int global = 0;
  std::set<std::string> ids;
  for (std::size_t ti = 0; ti < tpls.size(); ++ti) {
    const std::string w = name + ".templates[" + std::to_string(ti) + "]";
    const Role role = tpls[ti]["role"] == "A" ? Role::A : Role::B;
    const Template& tpl = role == Role::A ? sys.a : sys.b;
    const json& trs = need(tpls[ti], "transitions", w);
    if (!trs.is_array()) bad(w + ".transitions", "expected a list");
    for (std::size_t k = 0; k < trs.size(); ++k, ++global) {
      const std::string wt = w + ".transitions[" + std::to_string(k) + "]";
      const json& jt = trs[k];
      LocalTransition tr;
      tr.role = role;
      tr.id = jt.contains("id") ? str(jt["id"], wt + ".id") : "T" + std::to_string(global);
      tr.origin = tr.id;
      if (!ids.insert(tr.id).second) bad(wt + ".id", "duplicate transition id '" + tr.id + "'");
      tr.from = index_of(tpl.states, str(need(jt, "from", wt), wt + ".from"));
      tr.to = index_of(tpl.states, str(need(jt, "to", wt), wt + ".to"));
      if (tr.from < 0) bad(wt + ".from", "not a state of this template");
      if (tr.to < 0) bad(wt + ".to", "not a state of this template");
      if (sys.kind == SystemKind::Disjunctive) {
        if (jt.contains("action") || jt.contains("dir")) bad(wt, "disjunctive transitions take a guard, not an action");
        if (jt.contains("guard") && !jt["guard"].is_null()) {
          const json& g = jt["guard"];
          if (!g.is_array()) bad(wt + ".guard", "expected a list of states");
          if (g.empty()) bad(wt + ".guard", "empty guard");
          tr.guarded = true;
          for (const auto& s : g) tr.guard.push_back(resolve_state(str(s, wt + ".guard"), wt + ".guard"));
        }
      } else {
        if (jt.contains("guard")) bad(wt, "synchronizing transitions take no guard");
        tr.dir = parse_dir(str(need(jt, "dir", wt), wt + ".dir"), wt + ".dir");
        bool rv = tr.dir == Dir::Send || tr.dir == Dir::Recv;
        bool bc = tr.dir == Dir::BSend || tr.dir == Dir::BRecv;
        if (rv && sys.kind != SystemKind::Rendezvous) bad(wt + ".dir", "send/recv need a rendezvous system");
        if (bc && sys.kind != SystemKind::Broadcast) bad(wt + ".dir", "bsend/brecv need a broadcast system");
        if (tr.dir != Dir::Tau) {
          std::string a = str(need(jt, "action", wt), wt + ".action");
          int ai = index_of(sys.actions, a);
          if (ai < 0) {
            sys.actions.push_back(a);
            ai = static_cast<int>(sys.actions.size()) - 1;
          }
          tr.action = ai;
        }
      }
      sys.trans.push_back(tr);
    }
  }
  if (sys.kind != SystemKind::Disjunctive) {
    std::map<int, std::string> sender;
    for (const auto& tr : sys.trans)
      if (tr.dir == Dir::Send || tr.dir == Dir::BSend) {
        if (sender.count(tr.action))
          bad(name, "action '" + sys.actions[tr.action] + "' is sent by both " + sender[tr.action] + " and " + tr.id);
        sender[tr.action] = tr.id;
      }
  }
  sys.active.assign(sys.trans.size(), 1);

  // normalized working system
  System work = sys.kind == SystemKind::Disjunctive ? split_guards(sys) : sys;
  if (work.kind == SystemKind::Broadcast) {
    for (int a = 0; a < static_cast<int>(work.actions.size()); ++a)
      for (int q = 0; q < work.nb(); ++q) {
        bool has = std::any_of(work.trans.begin(), work.trans.end(), [&](const LocalTransition& t) {
          return t.dir == Dir::BRecv && t.action == a && t.from == q;
        });
        if (has) continue;
        LocalTransition t;
        t.role = Role::B;
        t.from = t.to = q;
        t.dir = Dir::BRecv;
        t.action = a;
        t.implicit = true;
        t.id = "(" + work.b.states[q] + "," + work.actions[a] + "??," + work.b.states[q] + ")";
        if (work.find(t.id) >= 0) t.id += "#implicit";
        t.origin = t.id;
        work.trans.push_back(t);
        work.active.push_back(1);
        doc.notes.push_back("completed missing receive with implicit self-loop " + t.id);
      }
  }
  for (Role role : {Role::A, Role::B}) {
    if (role == Role::A && !work.has_a) continue;
    const Template& tpl = role == Role::A ? work.a : work.b;
    for (int q = 0; q < static_cast<int>(tpl.states.size()); ++q) {
      bool out = std::any_of(work.trans.begin(), work.trans.end(),
                             [&](const LocalTransition& t) { return t.role == role && t.from == q; });
      if (!out) bad(name, "state '" + tpl.states[q] + "' has no outgoing transition (transition relation must be total)");
    }
  }

  // errors
  doc.errors_spec = json::array();
  std::vector<Config> errs;
  if (j.contains("errors")) {
    const json& es = j["errors"];
    if (!es.is_array()) bad(name + ".errors", "expected a list");
    for (std::size_t i = 0; i < es.size(); ++i) {
      const std::string w = name + ".errors[" + std::to_string(i) + "]";
      json norm = json::object();
      Config c;
      c.c.assign(work.nb(), 0);
      std::vector<int> as;
      if (es[i].contains("a_state") && !es[i]["a_state"].is_null()) {
        if (!work.has_a) bad(w + ".a_state", "system has no controller");
        std::string a = str(es[i]["a_state"], w + ".a_state");
        int ai = index_of(work.a.states, a);
        if (ai < 0) bad(w + ".a_state", "unknown controller state '" + a + "'");
        as.push_back(ai);
        norm["a_state"] = a;
      } else if (work.has_a) {
        for (int a = 0; a < static_cast<int>(work.a.states.size()); ++a) as.push_back(a);
      } else {
        as.push_back(-1);
      }
      norm["counts"] = json::object();
      if (es[i].contains("counts")) {
        const json& cs = es[i]["counts"];
        if (!cs.is_object()) bad(w + ".counts", "expected an object");
        for (auto it = cs.begin(); it != cs.end(); ++it) {
          int q = index_of(work.b.states, it.key());
          if (q < 0) bad(w + ".counts", "unknown B state '" + it.key() + "'");
          if (!it.value().is_number_integer() || it.value().get<int>() < 0)
            bad(w + ".counts", "counts must be nonnegative integers");
          c.c[q] = it.value().get<int>();
          if (c.c[q]) norm["counts"][it.key()] = c.c[q];
        }
      }
      for (int a : as) {
        Config e = c;
        e.a = a;
        errs.push_back(e);
      }
      doc.errors_spec.push_back(norm);
    }
  }

  // safety automaton
  if (j.contains("automaton") && !j["automaton"].is_null()) {
    const std::string w = name + ".automaton";
    if (work.kind != SystemKind::Disjunctive) bad(w, "safety automata need a disjunctive system");
    const json& ja = j["automaton"];
    Automaton aut;
    for (const auto& s : need(ja, "states", w)) aut.states.push_back(str(s, w + ".states"));
    if (aut.states.empty()) bad(w + ".states", "expected a nonempty list");
    aut.init = index_of(aut.states, str(need(ja, "init", w), w + ".init"));
    if (aut.init < 0) bad(w + ".init", "unknown automaton state");
    aut.accepting.assign(aut.states.size(), 0);
    for (const auto& s : need(ja, "accepting", w)) {
      int f = index_of(aut.states, str(s, w + ".accepting"));
      if (f < 0) bad(w + ".accepting", "unknown automaton state");
      aut.accepting[f] = 1;
    }
    doc.explicit_b = j.value("explicit_b", 0);
    if (doc.explicit_b < 0) bad(name + ".explicit_b", "must be nonnegative");
    const json& et = need(ja, "transitions", w);
    for (std::size_t i = 0; i < et.size(); ++i) {
      const std::string we = w + ".transitions[" + std::to_string(i) + "]";
      Automaton::Edge e;
      e.from = index_of(aut.states, str(need(et[i], "from", we), we + ".from"));
      e.to = index_of(aut.states, str(need(et[i], "to", we), we + ".to"));
      if (e.from < 0 || e.to < 0) bad(we, "unknown automaton state");
      try {
        e.obs = parse_obs(str(need(et[i], "obs", we), we + ".obs"), work, doc.explicit_b);
      } catch (const std::invalid_argument& ex) {
        bad(we + ".obs", ex.what());
      }
      aut.edges.push_back(e);
    }
    if (!errs.empty()) doc.notes.push_back("errors section ignored: the automaton defines the error set");
    doc.automaton = aut;
    auto pr = product(work, doc.explicit_b, aut);
    doc.sys = std::move(pr.sys);
    doc.err = std::move(pr.err);
  } else {
    if (j.contains("explicit_b")) bad(name + ".explicit_b", "only meaningful with an automaton");
    doc.sys = std::move(work);
    doc.err = min_basis(std::move(errs), OrderKind::Cover);
  }

  // constraints
  std::vector<Constraint> parts{tr_constr(doc.sys)};
  if (j.contains("constraints")) {
    const json& jc = j["constraints"];
    const std::string w = name + ".constraints";
    if (!jc.is_object()) bad(w, "expected an object");
    doc.pairing = jc.value("pairing", false);
    doc.one_hot = jc.value("one_hot_receive", false);
    if (doc.sys.kind == SystemKind::Disjunctive && (doc.pairing || doc.one_hot))
      bad(w, "pairing/one_hot_receive need a synchronizing system");
    if (doc.pairing) parts.push_back(pairing_constr(doc.sys));
    if (doc.one_hot) parts.push_back(one_hot_receive(doc.sys));
    if (jc.contains("extra")) {
      for (const auto& e : jc["extra"]) {
        std::string t = str(e, w + ".extra");
        doc.extra_text.push_back(t);
        try {
          parts.push_back(parse_sexpr(t, doc.sys));
        } catch (const std::invalid_argument& ex) {
          bad(w + ".extra", ex.what());
        }
      }
    }
  }
  doc.init = c_and(parts);
  return doc;
}

Document load_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error(path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_document(ss.str(), path);
}

json emit_document(const Document& doc) {
  const System& sys = doc.original;
  json j;
  j["kind"] = kind_name(sys.kind);
  if (!doc.meta.is_null()) j["meta"] = doc.meta;
  j["templates"] = json::array();
  // keep the written template order, transition order is the default decision order
  const bool b_first = !sys.trans.empty() && sys.trans.front().role == Role::B;
  for (Role role : b_first ? std::vector<Role>{Role::B, Role::A} : std::vector<Role>{Role::A, Role::B}) {
    if (role == Role::A && !sys.has_a) continue;
    const Template& tpl = role == Role::A ? sys.a : sys.b;
    json t;
    t["role"] = role == Role::A ? "A" : "B";
    t["states"] = tpl.states;
    t["init"] = tpl.states[tpl.init];
    t["transitions"] = json::array();
    for (const auto& tr : sys.trans) {
      if (tr.role != role) continue;
      json jt;
      jt["id"] = tr.id;
      jt["from"] = tpl.states[tr.from];
      jt["to"] = tpl.states[tr.to];
      if (sys.kind == SystemKind::Disjunctive) {
        if (tr.guarded) {
          jt["guard"] = json::array();
          for (const auto& g : tr.guard) jt["guard"].push_back(sys.state_name(g.role, g.state));
        }
      } else {
        jt["dir"] = dir_name(tr.dir);
        if (tr.dir != Dir::Tau) jt["action"] = sys.actions[tr.action];
      }
      t["transitions"].push_back(jt);
    }
    j["templates"].push_back(t);
  }
  if (!doc.automaton) j["errors"] = doc.errors_spec;
  json c;
  c["pairing"] = doc.pairing;
  c["one_hot_receive"] = doc.one_hot;
  c["extra"] = doc.extra_text;
  j["constraints"] = c;
  if (doc.automaton) {
    const auto& aut = *doc.automaton;
    json a;
    a["states"] = aut.states;
    a["init"] = aut.states[aut.init];
    a["accepting"] = json::array();
    for (std::size_t f = 0; f < aut.states.size(); ++f)
      if (aut.accepting[f]) a["accepting"].push_back(aut.states[f]);
    a["transitions"] = json::array();
    for (const auto& e : aut.edges)
      a["transitions"].push_back({{"from", aut.states[e.from]}, {"obs", e.obs.text.empty() ? "true" : e.obs.text},
                                  {"to", aut.states[e.to]}});
    j["automaton"] = a;
    j["explicit_b"] = doc.explicit_b;
  }
  return j;
}

json config_json(const System& sys, const Config& c) {
  json j;
  j["text"] = format_config(sys, c);
  if (sys.has_a) j["a_state"] = sys.a.states.at(c.a);
  json counts = json::object();
  for (int q = 0; q < sys.nb(); ++q) counts[sys.b.states[q]] = c.c[q];
  j["counts"] = counts;
  if (sys.product) {
    int p = c.x.at(0);
    j["automaton"] = p == sys.product->sink ? std::string("sink") : sys.product->aut.states.at(p);
    json ex = json::array();
    for (int i = 1; i <= sys.product->k; ++i) ex.push_back(sys.b.states.at(c.x.at(i)));
    j["explicit"] = ex;
  }
  return j;
}

json sequence_json(const System& sys, const std::vector<std::vector<Config>>& sets) {
  json out = json::array();
  for (const auto& s : sets) {
    json layer = json::array();
    for (const auto& c : s) layer.push_back(format_config(sys, c));
    out.push_back(layer);
  }
  return out;
}

std::string format_set(const System& sys, const std::vector<Config>& set) {
  std::string s = "{";
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (i) s += ", ";
    s += format_config(sys, set[i]);
  }
  return s + "}";
}

std::vector<std::string> removed_ids(const System& sys, const std::vector<char>& keep) {
  std::vector<std::string> out;
  for (std::size_t t = 0; t < sys.trans.size(); ++t)
    if (t < keep.size() && !keep[t]) out.push_back(sys.trans[t].id);
  return out;
}

json repair_report(const Document& doc, const RepairOutcome& out, const RepairOptions& opts) {
  const System& sys = doc.sys;
  json j;
  j["system"] = doc.name;
  j["kind"] = kind_name(sys.kind);
  j["mode"] = mode_name(opts.mode);
  j["deadlock_check"] = opts.deadlock_check;
  j["verdict"] = verdict_name(out.verdict);
  j["iterations"] = out.iterations;
  if (out.verdict != RepairOutcome::Verdict::Unrealizable) {
    json kept = json::array(), removed = json::array();
    for (std::size_t t = 0; t < sys.trans.size(); ++t) {
      const auto& tr = sys.trans[t];
      if (out.keep[t]) {
        kept.push_back(tr.id);
        continue;
      }
      json r{{"id", tr.id}, {"origin", tr.origin}, {"text", sys.transition_text(static_cast<int>(t))}};
      if (tr.implicit) r["implicit"] = true;
      removed.push_back(r);
    }
    j["kept"] = kept;
    j["removed"] = removed;
  }
  j["history"] = json::array();
  for (const auto& rec : out.history) {
    json h;
    h["iteration"] = rec.iteration;
    h["kind"] = rec.kind;
    h["candidate_removed"] = removed_ids(sys, rec.candidate);
    h["sequence"] = sequence_json(sys, rec.sequence);
    if (rec.kind == "deadlock") {
      json run = json::array();
      for (const auto& s : rec.re) run.push_back(format_config(sys, s.front()));
      h["run"] = run;
    } else if (!rec.re.empty()) {
      h["reachable"] = sequence_json(sys, rec.re);
    }
    if (rec.added) {
      h["constraint"] = to_sexpr(rec.added, sys);
      h["excludes_candidate"] = rec.excludes_candidate;
    }
    h["notes"] = rec.notes;
    j["history"].push_back(h);
  }
  j["warnings"] = out.warnings;
  j["notes"] = doc.notes;
  return j;
}

std::string repair_summary(const Document& doc, const RepairOutcome& out, bool show_constraints) {
  const System& sys = doc.sys;
  std::ostringstream o;
  auto removed_line = [&](const std::vector<char>& cand) {
    std::string s;
    for (const auto& id : removed_ids(sys, cand)) s += " " + id;
    return s.empty() ? std::string(" (nothing)") : s;
  };
  for (const auto& rec : out.history) {
    o << "candidate " << rec.iteration << " removes:" << removed_line(rec.candidate) << "\n";
    o << "model-checker call " << rec.iteration << ": ";
    if (rec.kind == "safe") {
      o << "safe\n";
      for (const auto& n : rec.notes) o << "  note: " << n << "\n";
      continue;
    }
    if (rec.kind == "error") {
      o << "error sequence\n";
      for (std::size_t i = 0; i < rec.sequence.size(); ++i)
        o << "  E_" << i << " = " << format_set(sys, rec.sequence[i]) << "\n";
      const std::size_t k = rec.re.size();
      for (std::size_t i = 0; i < k; ++i) o << "  RE_" << (k - 1 - i) << " = " << format_set(sys, rec.re[i]) << "\n";
    } else {
      o << "safe, deadlock reachable\n  run:";
      for (const auto& s : rec.re) o << " " << format_config(sys, s.front());
      o << "\n";
    }
    for (const auto& n : rec.notes) o << "  note: " << n << "\n";
    o << "  newConstr = " << to_sexpr(rec.added, sys) << "\n";
  }
  o << "verdict: " << verdict_name(out.verdict) << " after " << out.iterations << " model-checker call(s)\n";
  if (out.verdict != RepairOutcome::Verdict::Unrealizable) o << "removed:" << removed_line(out.keep) << "\n";
  if (show_constraints) {
    o << "accumulated constraints:\n";
    for (const auto& c : out.accumulated) o << "  " << to_sexpr(c, sys) << "\n";
  }
  for (const auto& w : out.warnings) o << "warning: " << w << "\n";
  return o.str();
}

}  // namespace prepair
