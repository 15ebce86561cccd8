#include "prepair/sat.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <sstream>
#include <stdexcept>

namespace prepair {

namespace {

struct Tseitin {
  CnfFormula& f;
  std::map<std::string, int> memo;

  int fresh() { return ++f.num_vars; }

  void add(std::vector<int> cl) {
    std::sort(cl.begin(), cl.end());
    cl.erase(std::unique(cl.begin(), cl.end()), cl.end());
    for (std::size_t i = 0; i + 1 < cl.size(); ++i)
      for (std::size_t j = i + 1; j < cl.size(); ++j)
        if (cl[i] == -cl[j]) return;  // tautology
    f.clauses.push_back(std::move(cl));
  }

  int lit(const Constraint& c) {
    switch (c->op) {
      case Op::Atom: return c->atom + 1;
      case Op::Not: return -lit(c->kids[0]);
      case Op::True:
      case Op::False: {
        int v = fresh();
        add({c->op == Op::True ? v : -v});
        return v;
      }
      default: break;
    }
    if (auto it = memo.find(c->key); it != memo.end()) return it->second;
    std::vector<int> ks;
    for (const auto& k : c->kids) ks.push_back(lit(k));
    int v = fresh();
    if (c->op == Op::And) {
      std::vector<int> back{v};
      for (int k : ks) {
        add({-v, k});
        back.push_back(-k);
      }
      add(back);
    } else {
      std::vector<int> fwd{-v};
      for (int k : ks) {
        add({v, -k});
        fwd.push_back(k);
      }
      add(fwd);
    }
    memo.emplace(c->key, v);
    return v;
  }

  void top(const Constraint& c) {
    switch (c->op) {
      case Op::True: return;
      case Op::False: {
        int v = fresh();
        add({v});
        add({-v});
        return;
      }
      case Op::And:
        for (const auto& k : c->kids) top(k);
        return;
      case Op::Or: {
        std::vector<int> cl;
        for (const auto& k : c->kids) cl.push_back(lit(k));
        add(cl);
        return;
      }
      default: add({lit(c)});
    }
  }
};

class Cdcl {
 public:
  Cdcl(const CnfFormula& f, const Preference& pref) : nv_(f.num_vars) {
    val_.assign(nv_ + 1, -1);
    level_.assign(nv_ + 1, 0);
    reason_.assign(nv_ + 1, -1);
    seen_.assign(nv_ + 1, 0);
    watch_.assign(2 * (nv_ + 1), {});
    std::vector<char> placed(nv_ + 1, 0);
    for (auto [atom, phase] : pref.order) {
      int v = atom + 1;
      if (v < 1 || v > f.num_atoms || placed[v]) continue;
      placed[v] = 1;
      order_.push_back(phase ? v : -v);
    }
    for (int v = 1; v <= nv_; ++v)
      if (!placed[v]) order_.push_back(v);
    for (const auto& cl : f.clauses) {
      if (cl.empty()) {
        unsat_ = true;
        continue;
      }
      for (int l : cl)
        if (std::abs(l) > nv_ || l == 0) throw std::invalid_argument("clause literal out of range");
      clauses_.push_back(cl);
    }
  }

  std::optional<std::vector<char>> run() {
    if (unsat_) return std::nullopt;
    for (std::size_t ci = 0; ci < clauses_.size(); ++ci) {
      auto& cl = clauses_[ci];
      if (cl.size() == 1) {
        int v = value(cl[0]);
        if (v == 0) return std::nullopt;
        if (v < 0) assign(cl[0], static_cast<int>(ci));
      } else {
        watch_[idx(cl[0])].push_back(static_cast<int>(ci));
        watch_[idx(cl[1])].push_back(static_cast<int>(ci));
      }
    }
    for (;;) {
      int confl = propagate();
      if (confl >= 0) {
        if (trail_lim_.empty()) return std::nullopt;
        int bt;
        auto learnt = analyze(confl, bt);
        backtrack(bt);
        if (learnt.size() == 1) {
          assign(learnt[0], -1);
        } else {
          clauses_.push_back(learnt);
          int ci = static_cast<int>(clauses_.size()) - 1;
          watch_[idx(learnt[0])].push_back(ci);
          watch_[idx(learnt[1])].push_back(ci);
          assign(learnt[0], ci);
        }
        continue;
      }
      int next = 0;
      for (int l : order_)
        if (val_[std::abs(l)] < 0) {
          next = l;
          break;
        }
      if (next == 0) break;
      trail_lim_.push_back(static_cast<int>(trail_.size()));
      assign(next, -1);
    }
    std::vector<char> model(nv_ + 1, 0);
    for (int v = 1; v <= nv_; ++v) model[v] = val_[v] == 1;
    return model;
  }

 private:
  static int idx(int lit) { return 2 * std::abs(lit) + (lit < 0 ? 1 : 0); }
  int value(int lit) const {
    int v = val_[std::abs(lit)];
    if (v < 0) return -1;
    return lit > 0 ? v : 1 - v;
  }
  void assign(int lit, int why) {
    int v = std::abs(lit);
    val_[v] = lit > 0 ? 1 : 0;
    level_[v] = static_cast<int>(trail_lim_.size());
    reason_[v] = why;
    trail_.push_back(lit);
  }

  int propagate() {
    while (qhead_ < trail_.size()) {
      int p = trail_[qhead_++];
      int falsel = -p;
      auto& ws = watch_[idx(falsel)];
      std::size_t keep = 0;
      for (std::size_t wi = 0; wi < ws.size(); ++wi) {
        int ci = ws[wi];
        auto& cl = clauses_[ci];
        if (cl[0] == falsel) std::swap(cl[0], cl[1]);
        if (value(cl[0]) == 1) {
          ws[keep++] = ci;
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < cl.size(); ++k) {
          if (value(cl[k]) != 0) {
            std::swap(cl[1], cl[k]);
            watch_[idx(cl[1])].push_back(ci);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[keep++] = ci;
        if (value(cl[0]) == 0) {
          for (std::size_t r = wi + 1; r < ws.size(); ++r) ws[keep++] = ws[r];
          ws.resize(keep);
          qhead_ = trail_.size();
          return ci;
        }
        assign(cl[0], ci);
      }
      ws.resize(keep);
    }
    return -1;
  }

  std::vector<int> analyze(int confl, int& bt) {
    std::vector<int> learnt{0};
    const int dl = static_cast<int>(trail_lim_.size());
    int counter = 0;
    int p = 0;
    int ti = static_cast<int>(trail_.size()) - 1;
    for (;;) {
      const auto& cl = clauses_[confl];
      for (std::size_t j = (p == 0 ? 0 : 1); j < cl.size(); ++j) {
        int q = cl[j];
        int v = std::abs(q);
        if (seen_[v] || level_[v] == 0) continue;
        seen_[v] = 1;
        if (level_[v] == dl)
          ++counter;
        else
          learnt.push_back(q);
      }
      while (!seen_[std::abs(trail_[ti])]) --ti;
      p = trail_[ti--];
      seen_[std::abs(p)] = 0;
      if (--counter == 0) break;
      confl = reason_[std::abs(p)];
    }
    learnt[0] = -p;
    for (std::size_t j = 1; j < learnt.size(); ++j) seen_[std::abs(learnt[j])] = 0;
    bt = 0;
    std::size_t hi = 0;
    for (std::size_t j = 1; j < learnt.size(); ++j)
      if (level_[std::abs(learnt[j])] > bt) {
        bt = level_[std::abs(learnt[j])];
        hi = j;
      }
    if (hi) std::swap(learnt[1], learnt[hi]);
    return learnt;
  }

  void backtrack(int lvl) {
    if (static_cast<int>(trail_lim_.size()) <= lvl) return;
    std::size_t stop = trail_lim_[lvl];
    for (std::size_t i = trail_.size(); i-- > stop;) {
      int v = std::abs(trail_[i]);
      val_[v] = -1;
      reason_[v] = -1;
    }
    trail_.resize(stop);
    trail_lim_.resize(lvl);
    qhead_ = trail_.size();
  }

  int nv_;
  bool unsat_ = false;
  std::vector<std::vector<int>> clauses_;
  std::vector<std::vector<int>> watch_;
  std::vector<int> val_, level_, reason_;
  std::vector<char> seen_;
  std::vector<int> trail_, trail_lim_, order_;
  std::size_t qhead_ = 0;
};

}  // namespace

CnfFormula to_cnf(const std::vector<Constraint>& parts, const System& sys) {
  CnfFormula f;
  f.num_atoms = static_cast<int>(sys.trans.size());
  f.num_vars = f.num_atoms;
  for (const auto& t : sys.trans) f.names.push_back(t.id);
  Tseitin ts{f, {}};
  for (const auto& c : parts) ts.top(c);
  return f;
}

CnfFormula to_cnf(const Constraint& c, const System& sys) { return to_cnf(std::vector<Constraint>{c}, sys); }

Preference parse_preference(const std::string& text, const System& sys) {
  Preference p;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    if (tok[0] == '#') {
      std::string rest;
      std::getline(in, rest);
      continue;
    }
    bool phase = true;
    if (tok[0] == '-' || tok[0] == '+') {
      phase = tok[0] == '+';
      tok = tok.substr(1);
    }
    int t = sys.find(tok);
    if (t < 0) throw std::invalid_argument("preference names unknown transition '" + tok + "'");
    p.order.push_back({t, phase});
  }
  return p;
}

std::optional<std::vector<char>> solve_full(const CnfFormula& f, const Preference& pref) {
  Cdcl s(f, pref);
  return s.run();
}

std::optional<std::vector<char>> solve(const CnfFormula& f, const Preference& pref) {
  auto m = solve_full(f, pref);
  if (!m) return std::nullopt;
  return std::vector<char>(m->begin() + 1, m->begin() + 1 + f.num_atoms);
}

std::string export_dimacs(const CnfFormula& f) {
  std::ostringstream out;
  for (int v = 1; v <= f.num_atoms; ++v) out << "c var " << v << " = " << f.names.at(v - 1) << "\n";
  out << "p cnf " << f.num_vars << " " << f.clauses.size() << "\n";
  for (const auto& cl : f.clauses) {
    for (int l : cl) out << l << " ";
    out << "0\n";
  }
  return out.str();
}

CnfFormula parse_dimacs(const std::string& text) {
  CnfFormula f;
  std::istringstream in(text);
  std::string line;
  bool header = false;
  std::vector<int> cur;
  std::size_t declared = 0;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == "c") {
      std::string kw, eq, name;
      int v;
      if (ls >> kw && kw == "var" && ls >> v >> eq && eq == "=" && ls >> name) {
        if (v != static_cast<int>(f.names.size()) + 1) throw std::invalid_argument("dimacs: variable map out of order");
        f.names.push_back(name);
      }
      continue;
    }
    if (first == "p") {
      std::string fmt;
      if (!(ls >> fmt >> f.num_vars >> declared) || fmt != "cnf") throw std::invalid_argument("dimacs: bad header");
      header = true;
      continue;
    }
    if (!header) throw std::invalid_argument("dimacs: clause before header");
    std::istringstream cs(line);
    std::string tok;
    while (cs >> tok) {
      char* end = nullptr;
      long l = std::strtol(tok.c_str(), &end, 10);
      if (*end) throw std::invalid_argument("dimacs: bad literal '" + tok + "'");
      if (l == 0) {
        f.clauses.push_back(cur);
        cur.clear();
      } else {
        if (std::abs(l) > f.num_vars) throw std::invalid_argument("dimacs: literal out of range");
        cur.push_back(static_cast<int>(l));
      }
    }
  }
  if (!header) throw std::invalid_argument("dimacs: missing header");
  if (!cur.empty()) throw std::invalid_argument("dimacs: unterminated clause");
  if (f.clauses.size() != declared) throw std::invalid_argument("dimacs: clause count mismatch");
  f.num_atoms = static_cast<int>(f.names.size());
  return f;
}

std::vector<char> import_model(const std::string& text, const CnfFormula& f) {
  std::istringstream in(text);
  std::string tok;
  std::vector<char> model(f.num_atoms, 0);
  std::vector<char> set(f.num_atoms, 0);
  while (in >> tok) {
    if (tok == "UNSAT" || tok == "UNSATISFIABLE") throw std::invalid_argument("model text reports unsat");
    char* end = nullptr;
    long l = std::strtol(tok.c_str(), &end, 10);
    if (*end || tok.empty()) continue;  // s / v / SAT markers
    if (l == 0) continue;
    int v = static_cast<int>(std::abs(l));
    if (v <= f.num_atoms) {
      model[v - 1] = l > 0;
      set[v - 1] = 1;
    }
  }
  if (std::find(set.begin(), set.end(), 0) != set.end()) throw std::invalid_argument("model does not assign every atom");
  return model;
}

}  // namespace prepair
