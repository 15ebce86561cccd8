#include "prepair/constraints.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>

namespace prepair {

namespace {

Constraint make(Op op, int atom, std::vector<Constraint> kids) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->atom = atom;
  n->kids = std::move(kids);
  switch (op) {
    case Op::True: n->key = "true"; break;
    case Op::False: n->key = "false"; break;
    case Op::Atom: n->key = "#" + std::to_string(atom); break;
    case Op::Not: n->key = "(not " + n->kids[0]->key + ")"; break;
    case Op::And:
    case Op::Or:
      n->key = op == Op::And ? "(and" : "(or";
      for (const auto& k : n->kids) n->key += " " + k->key;
      n->key += ")";
      break;
  }
  return n;
}

bool is_literal(const Constraint& c) {
  return c->op == Op::Atom || (c->op == Op::Not && c->kids[0]->op == Op::Atom);
}

int lit_atom(const Constraint& c) { return c->op == Op::Atom ? c->atom : c->kids[0]->atom; }

bool kid_less(const Constraint& x, const Constraint& y) {
  bool lx = is_literal(x), ly = is_literal(y);
  if (lx != ly) return lx;
  if (lx) {
    if (lit_atom(x) != lit_atom(y)) return lit_atom(x) < lit_atom(y);
    return x->op == Op::Atom && y->op != Op::Atom;
  }
  return x->key < y->key;
}

Constraint junction(Op op, std::vector<Constraint> xs) {
  const Op unit = op == Op::And ? Op::True : Op::False;
  const Op zero = op == Op::And ? Op::False : Op::True;
  std::vector<Constraint> flat;
  for (auto& x : xs) {
    if (x->op == unit) continue;
    if (x->op == zero) return make(zero, -1, {});
    if (x->op == op)
      flat.insert(flat.end(), x->kids.begin(), x->kids.end());
    else
      flat.push_back(std::move(x));
  }
  std::set<std::string> keys;
  std::vector<Constraint> uniq;
  for (auto& x : flat)
    if (keys.insert(x->key).second) uniq.push_back(std::move(x));
  for (const auto& x : uniq)
    if (x->op == Op::Not && keys.count(x->kids[0]->key)) return make(zero, -1, {});
  if (uniq.empty()) return make(unit, -1, {});
  if (uniq.size() == 1) return uniq[0];
  std::sort(uniq.begin(), uniq.end(), kid_less);
  return make(op, -1, std::move(uniq));
}

bool plain_symbol(const std::string& s) {
  if (s.empty() || s == "and" || s == "or" || s == "not" || s == "true" || s == "false" || s == "one") return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char ch) {
    return std::isalnum(ch) || ch == '_' || ch == '-' || ch == '.' || ch == '~' || ch == ':' || ch == '@';
  });
}

std::string quote(const std::string& s) {
  if (plain_symbol(s)) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') q += '\\';
    q += ch;
  }
  return q + "\"";
}

}  // namespace

Constraint c_true() {
  static const Constraint t = make(Op::True, -1, {});
  return t;
}
Constraint c_false() {
  static const Constraint f = make(Op::False, -1, {});
  return f;
}
Constraint c_atom(int t) { return make(Op::Atom, t, {}); }

Constraint c_not(Constraint x) {
  if (x->op == Op::True) return c_false();
  if (x->op == Op::False) return c_true();
  if (x->op == Op::Not) return x->kids[0];
  return make(Op::Not, -1, {std::move(x)});
}

Constraint c_and(std::vector<Constraint> xs) { return junction(Op::And, std::move(xs)); }
Constraint c_or(std::vector<Constraint> xs) { return junction(Op::Or, std::move(xs)); }

Constraint c_one(const std::vector<int>& atoms) {
  std::vector<Constraint> alts;
  for (int t : atoms) {
    std::vector<Constraint> conj{c_atom(t)};
    for (int u : atoms)
      if (u != t) conj.push_back(c_not(c_atom(u)));
    alts.push_back(c_and(std::move(conj)));
  }
  return c_or(std::move(alts));
}

bool evaluate(const Constraint& c, const std::vector<char>& assign) {
  switch (c->op) {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Atom: return assign.at(c->atom) != 0;
    case Op::Not: return !evaluate(c->kids[0], assign);
    case Op::And:
      return std::all_of(c->kids.begin(), c->kids.end(), [&](const Constraint& k) { return evaluate(k, assign); });
    case Op::Or:
      return std::any_of(c->kids.begin(), c->kids.end(), [&](const Constraint& k) { return evaluate(k, assign); });
  }
  return false;
}

static void collect_atoms(const Constraint& c, std::set<int>& out) {
  if (c->op == Op::Atom) out.insert(c->atom);
  for (const auto& k : c->kids) collect_atoms(k, out);
}

std::vector<int> atoms_of(const Constraint& c) {
  std::set<int> s;
  collect_atoms(c, s);
  return {s.begin(), s.end()};
}

std::vector<int> clause_literals(const Constraint& c) {
  auto lit = [](const Constraint& x) { return x->op == Op::Atom ? x->atom + 1 : -(lit_atom(x) + 1); };
  if (is_literal(c)) return {lit(c)};
  if (c->op != Op::Or) return {};
  std::vector<int> out;
  for (const auto& k : c->kids) {
    if (!is_literal(k)) return {};
    out.push_back(lit(k));
  }
  return out;
}

static void print(const Constraint& c, const System& sys, std::string& out) {
  switch (c->op) {
    case Op::True: out += "true"; return;
    case Op::False: out += "false"; return;
    case Op::Atom: out += quote(sys.trans.at(c->atom).id); return;
    case Op::Not:
      out += "(not ";
      print(c->kids[0], sys, out);
      out += ")";
      return;
    case Op::And:
    case Op::Or:
      out += c->op == Op::And ? "(and" : "(or";
      for (const auto& k : c->kids) {
        out += " ";
        print(k, sys, out);
      }
      out += ")";
      return;
  }
}

std::string to_sexpr(const Constraint& c, const System& sys) {
  std::string out;
  print(c, sys, out);
  return out;
}

namespace {

struct SexprParser {
  std::string_view s;
  const System& sys;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw std::invalid_argument("constraint parse error at offset " + std::to_string(pos) + ": " + msg);
  }
  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  std::string token(bool& quoted) {
    skip();
    quoted = false;
    if (pos >= s.size()) fail("unexpected end of input");
    if (s[pos] == '(' || s[pos] == ')') return std::string(1, s[pos++]);
    std::string t;
    if (s[pos] == '"') {
      quoted = true;
      ++pos;
      while (pos < s.size() && s[pos] != '"') {
        if (s[pos] == '\\' && pos + 1 < s.size()) ++pos;
        t += s[pos++];
      }
      if (pos >= s.size()) fail("unterminated string");
      ++pos;
      return t;
    }
    while (pos < s.size() && !std::isspace(static_cast<unsigned char>(s[pos])) && s[pos] != '(' && s[pos] != ')')
      t += s[pos++];
    return t;
  }
  std::vector<int> resolve(const std::string& id) {
    int t = sys.find(id);
    if (t >= 0) return {t};
    auto v = sys.find_origin(id);
    if (v.empty()) fail("unknown transition id '" + id + "'");
    return v;
  }
  Constraint atom_expr(const std::string& id) {
    std::vector<Constraint> alts;
    for (int t : resolve(id)) alts.push_back(c_atom(t));
    return c_or(std::move(alts));
  }
  Constraint expr() {
    bool q;
    std::string t = token(q);
    if (q) return atom_expr(t);
    if (t == ")") fail("unexpected ')'");
    if (t != "(") {
      if (t == "true") return c_true();
      if (t == "false") return c_false();
      return atom_expr(t);
    }
    std::string head = token(q);
    if (q) fail("operator expected");
    std::vector<Constraint> args;
    for (;;) {
      skip();
      if (pos < s.size() && s[pos] == ')') {
        ++pos;
        break;
      }
      args.push_back(expr());
    }
    if (head == "and") return c_and(std::move(args));
    if (head == "or") return c_or(std::move(args));
    if (head == "not") {
      if (args.size() != 1) fail("'not' takes one argument");
      return c_not(args[0]);
    }
    if (head == "one") {
      std::vector<Constraint> alts;
      for (std::size_t i = 0; i < args.size(); ++i) {
        std::vector<Constraint> conj{args[i]};
        for (std::size_t j = 0; j < args.size(); ++j)
          if (j != i) conj.push_back(c_not(args[j]));
        alts.push_back(c_and(std::move(conj)));
      }
      return c_or(std::move(alts));
    }
    fail("unknown operator '" + head + "'");
  }
};

}  // namespace

Constraint parse_sexpr(std::string_view text, const System& sys) {
  SexprParser p{text, sys};
  auto c = p.expr();
  p.skip();
  if (p.pos != text.size()) p.fail("trailing input");
  return c;
}

Constraint tr_constr(const System& sys) {
  std::vector<Constraint> conj;
  auto per_state = [&](Role role, const Template& tpl, bool active_only) {
    for (int q = 0; q < static_cast<int>(tpl.states.size()); ++q) {
      std::vector<Constraint> out;
      for (std::size_t t = 0; t < sys.trans.size(); ++t) {
        const auto& tr = sys.trans[t];
        if (tr.role != role || tr.from != q) continue;
        if (active_only && (tr.dir == Dir::BRecv)) continue;
        out.push_back(c_atom(static_cast<int>(t)));
      }
      if (out.empty() && active_only) continue;
      if (out.empty())
        throw std::invalid_argument("state " + tpl.states[q] + " has no outgoing transition");
      conj.push_back(c_or(std::move(out)));
    }
  };
  const bool bc = sys.kind == SystemKind::Broadcast;
  if (sys.has_a) per_state(Role::A, sys.a, bc);
  per_state(Role::B, sys.b, bc);
  if (bc) {
    for (int a = 0; a < static_cast<int>(sys.actions.size()); ++a)
      for (int q = 0; q < sys.nb(); ++q) {
        std::vector<Constraint> out;
        for (std::size_t t = 0; t < sys.trans.size(); ++t) {
          const auto& tr = sys.trans[t];
          if (tr.dir == Dir::BRecv && tr.action == a && tr.from == q) out.push_back(c_atom(static_cast<int>(t)));
        }
        if (!out.empty()) conj.push_back(c_or(std::move(out)));
      }
  }
  return c_and(std::move(conj));
}

Constraint pairing_constr(const System& sys) {
  std::vector<Constraint> conj;
  for (int a = 0; a < static_cast<int>(sys.actions.size()); ++a) {
    std::vector<int> send, recv;
    for (std::size_t t = 0; t < sys.trans.size(); ++t) {
      const auto& tr = sys.trans[t];
      if (tr.action != a) continue;
      if (tr.dir == Dir::Send || tr.dir == Dir::BSend) send.push_back(static_cast<int>(t));
      if (tr.dir == Dir::Recv || tr.dir == Dir::BRecv) recv.push_back(static_cast<int>(t));
    }
    for (int s : send) {
      std::vector<Constraint> any, none;
      for (int r : recv) {
        any.push_back(c_atom(r));
        none.push_back(c_not(c_atom(r)));
      }
      none.push_back(c_not(c_atom(s)));
      conj.push_back(c_or({c_and({c_atom(s), c_or(std::move(any))}), c_and(std::move(none))}));
    }
  }
  return c_and(std::move(conj));
}

Constraint one_hot_receive(const System& sys) {
  std::vector<Constraint> conj;
  for (int a = 0; a < static_cast<int>(sys.actions.size()); ++a)
    for (Role role : {Role::A, Role::B}) {
      int ns = static_cast<int>((role == Role::A ? sys.a : sys.b).states.size());
      for (int q = 0; q < ns; ++q) {
        std::vector<int> opts;
        for (std::size_t t = 0; t < sys.trans.size(); ++t) {
          const auto& tr = sys.trans[t];
          if (tr.role == role && tr.from == q && tr.action == a && (tr.dir == Dir::Recv || tr.dir == Dir::BRecv))
            opts.push_back(static_cast<int>(t));
        }
        if (!opts.empty()) conj.push_back(c_one(opts));
      }
    }
  return c_and(std::move(conj));
}

Constraint ConstraintBuilder::build(const Config& s, std::size_t idx) {
  if (idx >= re_.size()) return c_true();
  auto key = std::make_pair(s, idx);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  const auto& target = re_[idx];
  std::vector<Constraint> conj;
  for (const auto& st : eng_.successors(s)) {
    if (!std::binary_search(target.begin(), target.end(), st.to)) continue;
    std::vector<Constraint> cut;
    for (int t : st.parts) cut.push_back(c_not(c_atom(t)));
    if (idx + 1 < re_.size()) cut.push_back(build(st.to, idx + 1));
    conj.push_back(c_or(std::move(cut)));
  }
  auto res = c_and(std::move(conj));
  memo_.emplace(key, res);
  return res;
}

Constraint build_constr(const Engine& eng, const Config& s, const std::vector<std::vector<Config>>& re) {
  ConstraintBuilder b(eng, re);
  return b.build(s);
}

Constraint build_sync_constr(const Engine& eng, const Config& s, const std::vector<std::vector<Config>>& re) {
  return build_constr(eng, s, re);
}

Constraint path_constr(const std::vector<Step>& steps) {
  std::vector<Constraint> cut;
  for (const auto& st : steps)
    for (int t : st.parts) cut.push_back(c_not(c_atom(t)));
  return c_or(std::move(cut));
}

Constraint deadlock_constr(const Path& path, const Engine& full) {
  if (path.states.empty()) return c_true();
  std::vector<Constraint> alts{path_constr(path.steps)};
  for (const auto& st : full.successors(path.states.back())) {
    std::vector<Constraint> keep;
    for (int t : st.parts) keep.push_back(c_atom(t));
    alts.push_back(c_and(std::move(keep)));
  }
  return c_or(std::move(alts));
}

Constraint block_assignment(const std::vector<char>& assign) {
  std::vector<Constraint> lits;
  for (std::size_t t = 0; t < assign.size(); ++t)
    lits.push_back(assign[t] ? c_not(c_atom(static_cast<int>(t))) : c_atom(static_cast<int>(t)));
  return c_or(std::move(lits));
}

}  // namespace prepair
