#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "prepair/core.hpp"

namespace prepair {

enum class SystemKind : std::uint8_t { Disjunctive, Rendezvous, Broadcast };
enum class Dir : std::uint8_t { None, Tau, Send, Recv, BSend, BRecv };

const char* kind_name(SystemKind k);
const char* dir_name(Dir d);

struct GuardRef {
  Role role = Role::B;
  int state = 0;
  bool operator==(const GuardRef&) const = default;
};

struct LocalTransition {
  std::string id;
  std::string origin;  // id before guard splitting
  Role role = Role::B;
  int from = 0;
  int to = 0;
  bool guarded = false;          // disjunctive only; false = always enabled
  std::vector<GuardRef> guard;   // singleton once split
  Dir dir = Dir::None;
  int action = -1;
  bool implicit = false;         // completed broadcast receive
};

struct Template {
  Role role = Role::B;
  std::vector<std::string> states;
  int init = 0;
};

// observation literal: slot 0 = controller A, slot i >= 1 = explicit B process i
struct ObsLit {
  int slot = 0;
  int state = 0;
  bool neg = false;
};

struct Obs {
  std::vector<ObsLit> lits;  // empty = true
  std::string text;
};

struct Automaton {
  struct Edge {
    int from = 0;
    Obs obs;
    int to = 0;
  };
  std::vector<std::string> states;
  int init = 0;
  std::vector<char> accepting;
  std::vector<Edge> edges;
};

struct ProductInfo {
  int k = 0;
  Automaton aut;
  int sink = -1;  // index of the completion sink (== aut.states.size())
};

struct System {
  SystemKind kind = SystemKind::Disjunctive;
  bool has_a = true;
  Template a;
  Template b;
  std::vector<std::string> actions;
  std::vector<LocalTransition> trans;
  std::vector<char> active;  // restriction mask over trans
  std::shared_ptr<const ProductInfo> product;

  int nb() const { return static_cast<int>(b.states.size()); }
  int find(const std::string& id) const;  // -1 if missing
  std::vector<int> find_origin(const std::string& origin) const;
  const std::string& state_name(Role r, int i) const;
  std::string transition_text(int t) const;
  bool is_active(int t) const { return active.empty() || active[t]; }
  std::vector<int> active_indices() const;
};

std::string format_config(const System& sys, const Config& s);

// disjunctive guard lists are split into singleton copies
System split_guards(const System& sys);

System restrict_system(const System& sys, const std::vector<char>& keep_mask);
System restrict_system(const System& sys, const std::vector<std::string>& keep_ids);

// conditions (a)-(d) for singleton guards, plain counter systems only
bool guard_satisfied(const System& sys, const Config& s, Role mover, int source, const GuardRef& g);

struct Move {
  std::vector<int> parts;
  int action = -1;
  int a_from = -1, a_to = -1;  // -1: controller does not move
  int a_need = -1;
  int ex = 0, ex_from = -1, ex_to = -1;  // explicit mover slot, 0 = none
  std::vector<std::pair<int, int>> ex_need;
  std::vector<int> pre, post, need;
};

struct Bcast {
  int sender = 0;
  int action = 0;
  int from = 0, to = 0;
  std::vector<std::vector<std::pair<int, int>>> recv;  // per B state: (transition, target)
};

struct Step {
  std::vector<int> parts;  // sorted transition indices
  int action = -1;
  Config to;
  auto operator<=>(const Step&) const = default;
  bool operator==(const Step&) const = default;
};

class Engine {
 public:
  explicit Engine(System sys);

  const System& sys() const { return sys_; }
  const std::vector<Move>& moves() const { return moves_; }
  const std::vector<Bcast>& bcasts() const { return bcasts_; }

  std::vector<Step> successors(const Config& s) const;
  std::vector<int> enabled_local(const Config& s) const;
  Config successor(const Config& s, int t) const;  // throws if t not enabled or ambiguous
  std::vector<Config> succ_set(const std::vector<Config>& r) const;

  // minimal predecessors of the upward closure of r (one step)
  std::vector<Config> pred_candidates(const Config& r) const;

  bool is_initial(const Config& s) const;      // s itself initial
  bool covers_initial(const Config& e) const;  // some initial state in the cone of e
  Config initial_witness(const Config& e) const;
  Config initial_config(int n) const;

  std::vector<int> aut_next(int p, const Config& src) const;

 private:
  bool obs_holds(const Obs& o, const Config& s) const;
  void compile();
  void compile_disjunctive(int t);
  void step_move(const Move& m, const Config& s, std::vector<Step>& out) const;
  void step_bcast(const Bcast& b, const Config& s, std::vector<Step>& out) const;
  void pred_move(const Move& m, const Config& r, std::vector<Config>& out) const;
  void pred_bcast(const Bcast& b, const Config& r, std::vector<Config>& out) const;
  Move blank(int t) const;

  System sys_;
  std::vector<Move> moves_;
  std::vector<Bcast> bcasts_;
};

}  // namespace prepair
