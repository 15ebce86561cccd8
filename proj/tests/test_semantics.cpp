#include <doctest.h>

#include <algorithm>

#include "gen.hpp"
#include "prepair/corpus.hpp"
#include "prepair/frontend.hpp"
#include "prepair/semantics.hpp"

using namespace prepair;

TEST_CASE("reader-writer steps") {
  auto doc = load_corpus("reader_writer");
  Engine eng(doc.sys);
  const auto& sys = doc.sys;
  int nw = 0, w = 1;
  REQUIRE(sys.a.states[nw] == "nw");
  // a reader can enter only while the writer is out
  Config s{nw, {}, {1, 0}};
  auto next = eng.successors(s);
  std::vector<std::string> got;
  for (const auto& st : next) got.push_back(format_config(sys, st.to));
  std::sort(got.begin(), got.end());
  CHECK(got == std::vector<std::string>{"(nw,(0,1))", "(w,(1,0))"});
  Config t{w, {}, {1, 0}};
  for (const auto& st : eng.successors(t)) CHECK(st.to.c == std::vector<int>{1, 0});
}

TEST_CASE("guard satisfaction cases") {
  auto doc = load_corpus("reader_writer");
  const auto& sys = doc.sys;
  GuardRef nr{Role::B, 0}, r{Role::B, 1}, nw{Role::A, 0};
  // a B process does not satisfy its own guard
  CHECK_FALSE(guard_satisfied(sys, Config{0, {}, {1, 0}}, Role::B, 0, nr));
  CHECK(guard_satisfied(sys, Config{0, {}, {2, 0}}, Role::B, 0, nr));
  CHECK(guard_satisfied(sys, Config{0, {}, {1, 0}}, Role::B, 0, nw));
  CHECK_FALSE(guard_satisfied(sys, Config{1, {}, {1, 0}}, Role::B, 0, nw));
  // the controller needs one B process in the guard state
  CHECK(guard_satisfied(sys, Config{1, {}, {0, 1}}, Role::A, 1, r));
  CHECK_FALSE(guard_satisfied(sys, Config{1, {}, {1, 0}}, Role::A, 1, r));
}

TEST_CASE("MESI read broadcast") {
  auto doc = load_corpus("mesi");
  Engine eng(doc.sys);
  int t = doc.sys.find("(I,read!!,S)");
  REQUIRE(t >= 0);
  Config s{-1, {}, {0, 0, 0, 2}};
  bool seen = false;
  for (const auto& st : eng.successors(s))
    if (std::find(st.parts.begin(), st.parts.end(), t) != st.parts.end()) {
      seen = true;
      CHECK(st.to.c == std::vector<int>{0, 0, 1, 1});
    }
  CHECK(seen);
}

TEST_CASE("split_guards keeps the origin") {
  auto doc = load_corpus("appc_safety");
  auto copies = doc.sys.find_origin("(nr,Q,r)");
  CHECK(copies.size() == 4);
  for (int t : copies) CHECK(doc.sys.trans[t].guard.size() == 1);
}

TEST_CASE("restrict by ids") {
  auto doc = load_corpus("reader_writer");
  auto r = restrict_system(doc.sys, std::vector<std::string>{"(nw,-,w)", "(w,-,nw)", "(nr,{nw},r)", "(r,-,nr)"});
  CHECK(r.active_indices().size() == 4);
  CHECK_THROWS(restrict_system(doc.sys, std::vector<std::string>{"nope"}));
}

TEST_CASE("process count is preserved and steps are monotone") {
  gen::Rng rng(21);
  for (int round = 0; round < 200; ++round) {
    System sys = round % 2 ? gen::rendezvous(rng) : gen::disjunctive(rng);
    Engine eng(sys);
    for (int k = 0; k < 10; ++k) {
      Config s = gen::config(rng, sys, 2);
      Config bigger = s;
      bigger.c[std::uniform_int_distribution<int>(0, sys.nb() - 1)(rng)] += 1;
      auto big_next = eng.successors(bigger);
      for (const auto& st : eng.successors(s)) {
        CHECK(st.to.total() == s.total());
        // compatibility of the counter order with steps
        bool covered = std::any_of(big_next.begin(), big_next.end(),
                                   [&](const Step& b) { return config_leq(st.to, b.to, OrderKind::Cover); });
        CHECK(covered);
      }
    }
  }
}

TEST_CASE("pred_candidates are predecessors") {
  gen::Rng rng(22);
  for (int round = 0; round < 200; ++round) {
    System sys = gen::disjunctive(rng);
    Engine eng(sys);
    Config r = gen::config(rng, sys, 2);
    for (const auto& p : eng.pred_candidates(r)) {
      auto next = eng.successors(p);
      CHECK(std::any_of(next.begin(), next.end(),
                        [&](const Step& st) { return config_leq(r, st.to, OrderKind::Cover); }));
    }
  }
}
