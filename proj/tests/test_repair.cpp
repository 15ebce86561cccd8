#include <doctest.h>

#include <algorithm>
#include <filesystem>

#include "gen.hpp"
#include "prepair/corpus.hpp"
#include "prepair/deadlock.hpp"
#include "prepair/frontend.hpp"
#include "prepair/oracle.hpp"
#include "prepair/repair.hpp"

using namespace prepair;

TEST_CASE("repaired results are safe and every constraint excludes its candidate") {
  gen::Rng rng(71);
  int repaired = 0, unreal = 0;
  for (int round = 0; round < 120; ++round) {
    System sys = round % 3 == 2 ? gen::rendezvous(rng) : gen::disjunctive(rng);
    if (sys.trans.size() > 12) continue;
    UpSet err = gen::basis(rng, sys, OrderKind::Cover, 2, 2);
    RepairOptions o;
    o.mode = static_cast<Mode>(round % 3);
    o.deadlock_check = false;
    auto out = repair(sys, err, tr_constr(sys), o);
    CHECK(static_cast<std::uint64_t>(out.iterations) <= (std::uint64_t{1} << sys.trans.size()));
    for (const auto& h : out.history)
      if (h.added) CHECK_FALSE(evaluate(h.added, h.candidate));
    if (out.verdict == RepairOutcome::Verdict::Repaired) {
      ++repaired;
      CHECK(evaluate(tr_constr(sys), out.keep));
      Engine eng(restrict_system(sys, out.keep));
      CHECK(model_check(eng, err).safe);
      for (int n = 0; n <= 4; ++n) CHECK_FALSE(explicit_reach(eng, n, err));
    } else {
      ++unreal;
    }
  }
  CHECK(repaired > 0);
  CHECK(unreal > 0);
}

TEST_CASE("full mode never needs more rounds than there are distinct error paths to block") {
  // weaker than the acceptance contrast, but over random systems
  gen::Rng rng(72);
  int naive_total = 0, full_total = 0;
  for (int round = 0; round < 60; ++round) {
    System sys = gen::disjunctive(rng);
    if (sys.trans.size() > 10) continue;
    UpSet err = gen::basis(rng, sys, OrderKind::Cover, 2, 2);
    RepairOptions o;
    o.deadlock_check = false;
    auto full = repair(sys, err, tr_constr(sys), o);
    o.mode = Mode::Naive;
    auto naive = repair(sys, err, tr_constr(sys), o);
    CHECK(full.verdict == naive.verdict);
    full_total += full.iterations;
    naive_total += naive.iterations;
  }
  CHECK(full_total <= naive_total);
}

TEST_CASE("an initial error state is unrealizable at once") {
  auto doc = load_corpus("reader_writer");
  UpSet err = min_basis({Config{0, {}, {1, 0}}}, OrderKind::Cover);
  RepairOptions o;
  o.deadlock_check = false;
  auto out = repair(doc.sys, err, doc.init, o);
  CHECK(out.verdict == RepairOutcome::Verdict::Unrealizable);
  CHECK(out.iterations == 1);
  REQUIRE(out.history.size() == 1);
  CHECK(out.history[0].added->op == Op::False);
}

TEST_CASE("iteration limit") {
  auto doc = load_corpus("scheduler_rw");
  RepairOptions o;
  o.max_iter = 1;
  auto out = repair(doc.sys, doc.err, doc.init, o);
  CHECK(out.verdict == RepairOutcome::Verdict::IterationLimit);
  CHECK(out.iterations == 1);
}

TEST_CASE("deadlock check changes the answer on the toy system") {
  auto doc = load_corpus("toy_deadlock");
  RepairOptions o;
  o.pref = parse_preference("-(try,-,idle)", doc.sys);
  o.deadlock_check = false;
  auto loose = repair(doc.sys, doc.err, doc.init, o);
  o.deadlock_check = true;
  auto strict = repair(doc.sys, doc.err, doc.init, o);
  REQUIRE(loose.verdict == RepairOutcome::Verdict::Repaired);
  REQUIRE(strict.verdict == RepairOutcome::Verdict::Repaired);
  Engine le(restrict_system(doc.sys, loose.keep)), se(restrict_system(doc.sys, strict.keep));
  CHECK_FALSE(explicit_deadlocks(le, 1).empty());
  for (int n = 1; n <= 5; ++n) CHECK(explicit_deadlocks(se, n).empty());
  CHECK(std::any_of(strict.history.begin(), strict.history.end(),
                    [](const IterationRecord& h) { return h.kind == "deadlock"; }));
}

TEST_CASE("broadcast repair with deadlock checking is refused") {
  auto doc = load_corpus("mesi");
  CHECK_THROWS_AS(repair(doc.sys, doc.err, doc.init, RepairOptions{}), unsupported_error);
}

TEST_CASE("dimacs files per round") {
  auto doc = load_corpus("mesi");
  auto dir = std::filesystem::temp_directory_path() / "prepair_dimacs_test";
  std::filesystem::remove_all(dir);
  RepairOptions o;
  o.deadlock_check = false;
  o.emit_dimacs_dir = dir.string();
  auto out = repair(doc.sys, doc.err, doc.init, o);
  CHECK(std::filesystem::exists(dir / "round_1.cnf"));
  CHECK(std::filesystem::exists(dir / ("round_" + std::to_string(out.iterations) + ".cnf")));
  std::filesystem::remove_all(dir);
}

TEST_CASE("single path constraints are weaker than full ones") {
  gen::Rng rng(73);
  for (int round = 0; round < 80; ++round) {
    System sys = gen::disjunctive(rng);
    if (sys.trans.size() > 10) continue;
    UpSet err = gen::basis(rng, sys, OrderKind::Cover, 2, 2);
    Engine eng(sys);
    auto seq = model_check(eng, err);
    if (seq.safe) continue;
    auto re = reachable_error_sequence(eng, seq);
    std::vector<char> all(sys.trans.size(), 1);
    auto full = error_constraint(eng, re, Mode::Full, all);
    auto single = error_constraint(eng, re, Mode::SinglePath, all);
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << sys.trans.size()); ++m) {
      std::vector<char> a(sys.trans.size());
      for (std::size_t i = 0; i < a.size(); ++i) a[i] = (m >> i) & 1;
      if (evaluate(full, a)) CHECK(evaluate(single, a));
    }
    CHECK_FALSE(evaluate(full, all));
  }
}
