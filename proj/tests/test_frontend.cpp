#include <doctest.h>

#include <map>
#include <string>

#include "prepair/corpus.hpp"
#include "prepair/frontend.hpp"

using namespace prepair;

namespace {
std::string disj(const std::string& b_transitions, const std::string& tail = "") {
  return R"({"kind": "disjunctive", "templates": [{"role": "B", "states": ["x", "y"], "init": "x", "transitions": [)" +
         b_transitions + "]}]" + tail + "}";
}

std::string error_of(const std::string& text) {
  try {
    parse_document(text);
  } catch (const input_error& e) {
    return e.what();
  }
  return "";
}
}  // namespace

TEST_CASE("validation") {
  const std::string ok = R"({"from": "x", "to": "y"}, {"from": "y", "to": "x"})";
  CHECK(error_of(disj(ok)).empty());
  CHECK(error_of(disj(R"({"from": "x", "to": "y"})")).find("no outgoing") != std::string::npos);
  CHECK(error_of(disj(R"({"from": "x", "to": "y", "guard": []}, {"from": "y", "to": "x"})")).find("empty guard") !=
        std::string::npos);
  CHECK(error_of(disj(R"({"id": "t", "from": "x", "to": "y"}, {"id": "t", "from": "y", "to": "x"})"))
            .find("duplicate") != std::string::npos);
  CHECK(error_of(disj(R"({"from": "x", "to": "z"}, {"from": "y", "to": "x"})")).find("not a state") !=
        std::string::npos);
  CHECK(error_of(disj(ok, R"(, "errors": [{"counts": {"q": 1}}])")).find("unknown B state") != std::string::npos);
  CHECK(error_of(disj(ok, R"(, "errors": [{"counts": {"x": -1}}])")).find("nonnegative") != std::string::npos);
  CHECK(error_of("{not json").size() > 0);
  // a null guard is the same as no guard
  auto doc = parse_document(disj(R"({"from": "x", "to": "y", "guard": null}, {"from": "y", "to": "x"})"));
  CHECK_FALSE(doc.sys.trans[0].guarded);
  CHECK(doc.sys.trans[0].id == "T0");
}

TEST_CASE("broadcast completion adds implicit receives") {
  const char* text = R"({"kind": "broadcast", "templates": [{"role": "B", "states": ["a", "b"], "init": "a",
    "transitions": [{"from": "a", "to": "b", "dir": "bsend", "action": "go"},
                    {"from": "b", "to": "a", "dir": "tau"},
                    {"from": "a", "to": "b", "dir": "brecv", "action": "go"}]}]})";
  auto doc = parse_document(text);
  int t = doc.sys.find("(b,go??,b)");
  REQUIRE(t >= 0);
  CHECK(doc.sys.trans[t].implicit);
  CHECK(doc.notes.size() == 1);
  CHECK(doc.original.trans.size() == 3);
}

TEST_CASE("one sender per action") {
  const char* text = R"({"kind": "rendezvous", "templates": [{"role": "B", "states": ["a", "b"], "init": "a",
    "transitions": [{"from": "a", "to": "b", "dir": "send", "action": "m"},
                    {"from": "b", "to": "a", "dir": "send", "action": "m"}]}]})";
  CHECK_THROWS_AS(parse_document(text), input_error);
}

TEST_CASE("emit and reparse") {
  for (const auto& e : corpus_files()) {
    auto doc = load_document(e.path);
    auto again = parse_document(emit_document(doc).dump(), e.name);
    REQUIRE(again.sys.trans.size() == doc.sys.trans.size());
    for (std::size_t i = 0; i < doc.sys.trans.size(); ++i) CHECK(again.sys.trans[i].id == doc.sys.trans[i].id);
    CHECK(again.err.basis == doc.err.basis);
    CHECK(again.init->key == doc.init->key);
  }
}

TEST_CASE("corpus sizes") {
  // states, actions, edges as written
  const std::map<std::string, std::tuple<int, int, int>> sizes{
      {"mesi", {4, 4, 26}},           {"mesi_complete", {4, 4, 26}},   {"smoke_detector", {6, 5, 39}},
      {"object_tracker", {12, 8, 128}}, {"robot_flocking", {10, 10, 147}}, {"lock_service", {10, 8, 95}},
  };
  int seen = 0;
  for (const auto& e : corpus_files()) {
    auto it = sizes.find(e.name);
    if (it == sizes.end()) continue;
    ++seen;
    auto doc = load_document(e.path);
    const auto& o = doc.original;
    CHECK(o.nb() + (o.has_a ? static_cast<int>(o.a.states.size()) : 0) == std::get<0>(it->second));
    CHECK(static_cast<int>(o.actions.size()) == std::get<1>(it->second));
    CHECK(static_cast<int>(o.trans.size()) == std::get<2>(it->second));
    CHECK(e.reconstructed);
  }
  CHECK(seen == 6);
}

TEST_CASE("reports") {
  auto doc = load_corpus("mesi");
  RepairOptions o;
  o.deadlock_check = false;
  auto out = repair(doc.sys, doc.err, doc.init, o);
  auto rep = repair_report(doc, out, o);
  CHECK(rep["verdict"] == "Repaired");
  REQUIRE(rep["removed"].size() == 1);
  CHECK(rep["removed"][0]["id"] == "(E,read??,E)");
  CHECK(rep["history"].size() == static_cast<std::size_t>(out.iterations));
  auto text = repair_summary(doc, out, true);
  CHECK(text.find("removed: (E,read??,E)") != std::string::npos);
}
