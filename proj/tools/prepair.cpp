#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "prepair/deadlock.hpp"
#include "prepair/frontend.hpp"
#include "prepair/oracle.hpp"
#include "prepair/repair.hpp"

using namespace prepair;
using nlohmann::json;

namespace {

// human-readable text goes to stderr when the JSON report takes stdout
std::ostream& human(const std::string& json_out) { return json_out == "-" ? std::cerr : std::cout; }

void write_json(const std::string& path, const json& j) {
  if (path.empty()) return;
  if (path == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error(path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cmd_check(const std::string& file, const std::string& json_out, bool safe_size) {
  auto doc = load_document(file);
  std::ostream& out = human(json_out);
  Engine eng(doc.sys);
  auto seq = model_check(eng, doc.err);
  out << "verdict: " << (seq.safe ? "Safe" : "Unsafe") << "\n";
  for (std::size_t i = 0; i < seq.sets.size(); ++i) {
    bool last = !seq.safe && i + 1 == seq.sets.size();
    out << "E_" << i << (last ? " (initial)" : "") << " = " << format_set(doc.sys, seq.sets[i]) << "\n";
  }
  json j{{"system", doc.name}, {"verdict", seq.safe ? "Safe" : "Unsafe"}, {"sequence", sequence_json(doc.sys, seq.sets)}};
  if (safe_size) {
    auto ss = max_safe_size(doc.sys, doc.err);
    if (ss.safe_for_all)
      out << "safe for every system size\n";
    else
      out << "safe up to " << ss.bound << " B process(es)\n";
    j["safe_for_all"] = ss.safe_for_all;
    if (!ss.safe_for_all) j["safe_up_to"] = ss.bound;
  }
  write_json(json_out, j);
  return seq.safe ? 0 : 1;
}

int cmd_deadlock(const std::string& file, const std::string& json_out, int confirm) {
  auto doc = load_document(file);
  std::ostream& out = human(json_out);
  System sys = doc.sys;
  sys.product.reset();
  json j{{"system", doc.name}};
  if (sys.kind == SystemKind::Broadcast) throw unsupported_error("deadlock detection is undecidable for broadcast systems");
  bool over = sys.kind == SystemKind::Rendezvous;
  System target = over ? pr_overapprox(sys) : sys;
  if (over) out << "using the disjunctive overapproximation (" << target.trans.size() << " transitions)\n";
  auto res = detect_deadlock(target);
  out << "verdict: " << (res.deadlock ? "Deadlock" : "NoDeadlock") << (res.seq.capped ? " (2^|B| cap reached)" : "")
            << "\n";
  for (std::size_t i = 0; i < res.seq.sets.size(); ++i)
    out << "D_" << i << " = " << format_set(target, res.seq.sets[i]) << "\n";
  j["verdict"] = res.deadlock ? "Deadlock" : "NoDeadlock";
  j["sequence"] = sequence_json(target, res.seq.sets);
  if (res.deadlock) {
    Engine eng(sys);
    std::optional<Path> run;
    if (!over) {
      run = find_deadlock_path(eng, res.seq.sets.back().front());
    } else {
      for (int n = 1; n <= confirm && !run; ++n) run = find_deadlock_path(eng, eng.initial_config(n));
    }
    if (run) {
      out << "run:";
      json jr = json::array();
      for (const auto& s : run->states) {
        out << " " << format_config(sys, s);
        jr.push_back(format_config(sys, s));
      }
      out << "\n";
      j["run"] = jr;
    } else if (over) {
      out << "no deadlock in the original system for n <= " << confirm << " (overapproximation only)\n";
      j["confirmed"] = false;
    }
  }
  write_json(json_out, j);
  return res.deadlock ? 1 : 0;
}

struct RepairArgs {
  std::string file, mode = "full", prefer, dimacs, json_out;
  bool no_deadlock = false, emit_constraints = false;
  std::size_t max_iter = 0;
  int cross_check = 0;
};

int cmd_repair(const RepairArgs& a) {
  auto doc = load_document(a.file);
  std::ostream& hout = human(a.json_out);
  RepairOptions opts;
  if (a.mode == "full")
    opts.mode = Mode::Full;
  else if (a.mode == "single")
    opts.mode = Mode::SinglePath;
  else if (a.mode == "naive")
    opts.mode = Mode::Naive;
  else
    throw input_error("unknown mode '" + a.mode + "'");
  opts.deadlock_check = !a.no_deadlock;
  if (doc.sys.kind == SystemKind::Broadcast && opts.deadlock_check) {
    std::cerr << "warning: deadlock checking is not available for broadcast systems; running without it\n";
    opts.deadlock_check = false;
  }
  opts.max_iter = a.max_iter;
  opts.emit_dimacs_dir = a.dimacs;
  if (!a.prefer.empty()) opts.pref = parse_preference(read_file(a.prefer), doc.sys);
  auto out = repair(doc.sys, doc.err, doc.init, opts);
  hout << repair_summary(doc, out, a.emit_constraints);
  json rep = repair_report(doc, out, opts);
  if (a.cross_check > 0 && out.verdict == RepairOutcome::Verdict::Repaired) {
    Engine eng(restrict_system(doc.sys, out.keep));
    json cc = json::array();
    bool ok = true;
    for (int n = 0; n <= a.cross_check; ++n) {
      bool hit = explicit_reach(eng, n, doc.err);
      ok = ok && !hit;
      cc.push_back({{"n", n}, {"error_reachable", hit}});
    }
    hout << "cross-check n <= " << a.cross_check << ": " << (ok ? "no error reachable" : "ERROR REACHABLE") << "\n";
    rep["cross_check"] = cc;
    if (!ok) {
      write_json(a.json_out, rep);
      return 4;
    }
  }
  write_json(a.json_out, rep);
  return out.verdict == RepairOutcome::Verdict::Repaired ? 0 : 1;
}

int cmd_simulate(const std::string& file, int n, int steps, unsigned seed) {
  auto doc = load_document(file);
  Engine eng(doc.sys);
  std::mt19937 rng(seed);
  Config s = eng.initial_config(n);
  std::cout << "0: " << format_config(doc.sys, s) << (upset_contains(doc.err, s) ? "  [error]" : "") << "\n";
  for (int i = 1; i <= steps; ++i) {
    auto next = eng.successors(s);
    if (next.empty()) {
      std::cout << "deadlocked\n";
      break;
    }
    const auto& st = next[std::uniform_int_distribution<std::size_t>(0, next.size() - 1)(rng)];
    std::string via;
    for (int t : st.parts) via += (via.empty() ? "" : "+") + doc.sys.trans[t].id;
    s = st.to;
    std::cout << i << ": " << format_config(doc.sys, s) << "  via " << via
              << (upset_contains(doc.err, s) ? "  [error]" : "") << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"parameterized repair of disjunctive, rendezvous and broadcast systems"};
  app.require_subcommand(1);

  std::string file, json_out;
  bool safe_size = false;
  auto* check = app.add_subcommand("check", "parameterized model check");
  check->add_option("file", file, "system description (JSON)")->required()->check(CLI::ExistingFile);
  check->add_option("--json", json_out, "write a JSON report ('-' for stdout)");
  check->add_flag("--max-safe-size", safe_size, "run to fixpoint and report the largest safe size");

  int confirm = 4;
  auto* dl = app.add_subcommand("deadlock", "parameterized deadlock detection");
  dl->add_option("file", file)->required()->check(CLI::ExistingFile);
  dl->add_option("--json", json_out);
  dl->add_option("--confirm", confirm, "bound for confirming overapproximated deadlocks");

  RepairArgs ra;
  auto* rp = app.add_subcommand("repair", "synthesize a safe restriction");
  rp->add_option("file", ra.file)->required()->check(CLI::ExistingFile);
  rp->add_option("--mode", ra.mode, "full | single | naive")->check(CLI::IsMember({"full", "single", "naive"}));
  rp->add_flag("--no-deadlock-check", ra.no_deadlock);
  rp->add_option("--max-iter", ra.max_iter);
  rp->add_option("--prefer", ra.prefer, "decision order file (ids, '-' prefix = prefer removal)")
      ->check(CLI::ExistingFile);
  rp->add_option("--emit-dimacs", ra.dimacs, "directory for the CNF of every SAT call");
  rp->add_flag("--emit-constraints", ra.emit_constraints);
  rp->add_option("--cross-check", ra.cross_check, "explicit-state check of the result for n <= N");
  rp->add_option("--json", ra.json_out);

  int n = 2, steps = 10;
  unsigned seed = 1;
  auto* sim = app.add_subcommand("simulate", "random bounded run (debugging aid)");
  sim->add_option("file", file)->required()->check(CLI::ExistingFile);
  sim->add_option("--n", n)->required();
  sim->add_option("--steps", steps)->required();
  sim->add_option("--seed", seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*check) return cmd_check(file, json_out, safe_size);
    if (*dl) return cmd_deadlock(file, json_out, confirm);
    if (*rp) return cmd_repair(ra);
    if (*sim) return cmd_simulate(file, n, steps, seed);
  } catch (const unsupported_error& e) {
    std::cerr << "unsupported: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
