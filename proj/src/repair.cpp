#include "prepair/repair.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "prepair/deadlock.hpp"

namespace prepair {

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::Full: return "full";
    case Mode::SinglePath: return "single";
    case Mode::Naive: return "naive";
  }
  return "?";
}

const char* verdict_name(RepairOutcome::Verdict v) {
  switch (v) {
    case RepairOutcome::Verdict::Repaired: return "Repaired";
    case RepairOutcome::Verdict::Unrealizable: return "Unrealizable";
    case RepairOutcome::Verdict::IterationLimit: return "IterationLimit";
  }
  return "?";
}

std::vector<std::vector<Config>> reachable_error_sequence(const Engine& eng, const ErrorSequence& seq) {
  if (seq.safe || seq.sets.empty()) return {};
  const std::size_t k = seq.sets.size() - 1;
  std::vector<std::vector<Config>> re{seq.sets[k]};
  for (std::size_t i = k; i-- > 0;) {
    std::vector<Config> next;
    for (auto& s : eng.succ_set(re.back()))
      if (covered_by(seq.sets[i], s, seq.order)) next.push_back(std::move(s));
    if (next.empty()) throw contract_error("reachable error sequence broke off");
    re.push_back(std::move(next));
  }
  return re;
}

static std::vector<Step> first_path(const Engine& eng, const std::vector<std::vector<Config>>& re) {
  std::vector<Step> path;
  Config cur = re[0].front();
  for (std::size_t i = 1; i < re.size(); ++i) {
    bool moved = false;
    for (const auto& st : eng.successors(cur)) {
      if (std::binary_search(re[i].begin(), re[i].end(), st.to)) {
        path.push_back(st);
        cur = st.to;
        moved = true;
        break;
      }
    }
    if (!moved) throw contract_error("no step through the reachable error sequence");
  }
  return path;
}

Constraint error_constraint(const Engine& eng, const std::vector<std::vector<Config>>& re, Mode mode,
                            const std::vector<char>& candidate) {
  if (mode == Mode::Naive) return block_assignment(candidate);
  if (re.size() <= 1) return c_false();  // an initial state is already an error
  if (mode == Mode::SinglePath) return path_constr(first_path(eng, re));
  std::vector<std::vector<Config>> rest(re.begin() + 1, re.end());
  ConstraintBuilder b(eng, rest);
  std::vector<Constraint> conj;
  for (const auto& s : re[0]) conj.push_back(b.build(s));
  return c_and(std::move(conj));
}

namespace {

struct DeadlockFinding {
  Constraint c;
  std::vector<std::vector<Config>> seq;
  Path path;
  std::vector<std::string> notes;
};

System plain(const System& sys) {
  System b = sys;
  b.product.reset();
  return b;
}

// concrete deadlock search for n = 1..confirm_n
std::optional<DeadlockFinding> bounded_round(const System& full, const System& candidate, const RepairOptions& opts) {
  Engine eng(candidate);
  for (int n = 1; n <= opts.confirm_n; ++n) {
    auto path = find_deadlock_path(eng, eng.initial_config(n));
    if (!path) continue;
    DeadlockFinding f;
    f.path = *path;
    f.c = deadlock_constr(*path, Engine(full));
    f.notes.push_back("deadlock found with " + std::to_string(n) + " B processes");
    return f;
  }
  return std::nullopt;
}

std::optional<DeadlockFinding> deadlock_round(const System& sys, const std::vector<char>& cand, const RepairOptions& opts,
                                              std::vector<std::string>& warnings) {
  const System full = plain(sys);
  const System candidate = restrict_system(full, cand);
  if (sys.kind == SystemKind::Broadcast) throw unsupported_error("deadlock checking is not available for broadcast systems");
  const std::string bound = std::to_string(opts.confirm_n);
  // the symbolic check needs a system without self-guarded B transitions
  const System target = sys.kind == SystemKind::Disjunctive ? candidate : pr_overapprox(candidate);
  if (auto bad = check_self_guard_assumption(target); !bad.empty()) {
    auto f = bounded_round(full, candidate, opts);
    if (!f) {
      std::string w = "self-guarded transitions (";
      for (std::size_t i = 0; i < bad.size(); ++i) w += (i ? " " : "") + target.trans[bad[i]].id;
      warnings.push_back(w + "), deadlock freedom only checked for n <= " + bound);
    }
    return f;
  }
  Engine teng(target);
  auto res = detect_deadlock(teng);
  if (res.seq.capped) warnings.push_back("deadlock search stopped at the 2^|B| cap");
  if (!res.deadlock) return std::nullopt;
  if (sys.kind == SystemKind::Disjunctive) {
    auto path = find_deadlock_path(teng, res.seq.sets.back().front());
    if (!path) {
      warnings.push_back("deadlock reported but no concrete run found; candidate accepted");
      return std::nullopt;
    }
    DeadlockFinding f;
    f.seq = res.seq.sets;
    f.path = *path;
    f.c = deadlock_constr(*path, Engine(full));
    return f;
  }
  // rendezvous: the overapproximation is one-sided, confirm concretely
  auto f = bounded_round(full, candidate, opts);
  if (f) {
    f->seq = res.seq.sets;
    return f;
  }
  warnings.push_back("overapproximation reports a deadlock that does not occur for n <= " + bound + "; candidate accepted");
  return std::nullopt;
}

}  // namespace

RepairOutcome repair(const System& sys, const UpSet& err, const Constraint& init, const RepairOptions& opts) {
  RepairOutcome out;
  if (opts.deadlock_check && sys.kind == SystemKind::Broadcast)
    throw unsupported_error("deadlock checking is not available for broadcast systems");
  const std::size_t nd = sys.trans.size();
  const std::size_t bound = nd >= 62 ? SIZE_MAX : (std::size_t{1} << nd);
  const std::size_t max_iter = opts.max_iter ? opts.max_iter : std::min<std::size_t>(bound, 100000);

  int solves = 0;
  auto solve_all = [&]() -> std::optional<std::vector<char>> {
    std::vector<Constraint> parts{init};
    parts.insert(parts.end(), out.accumulated.begin(), out.accumulated.end());
    auto cnf = to_cnf(parts, sys);
    ++solves;
    if (!opts.emit_dimacs_dir.empty()) {
      std::filesystem::create_directories(opts.emit_dimacs_dir);
      std::ofstream f(std::filesystem::path(opts.emit_dimacs_dir) / ("round_" + std::to_string(solves) + ".cnf"));
      f << export_dimacs(cnf);
    }
    return solve(cnf, opts.pref);
  };

  auto cand = solve_all();
  while (cand) {
    if (static_cast<std::size_t>(out.iterations) >= max_iter) {
      out.verdict = RepairOutcome::Verdict::IterationLimit;
      out.keep = *cand;
      return out;
    }
    ++out.iterations;
    IterationRecord rec;
    rec.iteration = out.iterations;
    rec.candidate = *cand;
    Engine eng(restrict_system(sys, *cand));
    auto seq = model_check(eng, err);
    rec.sequence = seq.sets;
    Constraint added;
    if (!seq.safe) {
      rec.kind = "error";
      rec.re = reachable_error_sequence(eng, seq);
      added = error_constraint(eng, rec.re, opts.mode, *cand);
    } else if (opts.deadlock_check) {
      std::vector<std::string> w;
      auto dl = deadlock_round(sys, *cand, opts, w);
      for (auto& s : w) {
        rec.notes.push_back(s);
        out.warnings.push_back("iteration " + std::to_string(rec.iteration) + ": " + s);
      }
      if (dl) {
        rec.kind = "deadlock";
        rec.sequence = dl->seq;
        rec.re.clear();
        for (const auto& c : dl->path.states) rec.re.push_back({c});
        rec.notes.insert(rec.notes.end(), dl->notes.begin(), dl->notes.end());
        added = opts.mode == Mode::Naive ? block_assignment(*cand) : dl->c;
      }
    }
    if (!added) {
      rec.kind = "safe";
      out.history.push_back(std::move(rec));
      out.verdict = RepairOutcome::Verdict::Repaired;
      out.keep = *cand;
      return out;
    }
    rec.added = added;
    rec.excludes_candidate = !evaluate(added, *cand);
    out.accumulated.push_back(added);
    out.history.push_back(std::move(rec));
    cand = solve_all();
  }
  out.verdict = RepairOutcome::Verdict::Unrealizable;
  return out;
}

SafeSize max_safe_size(const System& sys, const UpSet& err) {
  Engine eng(sys);
  auto seq = model_check(eng, err, false);
  SafeSize r;
  const int k = sys.product ? sys.product->k : 0;
  for (const auto& e : seq.visited) {
    if (!eng.covers_initial(e)) continue;
    int m = eng.initial_witness(e).total() + k;
    if (r.safe_for_all || m - 1 < r.bound) r.bound = m - 1;
    r.safe_for_all = false;
  }
  return r;
}

}  // namespace prepair
