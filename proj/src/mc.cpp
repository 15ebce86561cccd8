#include "prepair/mc.hpp"

#include <algorithm>

namespace prepair {

ErrorSequence backward_search(const std::vector<Config>& err, const BackwardSpec& spec) {
  ErrorSequence seq;
  seq.order = spec.order;
  auto e0 = min_basis(err, spec.order).basis;
  auto hit = [&](const std::vector<Config>& layer) {
    std::vector<Config> inits;
    for (const auto& e : layer)
      if (spec.covers_initial(e)) inits.push_back(spec.witness(e));
    std::sort(inits.begin(), inits.end());
    inits.erase(std::unique(inits.begin(), inits.end()), inits.end());
    return inits;
  };
  seq.sets.push_back(e0);
  seq.visited = e0;
  if (auto inits = hit(e0); !inits.empty()) {
    seq.safe = false;
    if (spec.stop_at_initial) {
      seq.sets.back() = inits;
      return seq;
    }
  }
  std::vector<Config> frontier = e0;
  std::size_t iter = 0;
  while (!frontier.empty()) {
    if (spec.max_iterations && iter >= spec.max_iterations) {
      seq.capped = true;
      break;
    }
    ++iter;
    std::vector<Config> cand;
    for (const auto& r : frontier) {
      auto p = spec.pred(r);
      cand.insert(cand.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
    }
    auto layer = min_basis(std::move(cand), spec.order).basis;
    std::vector<Config> fresh;
    for (auto& p : layer)
      if (!covered_by(seq.visited, p, spec.order)) fresh.push_back(std::move(p));
    if (fresh.empty()) break;
    std::erase_if(seq.visited, [&](const Config& v) { return covered_by(fresh, v, spec.order); });
    seq.visited.insert(seq.visited.end(), fresh.begin(), fresh.end());
    std::sort(seq.visited.begin(), seq.visited.end());
    seq.sets.push_back(fresh);
    if (auto inits = hit(fresh); !inits.empty()) {
      seq.safe = false;
      if (spec.stop_at_initial) {
        seq.sets.back() = inits;
        return seq;
      }
    }
    frontier = std::move(fresh);
  }
  return seq;
}

OrderKind natural_order(const System& sys) { return sys.product ? OrderKind::Product : OrderKind::Cover; }

UpSet pred_basis(const Engine& eng, const UpSet& r) {
  if (r.order == OrderKind::CoverZero) throw contract_error("pred_basis needs Cover or Product order");
  std::vector<Config> cand;
  for (const auto& e : r.basis) {
    auto p = eng.pred_candidates(e);
    cand.insert(cand.end(), p.begin(), p.end());
  }
  return min_basis(std::move(cand), r.order);
}

UpSet pred_basis(const System& sys, const UpSet& r) { return pred_basis(Engine(sys), r); }

ErrorSequence model_check(const Engine& eng, const UpSet& err, bool stop_at_initial) {
  if (err.order == OrderKind::CoverZero) throw contract_error("model_check needs Cover or Product order");
  BackwardSpec spec;
  spec.order = err.order;
  spec.pred = [&](const Config& r) { return eng.pred_candidates(r); };
  spec.covers_initial = [&](const Config& e) { return eng.covers_initial(e); };
  spec.witness = [&](const Config& e) { return eng.initial_witness(e); };
  spec.stop_at_initial = stop_at_initial;
  return backward_search(err.basis, spec);
}

ErrorSequence model_check(const System& sys, const UpSet& err, bool stop_at_initial) {
  Engine eng(sys);
  return model_check(eng, err, stop_at_initial);
}

}  // namespace prepair
