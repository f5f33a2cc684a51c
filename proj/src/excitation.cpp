#include "dimerlab/excitation.hpp"

#include <algorithm>
#include <cmath>

namespace dimerlab {

namespace {

LinkExcitationResult excite_without(const WeightedInstance& inst,
                                    const Matching& ground,
                                    std::int32_t removed) {
  LinkExcitationResult r;
  r.removed_edge = removed;
  r.ground = ground;
  const std::int32_t forbidden[] = {removed};
  r.excited = min_weight_perfect_matching(inst, forbidden);
  r.delta_e = r.excited.cost - r.ground.cost;
  return r;
}

}  // namespace

LinkExcitationResult max_weight_excite(const WeightedInstance& inst,
                                       const Matching& ground) {
  if (ground.edge_ids.empty()) throw Error("excitation: empty ground matching");
  std::int32_t best = ground.edge_ids.front();
  for (std::int32_t e : ground.edge_ids)
    if (inst.weight(e) > inst.weight(best)) best = e;
  return excite_without(inst, ground, best);
}

LinkExcitationResult random_link_excite(const WeightedInstance& inst,
                                        const Matching& ground,
                                        rng::CounterRng& stream) {
  if (ground.edge_ids.empty()) throw Error("excitation: empty ground matching");
  const auto pick = stream.next_below(ground.edge_ids.size());
  return excite_without(inst, ground, ground.edge_ids[pick]);
}

EpsilonExcitationResult epsilon_excite(const WeightedInstance& inst,
                                       const Matching& ground, double epsilon) {
  if (!std::isfinite(epsilon))
    throw NonFiniteWeight("epsilon is not finite");
  if (epsilon < 0.0) throw Error("epsilon must be non-negative");

  std::vector<double> penalties(inst.weights.size(), 0.0);
  for (std::int32_t e : ground.edge_ids) penalties[e] = epsilon;

  EpsilonExcitationResult r;
  r.epsilon = epsilon;
  r.ground = ground;
  r.excited = min_weight_perfect_matching(inst, {}, penalties);
  r.delta_e = r.excited.cost - r.ground.cost;

  // Both id lists are sorted, so the intersection is a single merge pass.
  std::size_t shared = 0, i = 0, j = 0;
  const auto& a = r.ground.edge_ids;
  const auto& b = r.excited.edge_ids;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j])
      ++i;
    else if (b[j] < a[i])
      ++j;
    else {
      ++shared;
      ++i;
      ++j;
    }
  }
  r.overlap = a.empty() ? 1.0 : static_cast<double>(shared) / a.size();
  r.distance = 1.0 - r.overlap;
  return r;
}

std::vector<double> default_epsilon_grid() {
  constexpr int kPoints = 24;
  constexpr double kLo = 0.01, kHi = 0.9;
  std::vector<double> grid(kPoints);
  for (int i = 0; i < kPoints; ++i)
    grid[i] = kLo * std::pow(kHi / kLo, static_cast<double>(i) / (kPoints - 1));
  grid.back() = kHi;
  return grid;
}

}  // namespace dimerlab
