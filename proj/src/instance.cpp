#include "dimerlab/instance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "dimerlab/rng.hpp"

namespace dimerlab {

WeightedInstance sample_weights(const LatticeGraph& g, std::uint64_t master_seed,
                                std::uint64_t instance_index) {
  const int E = g.num_edges();
  const std::uint64_t stream_seed = rng::derive(master_seed, instance_index);
  rng::CounterRng gen(stream_seed);

  WeightedInstance inst;
  inst.graph = &g;
  inst.master_seed = master_seed;
  inst.instance_index = instance_index;
  inst.weights.resize(E);
  for (int e = 0; e < E; ++e)
    inst.weights[e] = -std::log(rng::unit_from_bits(gen.at(e)));

  // Exact ties or exact zeros (probability ~2^-53 each) are redrawn from the
  // counter block round*E + e; among tied edges the smallest id keeps its
  // draw. Deterministic because the redraw counter depends only on (round, e).
  std::vector<std::pair<double, int>> order(E);
  for (std::uint64_t round = 1;; ++round) {
    for (int e = 0; e < E; ++e) order[e] = {inst.weights[e], e};
    std::sort(order.begin(), order.end());
    std::vector<int> redraw;
    for (int i = 0; i < E; ++i) {
      if (order[i].first <= 0.0 && (i == 0 || order[i].first != order[i - 1].first))
        redraw.push_back(order[i].second);
      else if (i > 0 && order[i].first == order[i - 1].first)
        redraw.push_back(std::max(order[i].second, order[i - 1].second));
    }
    if (redraw.empty()) break;
    for (int e : redraw)
      inst.weights[e] =
          -std::log(rng::unit_from_bits(gen.at(round * E + e)));
  }
  return inst;
}

void dump_weights(const WeightedInstance& inst, std::ostream& out) {
  char buf[64];
  for (int e = 0; e < static_cast<int>(inst.weights.size()); ++e) {
    std::snprintf(buf, sizeof buf, "%d %.17g\n", e, inst.weights[e]);
    out << buf;
  }
}

}  // namespace dimerlab
