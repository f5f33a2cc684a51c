#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "dimerlab/lattice.hpp"

namespace dimerlab {

// A lattice plus one Exp(1) weight per edge. Weights are strictly positive
// and pairwise distinct, so the minimum-weight perfect matching is unique.
struct WeightedInstance {
  const LatticeGraph* graph = nullptr;
  std::vector<double> weights;
  std::uint64_t master_seed = 0;
  std::uint64_t instance_index = 0;

  const LatticeGraph& g() const { return *graph; }
  double weight(int e) const { return weights[e]; }
};

// Counter-based draws from a per-instance stream seeded by
// mix(master_seed, instance_index): bit-for-bit reproducible for the same
// inputs regardless of worker placement. Exact ties and exact zeros are
// redrawn from reserved counter ranges (the later edge id moves).
WeightedInstance sample_weights(const LatticeGraph& g, std::uint64_t master_seed,
                                std::uint64_t instance_index);

// Lines `edge_id weight`, 17 significant digits so text round-trips exactly.
void dump_weights(const WeightedInstance& inst, std::ostream& out);

}  // namespace dimerlab
