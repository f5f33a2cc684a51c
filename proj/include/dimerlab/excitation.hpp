#pragma once

#include <cstdint>
#include <vector>

#include "dimerlab/instance.hpp"
#include "dimerlab/matching.hpp"
#include "dimerlab/rng.hpp"

namespace dimerlab {

// Removing a ground edge and re-solving: the excited optimum differs from the
// ground state along one alternating cycle through the removed edge.
struct LinkExcitationResult {
  std::int32_t removed_edge = -1;
  Matching ground;
  Matching excited;
  double delta_e = 0.0;  // excited cost minus ground cost, original weights
};

struct EpsilonExcitationResult {
  double epsilon = 0.0;
  Matching ground;
  Matching excited;
  double delta_e = 0.0;
  double overlap = 1.0;   // |excited ∩ ground| / |ground|
  double distance = 0.0;  // 1 - overlap
};

// Forbids the unique maximum-weight ground edge and re-solves. `ground` must
// be the optimum of `inst`.
LinkExcitationResult max_weight_excite(const WeightedInstance& inst,
                                       const Matching& ground);

// Same, for a uniformly chosen ground edge drawn from `stream`.
LinkExcitationResult random_link_excite(const WeightedInstance& inst,
                                        const Matching& ground,
                                        rng::CounterRng& stream);

// Adds the penalty epsilon to every ground edge and re-solves the penalized
// objective; delta_e still reports the original-weight difference. Because
// the penalty integerizes to one fixed increment per ground edge, overlap is
// non-increasing and the penalized optimum exact for every epsilon.
EpsilonExcitationResult epsilon_excite(const WeightedInstance& inst,
                                       const Matching& ground, double epsilon);

// 24 geometrically spaced values from 0.01 to 0.9, denser toward zero.
std::vector<double> default_epsilon_grid();

}  // namespace dimerlab
