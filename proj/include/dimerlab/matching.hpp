#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "dimerlab/instance.hpp"

namespace dimerlab {

struct Matching {
  std::vector<std::int32_t> edge_ids;  // ascending
  double cost = 0.0;            // sum of original weights, ascending id order
  double penalized_cost = 0.0;  // objective actually minimized (diagnostics)
};

struct BruteForceResult {
  Matching best;
  std::uint64_t num_perfect_matchings = 0;
};

// All solvers share the same front end: `forbidden` edges are removed,
// `penalties` (same length as weights, finite, >= 0) are added to the
// objective only, parallel edges collapse to their cheapest representative,
// and weights are fixed to integers at scale 2^40 so optimality is exact.
// Reported cost always comes from the original weights. The returned
// matching is structurally re-checked to cover every vertex exactly once.
//
// Plain-graph overloads exist because the oracles must run on hand-built
// test graphs, not just lattices.

Matching min_weight_perfect_matching(
    int num_vertices,
    std::span<const std::pair<std::int32_t, std::int32_t>> endpoints,
    std::span<const double> weights,
    std::span<const std::int32_t> forbidden = {},
    std::span<const double> penalties = {});

Matching min_weight_perfect_matching(const WeightedInstance& inst,
                                     std::span<const std::int32_t> forbidden = {},
                                     std::span<const double> penalties = {});

// Independent bipartite solver (shortest augmenting paths); the bipartition
// is recovered by 2-coloring and NotBipartite is thrown on an odd cycle.
Matching min_weight_perfect_matching_bipartite(
    int num_vertices,
    std::span<const std::pair<std::int32_t, std::int32_t>> endpoints,
    std::span<const double> weights,
    std::span<const std::int32_t> forbidden = {},
    std::span<const double> penalties = {});

Matching min_weight_perfect_matching_bipartite(
    const WeightedInstance& inst, std::span<const std::int32_t> forbidden = {},
    std::span<const double> penalties = {});

// Exhaustive oracle, <= 20 vertices (TooLarge above): enumerates every
// perfect matching by always extending the lowest uncovered vertex, returns
// the optimum and the total count. Ties in integerized cost resolve to the
// lexicographically smallest edge set.
BruteForceResult brute_force_matching(
    int num_vertices,
    std::span<const std::pair<std::int32_t, std::int32_t>> endpoints,
    std::span<const double> weights,
    std::span<const std::int32_t> forbidden = {});

BruteForceResult brute_force_matching(const WeightedInstance& inst,
                                      std::span<const std::int32_t> forbidden = {});

// `cost <decimal>` line, then one edge id per line, ascending.
void dump_matching(const Matching& m, std::ostream& out);

}  // namespace dimerlab
