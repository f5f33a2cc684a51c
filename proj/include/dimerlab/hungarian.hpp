#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace dimerlab {

// Minimum-weight perfect matching on a bipartite graph: one shortest
// augmenting path per left vertex over Johnson-reduced costs (Dijkstra),
// potentials updated with the min(dist, dist_to_target) cap. Independent of
// the blossom solver by construction, so the two cross-validate each other.
//
// `side` assigns each vertex to partition 0 or 1; every edge must join the
// two partitions (NotBipartite otherwise). Returns matched edge indices
// sorted ascending; throws NoPerfectMatching when the sides differ in size
// or some vertex cannot be reached.
std::vector<std::int32_t> hungarian_min_weight_perfect(
    int num_vertices,
    std::span<const std::pair<std::int32_t, std::int32_t>> endpoints,
    std::span<const std::int64_t> weights, std::span<const std::int8_t> side);

}  // namespace dimerlab
