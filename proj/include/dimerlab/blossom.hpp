#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace dimerlab {

// Maximum-weight matching on a general graph: Edmonds' blossom algorithm in
// the multi-tree dual form (simultaneous alternating trees from every free
// vertex, labels S/T, nested blossoms with dual variables). Integer weights
// only; every dual and slack stays integral, and each solve is checked
// against the complementary-slackness certificate before returning.
//
// Returns mate[v] = matched partner vertex, or -1 if v stays single.
// Self-loops and parallel edges are rejected; collapse parallels first.
std::vector<std::int32_t> max_weight_matching(
    int num_vertices,
    std::span<const std::pair<std::int32_t, std::int32_t>> endpoints,
    std::span<const std::int64_t> weights, bool max_cardinality);

// Minimum-weight perfect matching via the standard reduction: run the
// max-cardinality max-weight search on W_k = 2*(C - w_k), C = max(w) + 1.
// Doubling keeps the transformed weights even so half-integral duals never
// appear. Returns indices into `endpoints`, sorted ascending; throws
// NoPerfectMatching when some vertex stays single.
std::vector<std::int32_t> blossom_min_weight_perfect(
    int num_vertices,
    std::span<const std::pair<std::int32_t, std::int32_t>> endpoints,
    std::span<const std::int64_t> weights);

}  // namespace dimerlab
