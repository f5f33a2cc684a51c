#include "dimerlab/matching.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "dimerlab/blossom.hpp"
#include "dimerlab/hungarian.hpp"

namespace dimerlab {

namespace {

// 2^40: Exp(1) weights plus penalties stay far below 2^22, so integerized
// values fit in 2^62 with room for the solver's doubling and dual sums.
constexpr double kWeightScale = 1099511627776.0;
constexpr double kMaxEffectiveWeight = 4.0e6;

struct ReducedGraph {
  std::vector<std::pair<std::int32_t, std::int32_t>> ends;  // u < v, sorted
  std::vector<std::int64_t> w_int;
  std::vector<std::int32_t> orig;  // original edge id per reduced edge
};

// Applies forbidding and penalties, integerizes, drops self-loops, and
// collapses parallel edges keeping the cheapest (ties to the lower id).
ReducedGraph reduce_graph(
    int num_vertices,
    std::span<const std::pair<std::int32_t, std::int32_t>> endpoints,
    std::span<const double> weights, std::span<const std::int32_t> forbidden,
    std::span<const double> penalties) {
  const int m = static_cast<int>(endpoints.size());
  if (static_cast<int>(weights.size()) != m)
    throw Error("matching: endpoint/weight size mismatch");
  if (!penalties.empty() && static_cast<int>(penalties.size()) != m)
    throw Error("matching: penalty array size mismatch");

  std::vector<char> banned(m, 0);
  for (std::int32_t e : forbidden) {
    if (e < 0 || e >= m)
      throw Error("matching: forbidden edge id " + std::to_string(e) +
                  " out of range");
    banned[e] = 1;
  }

  struct Row {
    std::int32_t u, v;
    std::int64_t w;
    std::int32_t orig;
  };
  std::vector<Row> rows;
  rows.reserve(m);
  for (int k = 0; k < m; ++k) {
    if (banned[k]) continue;
    auto [a, b] = endpoints[k];
    if (a < 0 || a >= num_vertices || b < 0 || b >= num_vertices)
      throw Error("matching: edge " + std::to_string(k) + " endpoint out of range");
    if (a == b) continue;  // self-loops can never be matched
    if (!std::isfinite(weights[k]))
      throw NonFiniteWeight("weight of edge " + std::to_string(k) +
                            " is not finite");
    if (std::abs(weights[k]) > kMaxEffectiveWeight)
      throw TooLarge("weight of edge " + std::to_string(k) +
                     " exceeds the integerization range");
    // Weight and penalty are integerized separately: a penalty that is a
    // constant real then contributes a constant integer per penalized edge,
    // which makes exchange arguments across penalty values exact.
    std::int64_t wi = std::llround(weights[k] * kWeightScale);
    if (!penalties.empty()) {
      if (!(penalties[k] >= 0.0))
        throw Error("matching: negative or NaN penalty on edge " +
                    std::to_string(k));
      if (!std::isfinite(penalties[k]) ||
          penalties[k] > kMaxEffectiveWeight)
        throw NonFiniteWeight("penalty of edge " + std::to_string(k) +
                              " is not finite or too large");
      wi += std::llround(penalties[k] * kWeightScale);
    }
    rows.push_back({std::min(a, b), std::max(a, b), wi, k});
  }

  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.u != b.u) return a.u < b.u;
    if (a.v != b.v) return a.v < b.v;
    if (a.w != b.w) return a.w < b.w;
    return a.orig < b.orig;
  });

  ReducedGraph g;
  for (const Row& r : rows) {
    if (!g.ends.empty() && g.ends.back() == std::pair(r.u, r.v)) continue;
    g.ends.emplace_back(r.u, r.v);
    g.w_int.push_back(r.w);
    g.orig.push_back(r.orig);
  }
  return g;
}

Matching finish(int num_vertices, std::span<const double> weights,
                std::span<const double> penalties,
                const ReducedGraph& g,
                const std::vector<std::int32_t>& reduced_ids) {
  Matching m;
  m.edge_ids.reserve(reduced_ids.size());
  for (std::int32_t r : reduced_ids) m.edge_ids.push_back(g.orig[r]);
  std::sort(m.edge_ids.begin(), m.edge_ids.end());

  std::vector<std::int8_t> cover(num_vertices, 0);
  for (std::int32_t r : reduced_ids) {
    ++cover[g.ends[r].first];
    ++cover[g.ends[r].second];
  }
  for (int v = 0; v < num_vertices; ++v)
    if (cover[v] != 1)
      throw Error("matching: internal error, vertex " + std::to_string(v) +
                  " covered " + std::to_string(cover[v]) + " times");

  for (std::int32_t e : m.edge_ids) {
    m.cost += weights[e];
    m.penalized_cost += weights[e] + (penalties.empty() ? 0.0 : penalties[e]);
  }
  return m;
}

}  // namespace

Matching min_weight_perfect_matching(
    int num_vertices,
    std::span<const std::pair<std::int32_t, std::int32_t>> endpoints,
    std::span<const double> weights, std::span<const std::int32_t> forbidden,
    std::span<const double> penalties) {
  const ReducedGraph g =
      reduce_graph(num_vertices, endpoints, weights, forbidden, penalties);
  const auto ids = blossom_min_weight_perfect(num_vertices, g.ends, g.w_int);
  return finish(num_vertices, weights, penalties, g, ids);
}

Matching min_weight_perfect_matching_bipartite(
    int num_vertices,
    std::span<const std::pair<std::int32_t, std::int32_t>> endpoints,
    std::span<const double> weights, std::span<const std::int32_t> forbidden,
    std::span<const double> penalties) {
  const ReducedGraph g =
      reduce_graph(num_vertices, endpoints, weights, forbidden, penalties);

  // 2-color by BFS, component by component; an odd cycle means no coloring.
  std::vector<std::vector<std::int32_t>> adj(num_vertices);
  for (std::size_t k = 0; k < g.ends.size(); ++k) {
    adj[g.ends[k].first].push_back(g.ends[k].second);
    adj[g.ends[k].second].push_back(g.ends[k].first);
  }
  std::vector<std::int8_t> side(num_vertices, -1);
  std::vector<std::int32_t> bfs;
  for (int root = 0; root < num_vertices; ++root) {
    if (side[root] != -1) continue;
    side[root] = 0;
    bfs.assign(1, root);
    for (std::size_t head = 0; head < bfs.size(); ++head) {
      const int v = bfs[head];
      for (int w : adj[v]) {
        if (side[w] == -1) {
          side[w] = static_cast<std::int8_t>(1 - side[v]);
          bfs.push_back(w);
        } else if (side[w] == side[v]) {
          throw NotBipartite("graph contains an odd cycle");
        }
      }
    }
  }

  const auto ids =
      hungarian_min_weight_perfect(num_vertices, g.ends, g.w_int, side);
  return finish(num_vertices, weights, penalties, g, ids);
}

BruteForceResult brute_force_matching(
    int num_vertices,
    std::span<const std::pair<std::int32_t, std::int32_t>> endpoints,
    std::span<const double> weights,
    std::span<const std::int32_t> forbidden) {
  if (num_vertices > 20)
    throw TooLarge("brute-force oracle is capped at 20 vertices, got " +
                   std::to_string(num_vertices));
  const ReducedGraph g =
      reduce_graph(num_vertices, endpoints, weights, forbidden, {});

  std::vector<std::vector<std::int32_t>> adj(num_vertices);
  for (std::size_t k = 0; k < g.ends.size(); ++k) {
    adj[g.ends[k].first].push_back(static_cast<std::int32_t>(k));
    adj[g.ends[k].second].push_back(static_cast<std::int32_t>(k));
  }

  const std::uint32_t full = num_vertices == 0
                                 ? 0u
                                 : (num_vertices == 32
                                        ? ~0u
                                        : (1u << num_vertices) - 1u);
  std::uint64_t count = 0;
  std::int64_t best_cost = std::numeric_limits<std::int64_t>::max();
  std::vector<std::int32_t> best, cur;

  // Always extend the lowest uncovered vertex: each perfect matching is
  // produced exactly once.
  auto rec = [&](auto&& self, std::uint32_t covered, std::int64_t cost) -> void {
    if (covered == full) {
      ++count;
      std::vector<std::int32_t> sorted_cur = cur;
      std::sort(sorted_cur.begin(), sorted_cur.end());
      if (cost < best_cost || (cost == best_cost && sorted_cur < best)) {
        best_cost = cost;
        best = std::move(sorted_cur);
      }
      return;
    }
    int v = 0;
    while (covered & (1u << v)) ++v;
    for (std::int32_t k : adj[v]) {
      const int w = g.ends[k].first == v ? g.ends[k].second : g.ends[k].first;
      if (covered & (1u << w)) continue;
      cur.push_back(k);
      self(self, covered | (1u << v) | (1u << w), cost + g.w_int[k]);
      cur.pop_back();
    }
  };
  if (num_vertices % 2 == 0) rec(rec, 0, 0);

  if (count == 0 && num_vertices > 0)
    throw NoPerfectMatching("brute force found no perfect matching");

  BruteForceResult result;
  result.num_perfect_matchings = count;
  result.best = finish(num_vertices, weights, {}, g, best);
  return result;
}

Matching min_weight_perfect_matching(const WeightedInstance& inst,
                                     std::span<const std::int32_t> forbidden,
                                     std::span<const double> penalties) {
  const auto& edges = inst.g().edges();
  std::vector<std::pair<std::int32_t, std::int32_t>> ends(edges.size());
  for (std::size_t k = 0; k < edges.size(); ++k)
    ends[k] = {edges[k].u, edges[k].v};
  return min_weight_perfect_matching(inst.g().num_vertices(), ends,
                                     inst.weights, forbidden, penalties);
}

Matching min_weight_perfect_matching_bipartite(
    const WeightedInstance& inst, std::span<const std::int32_t> forbidden,
    std::span<const double> penalties) {
  const auto& edges = inst.g().edges();
  std::vector<std::pair<std::int32_t, std::int32_t>> ends(edges.size());
  for (std::size_t k = 0; k < edges.size(); ++k)
    ends[k] = {edges[k].u, edges[k].v};
  return min_weight_perfect_matching_bipartite(inst.g().num_vertices(), ends,
                                               inst.weights, forbidden,
                                               penalties);
}

BruteForceResult brute_force_matching(const WeightedInstance& inst,
                                      std::span<const std::int32_t> forbidden) {
  const auto& edges = inst.g().edges();
  std::vector<std::pair<std::int32_t, std::int32_t>> ends(edges.size());
  for (std::size_t k = 0; k < edges.size(); ++k)
    ends[k] = {edges[k].u, edges[k].v};
  return brute_force_matching(inst.g().num_vertices(), ends, inst.weights,
                              forbidden);
}

void dump_matching(const Matching& m, std::ostream& out) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "cost %.17g\n", m.cost);
  out << buf;
  for (std::int32_t e : m.edge_ids) out << e << '\n';
}

}  // namespace dimerlab
