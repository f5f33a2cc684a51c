#include "dimerlab/hungarian.hpp"

#include <algorithm>
#include <limits>
#include <queue>

#include "dimerlab/errors.hpp"

namespace dimerlab {

namespace {
constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
}

std::vector<std::int32_t> hungarian_min_weight_perfect(
    int num_vertices,
    std::span<const std::pair<std::int32_t, std::int32_t>> endpoints,
    std::span<const std::int64_t> weights, std::span<const std::int8_t> side) {
  const int n = num_vertices;
  const int m = static_cast<int>(endpoints.size());
  if (static_cast<int>(side.size()) != n)
    throw Error("hungarian: side array size mismatch");

  int left_count = 0;
  for (int v = 0; v < n; ++v) left_count += side[v] == 0;
  if (2 * left_count != n)
    throw NoPerfectMatching("bipartition sides differ in size");

  // Orient every edge left -> right; shift weights so reduced costs start
  // non-negative with zero potentials.
  std::vector<std::int32_t> from(m), to(m);
  std::int64_t wmin = 0;
  for (int k = 0; k < m; ++k) {
    auto [a, b] = endpoints[k];
    if (side[a] == side[b])
      throw NotBipartite("edge " + std::to_string(k) +
                         " joins two vertices on the same side");
    from[k] = side[a] == 0 ? a : b;
    to[k] = side[a] == 0 ? b : a;
    wmin = std::min(wmin, weights[k]);
  }
  std::vector<std::int64_t> w(m);
  for (int k = 0; k < m; ++k) w[k] = weights[k] - wmin;

  std::vector<std::int32_t> adj_off(n + 1, 0), adj;
  for (int k = 0; k < m; ++k) ++adj_off[from[k] + 1];
  for (int v = 0; v < n; ++v) adj_off[v + 1] += adj_off[v];
  adj.resize(m);
  {
    std::vector<std::int32_t> cur(adj_off.begin(), adj_off.end() - 1);
    for (int k = 0; k < m; ++k) adj[cur[from[k]]++] = k;
  }

  std::vector<std::int32_t> match(n, -1);  // matched edge id per vertex
  std::vector<std::int64_t> pot(n, 0), dist(n);
  std::vector<std::int32_t> parent(n);  // edge that set dist
  std::vector<std::int8_t> done(n);
  using HeapItem = std::pair<std::int64_t, std::int32_t>;
  std::priority_queue<HeapItem, std::vector<HeapItem>, std::greater<>> heap;

  for (int s = 0; s < n; ++s) {
    if (side[s] != 0) continue;
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(parent.begin(), parent.end(), -1);
    std::fill(done.begin(), done.end(), 0);
    heap = {};
    dist[s] = 0;
    heap.emplace(0, s);

    int target = -1;
    std::int64_t target_dist = kInf;
    while (!heap.empty()) {
      auto [d, v] = heap.top();
      heap.pop();
      if (done[v]) continue;
      done[v] = 1;
      if (side[v] == 1) {
        if (match[v] == -1) {
          target = v;
          target_dist = d;
          break;
        }
        // Reverse (matched) arc: tight by the potential invariant.
        const int e = match[v];
        const int l = from[e];
        if (d < dist[l]) {
          dist[l] = d;
          parent[l] = e;
          heap.emplace(d, l);
        }
      } else {
        for (std::int32_t idx = adj_off[v]; idx < adj_off[v + 1]; ++idx) {
          const int e = adj[idx];
          if (e == match[v]) continue;
          const int r = to[e];
          const std::int64_t nd = d + (w[e] + pot[v] - pot[r]);
          if (nd < dist[r]) {
            dist[r] = nd;
            parent[r] = e;
            heap.emplace(nd, r);
          }
        }
      }
    }
    if (target == -1)
      throw NoPerfectMatching("no augmenting path from vertex " +
                              std::to_string(s));

    for (int v = 0; v < n; ++v)
      pot[v] += std::min(dist[v], target_dist);

    for (int r = target;;) {
      const int e = parent[r];
      const int l = from[e];
      const int prev = match[l];
      match[l] = e;
      match[r] = e;
      if (prev == -1) break;
      r = to[prev];
    }
  }

  std::vector<std::int32_t> out;
  out.reserve(n / 2);
  for (int v = 0; v < n; ++v)
    if (side[v] == 0) out.push_back(match[v]);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace dimerlab
