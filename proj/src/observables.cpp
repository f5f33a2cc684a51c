#include "dimerlab/observables.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "dimerlab/errors.hpp"

namespace dimerlab {

namespace {

void check_perfect(const Matching& m, const LatticeGraph& g,
                   const char* name) {
  std::vector<char> covered(static_cast<size_t>(g.num_vertices()), 0);
  for (std::int32_t id : m.edge_ids) {
    if (id < 0 || id >= g.num_edges())
      throw MalformedMatching(std::string(name) + ": edge id " +
                              std::to_string(id) + " out of range");
    const LatticeEdge& ed = g.edge(id);
    if (covered[ed.u] || covered[ed.v])
      throw MalformedMatching(std::string(name) +
                              ": vertex covered more than once");
    covered[ed.u] = 1;
    covered[ed.v] = 1;
  }
  for (int v = 0; v < g.num_vertices(); ++v)
    if (!covered[v])
      throw MalformedMatching(std::string(name) + ": vertex " +
                              std::to_string(v) + " uncovered");
}

// Displacement of edge e when traversed out of `from`, in lattice units.
// Parallel edges at L = 2 share endpoints but differ in stored displacement,
// so the sign flip keys on which endpoint we stand at, not on edge identity.
std::pair<int, int> step_out_of(const LatticeEdge& ed, int from) {
  if (from == ed.u) return {ed.dx, ed.dy};
  return {-ed.dx, -ed.dy};
}

int other_endpoint(const LatticeEdge& ed, int from) {
  return from == ed.u ? ed.v : ed.u;
}

}  // namespace

std::vector<Loop> symmetric_difference(const Matching& m1, const Matching& m2,
                                       const LatticeGraph& g) {
  check_perfect(m1, g, "first matching");
  check_perfect(m2, g, "second matching");

  // Edges in exactly one input; both id lists are ascending by contract.
  std::vector<std::int32_t> diff;
  std::vector<char> first(static_cast<size_t>(g.num_edges()), 0);
  {
    size_t i = 0, j = 0;
    while (i < m1.edge_ids.size() || j < m2.edge_ids.size()) {
      if (j == m2.edge_ids.size() ||
          (i < m1.edge_ids.size() && m1.edge_ids[i] < m2.edge_ids[j])) {
        first[m1.edge_ids[i]] = 1;
        diff.push_back(m1.edge_ids[i++]);
      } else if (i == m1.edge_ids.size() || m2.edge_ids[j] < m1.edge_ids[i]) {
        diff.push_back(m2.edge_ids[j++]);
      } else {
        ++i;
        ++j;  // shared edge, not part of any loop
      }
    }
  }

  // The difference is 2-regular on its support: each difference vertex holds
  // its m1 edge and its m2 edge, and those are distinct.
  std::vector<std::array<std::int32_t, 2>> at(
      static_cast<size_t>(g.num_vertices()), {-1, -1});
  for (std::int32_t id : diff) {
    const LatticeEdge& ed = g.edge(id);
    for (int v : {static_cast<int>(ed.u), static_cast<int>(ed.v)}) {
      if (at[v][0] < 0)
        at[v][0] = id;
      else if (at[v][1] < 0)
        at[v][1] = id;
      else
        throw MalformedMatching("difference vertex of degree > 2");
    }
  }
  for (std::int32_t id : diff) {
    const LatticeEdge& ed = g.edge(id);
    if (at[ed.u][1] < 0 || at[ed.v][1] < 0)
      throw MalformedMatching("difference vertex of odd degree");
  }

  const int L = g.extent();
  std::vector<char> used(static_cast<size_t>(g.num_edges()), 0);
  std::vector<Loop> loops;
  for (int start = 0; start < g.num_vertices(); ++start) {
    if (at[start][0] < 0 || used[at[start][0]]) continue;

    Loop loop;
    // Start at the smallest vertex id and leave along its smallest incident
    // difference edge. This pins the traversal by the cycle alone, so the
    // unwrapped geometry (which for winding loops depends on where the lift
    // window opens) cannot depend on the order of the two matchings.
    std::int32_t e = std::min(at[start][0], at[start][1]);
    int v = start;
    auto [x, y] = g.vertex_coords(start);
    std::vector<std::pair<int, int>> unwrapped;
    bool expect_first = static_cast<bool>(first[e]);
    do {
      if (static_cast<bool>(first[e]) != expect_first)
        throw MalformedMatching("difference cycle fails to alternate");
      expect_first = !expect_first;
      const LatticeEdge& ed = g.edge(e);
      loop.vertices.push_back(v);
      loop.edges.push_back(e);
      unwrapped.emplace_back(x, y);
      used[e] = 1;
      auto [sx, sy] = step_out_of(ed, v);
      x += sx;
      y += sy;
      v = other_endpoint(ed, v);
      e = at[v][0] == e ? at[v][1] : at[v][0];
    } while (v != start);

    const int S = loop.length();
    loop.wx = (x - unwrapped.front().first) / L;
    loop.wy = (y - unwrapped.front().second) / L;
    loop.positions.reserve(S);
    for (auto [ux, uy] : unwrapped)
      loop.positions.push_back(g.embed(ux, uy));

    loop.turning.resize(S);
    for (int i = 0; i < S; ++i) {
      auto [ax, ay] = step_out_of(g.edge(loop.edges[i]), loop.vertices[i]);
      int j = (i + 1) % S;
      auto [bx, by] = step_out_of(g.edge(loop.edges[j]), loop.vertices[j]);
      Vec2 a = g.embed(ax, ay);
      Vec2 b = g.embed(bx, by);
      loop.turning[i] = std::atan2(cross(a, b), dot(a, b));
    }
    loops.push_back(std::move(loop));
  }
  return loops;
}

double gyration_radius(const Loop& loop) {
  const size_t S = loop.positions.size();
  if (S == 0) return 0.0;
  Vec2 c{0.0, 0.0};
  for (const Vec2& p : loop.positions) c = c + p;
  c = (1.0 / static_cast<double>(S)) * c;
  double acc = 0.0;
  for (const Vec2& p : loop.positions) acc += dot(p - c, p - c);
  return acc / static_cast<double>(S);
}

WindingAngleStats winding_angle_stats(const Loop& loop) {
  const size_t S = loop.turning.size();
  WindingAngleStats out;
  if (S == 0) return out;
  // theta_j: heading after j steps relative to the start, theta_0 = 0. The
  // closing angle turning[S-1] only enters theta_sum.
  double theta = 0.0, sum_sq = 0.0, sum = 0.0;
  for (size_t j = 0; j < S; ++j) {
    sum_sq += theta * theta;
    sum += theta;
    theta += loop.turning[j];
  }
  out.theta_sum = theta;
  const double n = static_cast<double>(S);
  out.theta_sq_raw = sum_sq / n;
  const double mean = sum / n;
  out.theta_sq_gauged = sum_sq / n - mean * mean;
  return out;
}

std::pair<int, int> winding_numbers(const Loop& loop) {
  return {loop.wx, loop.wy};
}

}  // namespace dimerlab
