#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dimerlab/lattice.hpp"
#include "dimerlab/matching.hpp"

namespace dimerlab {

// One alternating cycle of the symmetric difference of two matchings.
// vertices[i] -> vertices[(i+1) % S] along edges[i]; edges alternate between
// the two source matchings with edges[0] from the first, and the traversal
// starts at the loop's smallest vertex id, so the decomposition is unique.
// positions are unwrapped: each step adds the true displacement rather than
// the wrapped one, so the end-to-start offset encodes the winding.
struct Loop {
  std::vector<std::int32_t> vertices;
  std::vector<std::int32_t> edges;
  std::vector<Vec2> positions;  // unwrapped, embedded coordinates
  std::vector<double> turning;  // turning[i]: exterior angle, edge i -> i+1
  int wx = 0, wy = 0;           // net periodic wraps

  int length() const { return static_cast<int>(edges.size()); }
};

struct WindingAngleStats {
  double theta_sq_raw = 0.0;     // (1/S) sum theta_j^2 with theta_0 = 0
  double theta_sq_gauged = 0.0;  // same after subtracting the series mean
  double theta_sum = 0.0;        // +-2pi for contractible loops, 0 for winding
};

// Decomposes the edges in exactly one of m1, m2 into vertex-disjoint
// alternating cycles. MalformedMatching if either input fails to cover every
// vertex exactly once or the difference is not 2-regular on its support.
std::vector<Loop> symmetric_difference(const Matching& m1, const Matching& m2,
                                       const LatticeGraph& g);

// Mean squared deviation of the unwrapped loop vertices from their centroid,
// which equals (1/(2S^2)) sum over ordered pairs of |r_i - r_j|^2.
double gyration_radius(const Loop& loop);

WindingAngleStats winding_angle_stats(const Loop& loop);

// Net wraps: unwrapped displacement after one circuit divided by the period.
std::pair<int, int> winding_numbers(const Loop& loop);

}  // namespace dimerlab
