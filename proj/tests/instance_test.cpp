#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "doctest.h"
#include "dimerlab/instance.hpp"

using namespace dimerlab;

TEST_CASE("weights are deterministic in (seed, index) and vary across both") {
  const LatticeGraph g = build_lattice(LatticeKind::Q, 8);
  const WeightedInstance a = sample_weights(g, 42, 7);
  const WeightedInstance b = sample_weights(g, 42, 7);
  CHECK(a.weights == b.weights);
  const WeightedInstance c = sample_weights(g, 42, 8);
  const WeightedInstance d = sample_weights(g, 43, 7);
  CHECK(a.weights != c.weights);
  CHECK(a.weights != d.weights);
}

TEST_CASE("weights are positive, finite and pairwise distinct") {
  const LatticeGraph g = build_lattice(LatticeKind::T, 8);
  for (std::uint64_t i = 0; i < 20; ++i) {
    const WeightedInstance inst = sample_weights(g, 9001, i);
    std::set<double> seen;
    for (double w : inst.weights) {
      CHECK(w > 0.0);
      CHECK(std::isfinite(w));
      CHECK(seen.insert(w).second);
    }
  }
}

TEST_CASE("pooled weights look like unit-rate exponentials") {
  const LatticeGraph g = build_lattice(LatticeKind::Q, 16);
  std::vector<double> all;
  for (std::uint64_t i = 0; i < 40; ++i) {
    const WeightedInstance inst = sample_weights(g, 1234, i);
    all.insert(all.end(), inst.weights.begin(), inst.weights.end());
  }
  const double n = static_cast<double>(all.size());
  double mean = 0.0;
  for (double w : all) mean += w;
  mean /= n;
  CHECK(std::abs(mean - 1.0) < 5.0 / std::sqrt(n));  // sd of Exp(1) is 1

  // Median of Exp(1) is ln 2; a binomial five-sigma band around one half.
  double above = 0.0;
  for (double w : all) above += w > std::log(2.0) ? 1.0 : 0.0;
  CHECK(std::abs(above / n - 0.5) < 2.5 / std::sqrt(n));
}

TEST_CASE("weight dumps round trip at full precision") {
  const LatticeGraph g = build_lattice(LatticeKind::H, 4);
  const WeightedInstance inst = sample_weights(g, 77, 0);
  std::ostringstream out;
  dump_weights(inst, out);
  std::istringstream in(out.str());
  int id = 0;
  double w = 0.0;
  int rows = 0;
  while (in >> id >> w) {
    CHECK(id == rows);
    CHECK(w == inst.weights[id]);
    ++rows;
  }
  CHECK(rows == g.num_edges());
}
