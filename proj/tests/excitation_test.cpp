#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <vector>

#include "doctest.h"
#include "dimerlab/excitation.hpp"
#include "dimerlab/instance.hpp"
#include "dimerlab/lattice.hpp"
#include "dimerlab/matching.hpp"
#include "dimerlab/rng.hpp"

using namespace dimerlab;

namespace {

// The 2x2 square torus is a 4-cycle once each parallel pair collapses. The
// first edge seen for an unordered pair gets the prescribed cycle weight and
// any duplicate gets a deterrent one, so the cheap representative is known.
struct HandCycle {
  LatticeGraph g = build_lattice(LatticeKind::Q, 2);
  WeightedInstance inst;
  std::int32_t e01 = -1, e13 = -1, e23 = -1, e02 = -1;

  HandCycle() {
    inst.graph = &g;
    inst.weights.assign(g.num_edges(), 0.0);
    double deterrent = 100.0;
    for (std::int32_t k = 0; k < g.num_edges(); ++k) {
      const std::int32_t u = std::min(g.edge(k).u, g.edge(k).v);
      const std::int32_t v = std::max(g.edge(k).u, g.edge(k).v);
      std::int32_t* slot = nullptr;
      double w = 0.0;
      if (u == 0 && v == 1) slot = &e01, w = 1.0;
      if (u == 1 && v == 3) slot = &e13, w = 2.0;
      if (u == 2 && v == 3) slot = &e23, w = 3.0;
      if (u == 0 && v == 2) slot = &e02, w = 4.0;
      REQUIRE(slot != nullptr);
      if (*slot == -1) {
        *slot = k;
        inst.weights[k] = w;
      } else {
        inst.weights[k] = deterrent;
        deterrent += 1.0;
      }
    }
  }
};

}  // namespace

TEST_CASE("forbidding the heaviest ground edge flips a 4-cycle") {
  const HandCycle h;
  const Matching ground = min_weight_perfect_matching(h.inst);
  CHECK(ground.edge_ids == std::vector<std::int32_t>{
                               std::min(h.e01, h.e23), std::max(h.e01, h.e23)});
  CHECK(ground.cost == 4.0);

  const LinkExcitationResult r = max_weight_excite(h.inst, ground);
  CHECK(r.removed_edge == h.e23);  // weight 3 beats weight 1
  CHECK(r.excited.edge_ids == std::vector<std::int32_t>{
                                  std::min(h.e13, h.e02), std::max(h.e13, h.e02)});
  CHECK(r.excited.cost == 6.0);
  CHECK(r.delta_e == 2.0);
  CHECK(std::count(r.excited.edge_ids.begin(), r.excited.edge_ids.end(),
                   r.removed_edge) == 0);
}

TEST_CASE("epsilon coupling flips the 4-cycle exactly past the gap") {
  const HandCycle h;
  const Matching ground = min_weight_perfect_matching(h.inst);

  const EpsilonExcitationResult at0 = epsilon_excite(h.inst, ground, 0.0);
  CHECK(at0.excited.edge_ids == ground.edge_ids);
  CHECK(at0.delta_e == 0.0);
  CHECK(at0.overlap == 1.0);
  CHECK(at0.distance == 0.0);

  // the alternative pair costs 2 more; two penalized edges flip past eps = 1
  const EpsilonExcitationResult low = epsilon_excite(h.inst, ground, 0.5);
  CHECK(low.excited.edge_ids == ground.edge_ids);
  CHECK(low.overlap == 1.0);
  CHECK(low.delta_e == 0.0);

  const EpsilonExcitationResult high = epsilon_excite(h.inst, ground, 3.0);
  CHECK(high.excited.cost == 6.0);
  CHECK(high.delta_e == 2.0);
  CHECK(high.overlap == 0.0);
  CHECK(high.distance == 1.0);
}

TEST_CASE("epsilon rejects invalid couplings") {
  const HandCycle h;
  const Matching ground = min_weight_perfect_matching(h.inst);
  CHECK_THROWS_AS(epsilon_excite(h.inst, ground, -0.1), Error);
  CHECK_THROWS_AS(
      epsilon_excite(h.inst, ground, std::numeric_limits<double>::quiet_NaN()),
      NonFiniteWeight);
  CHECK_THROWS_AS(
      epsilon_excite(h.inst, ground, std::numeric_limits<double>::infinity()),
      NonFiniteWeight);
}

TEST_CASE("default epsilon grid is geometric from 0.01 to 0.9") {
  const std::vector<double> grid = default_epsilon_grid();
  REQUIRE(grid.size() == 24);
  CHECK(grid.front() == 0.01);
  CHECK(grid.back() == 0.9);
  const double ratio = grid[1] / grid[0];
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    CHECK(grid[i + 1] > grid[i]);
    CHECK(grid[i + 1] / grid[i] == doctest::Approx(ratio).epsilon(1e-12));
  }
}

TEST_CASE("link excitations cost strictly more than the ground state") {
  struct Stratum {
    LatticeKind kind;
    int L;
    int instances;
  };
  const std::vector<Stratum> strata = {{LatticeKind::Q, 8, 20},
                                       {LatticeKind::H, 8, 10},
                                       {LatticeKind::T, 6, 10}};
  for (const auto& [kind, L, instances] : strata) {
    const LatticeGraph g = build_lattice(kind, L);
    for (int i = 0; i < instances; ++i) {
      const WeightedInstance inst = sample_weights(g, 777, i);
      const Matching ground = min_weight_perfect_matching(inst);

      const LinkExcitationResult mx = max_weight_excite(inst, ground);
      std::int32_t argmax = ground.edge_ids.front();
      for (std::int32_t e : ground.edge_ids)
        if (inst.weight(e) > inst.weight(argmax)) argmax = e;
      CHECK(mx.removed_edge == argmax);
      CHECK(mx.delta_e > 0.0);
      CHECK(mx.excited.edge_ids != ground.edge_ids);
      CHECK(mx.excited.cost ==
            doctest::Approx(ground.cost + mx.delta_e).epsilon(1e-12));

      rng::CounterRng stream(rng::derive(777, 1000 + i));
      const LinkExcitationResult rl = random_link_excite(inst, ground, stream);
      CHECK(std::binary_search(ground.edge_ids.begin(), ground.edge_ids.end(),
                               rl.removed_edge));
      CHECK(rl.delta_e > 0.0);
      CHECK(std::count(rl.excited.edge_ids.begin(), rl.excited.edge_ids.end(),
                       rl.removed_edge) == 0);
    }
  }
}

TEST_CASE("random link choice is stream-deterministic but not constant") {
  const LatticeGraph g = build_lattice(LatticeKind::Q, 4);
  std::set<std::int32_t> seen;
  for (int i = 0; i < 12; ++i) {
    const WeightedInstance inst = sample_weights(g, 31337, i);
    const Matching ground = min_weight_perfect_matching(inst);
    rng::CounterRng s1(rng::derive(9, i)), s2(rng::derive(9, i));
    const LinkExcitationResult a = random_link_excite(inst, ground, s1);
    const LinkExcitationResult b = random_link_excite(inst, ground, s2);
    CHECK(a.removed_edge == b.removed_edge);
    CHECK(a.excited.edge_ids == b.excited.edge_ids);
    // position of the removed edge within the sorted ground set
    const auto it = std::find(ground.edge_ids.begin(), ground.edge_ids.end(),
                              a.removed_edge);
    seen.insert(static_cast<std::int32_t>(it - ground.edge_ids.begin()));
  }
  CHECK(seen.size() > 1);
}

TEST_CASE("overlap falls and energy rises along the epsilon grid") {
  const LatticeGraph g = build_lattice(LatticeKind::Q, 6);
  const std::vector<double> grid = default_epsilon_grid();
  for (int i = 0; i < 8; ++i) {
    const WeightedInstance inst = sample_weights(g, 4242, i);
    const Matching ground = min_weight_perfect_matching(inst);
    double prev_overlap = 1.0 + 1e-15;
    double prev_de = -1.0;
    for (double eps : grid) {
      const EpsilonExcitationResult r = epsilon_excite(inst, ground, eps);
      CHECK(r.overlap <= prev_overlap);
      CHECK(r.delta_e >= prev_de - 1e-9);
      CHECK(r.delta_e >= 0.0);
      CHECK(r.distance == 1.0 - r.overlap);
      prev_overlap = r.overlap;
      prev_de = std::max(prev_de, r.delta_e);
    }
  }
}

TEST_CASE("epsilon optimum equals brute force on shifted weights") {
  const LatticeGraph g = build_lattice(LatticeKind::Q, 4);
  for (int i = 0; i < 5; ++i) {
    const WeightedInstance inst = sample_weights(g, 90210, i);
    const Matching ground = min_weight_perfect_matching(inst);
    for (double eps : {0.05, 0.3, 0.7}) {
      const EpsilonExcitationResult r = epsilon_excite(inst, ground, eps);

      WeightedInstance shifted = inst;
      for (std::int32_t e : ground.edge_ids) shifted.weights[e] += eps;
      const BruteForceResult oracle = brute_force_matching(shifted);

      CHECK(r.excited.edge_ids == oracle.best.edge_ids);
      CHECK(r.excited.penalized_cost ==
            doctest::Approx(oracle.best.cost).epsilon(1e-9));
      double original = 0.0;
      for (std::int32_t e : r.excited.edge_ids) original += inst.weights[e];
      CHECK(r.excited.cost == doctest::Approx(original).epsilon(1e-12));
      CHECK(r.delta_e ==
            doctest::Approx(original - ground.cost).epsilon(1e-9));
    }
  }
}
