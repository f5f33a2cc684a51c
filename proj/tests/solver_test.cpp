#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "doctest.h"
#include "dimerlab/blossom.hpp"
#include "dimerlab/instance.hpp"
#include "dimerlab/matching.hpp"
#include "dimerlab/rng.hpp"

using namespace dimerlab;

namespace {

using Edge = std::pair<std::int32_t, std::int32_t>;

// Independent oracle for general max-weight matching (not necessarily
// perfect): exhaustive over edge subsets, maximizing weight, or cardinality
// then weight when max_cardinality is set. Small graphs only.
struct MaxOracle {
  double weight = 0.0;
  int cardinality = 0;
};

MaxOracle brute_max_matching(int n, const std::vector<Edge>& edges,
                             const std::vector<std::int64_t>& w,
                             bool max_cardinality) {
  MaxOracle best;
  const size_t m = edges.size();
  REQUIRE(m <= 20);
  for (std::uint64_t mask = 0; mask < (1ull << m); ++mask) {
    std::vector<char> used(n, 0);
    double weight = 0.0;
    int card = 0;
    bool ok = true;
    for (size_t k = 0; k < m && ok; ++k) {
      if (!(mask >> k & 1)) continue;
      auto [u, v] = edges[k];
      if (used[u] || used[v]) {
        ok = false;
      } else {
        used[u] = used[v] = 1;
        weight += static_cast<double>(w[k]);
        ++card;
      }
    }
    if (!ok) continue;
    const bool better =
        max_cardinality
            ? (card > best.cardinality ||
               (card == best.cardinality && weight > best.weight))
            : weight > best.weight;
    if (better) best = {weight, card};
  }
  return best;
}

void check_against_max_oracle(int n, const std::vector<Edge>& edges,
                              const std::vector<std::int64_t>& w,
                              bool max_cardinality) {
  const std::vector<std::int32_t> mate =
      max_weight_matching(n, edges, w, max_cardinality);
  REQUIRE(static_cast<int>(mate.size()) == n);
  double weight = 0.0;
  int card = 0;
  for (size_t k = 0; k < edges.size(); ++k) {
    auto [u, v] = edges[k];
    if (mate[u] == v && mate[v] == u) {
      weight += static_cast<double>(w[k]);
      ++card;
    }
  }
  for (int v = 0; v < n; ++v)
    if (mate[v] >= 0) CHECK(mate[mate[v]] == v);
  const MaxOracle oracle = brute_max_matching(n, edges, w, max_cardinality);
  CHECK(card == oracle.cardinality);
  CHECK(weight == doctest::Approx(oracle.weight).epsilon(1e-12));
}

}  // namespace

TEST_CASE("general matching prefers one heavy edge over a heavier pair") {
  // Path 0-1-2-3 with weights 5, 11, 5: the middle edge wins alone, but
  // maximum cardinality forces the two outer edges.
  const std::vector<Edge> edges = {{0, 1}, {1, 2}, {2, 3}};
  const std::vector<std::int64_t> w = {5, 11, 5};
  check_against_max_oracle(4, edges, w, false);
  check_against_max_oracle(4, edges, w, true);
}

TEST_CASE("crafted blossom-forcing graphs match the exhaustive oracle") {
  // These shapes force blossom creation, expansion, relabeling and nested
  // blossoms; the oracle recomputes each optimum from scratch.
  struct Case {
    std::vector<Edge> edges;
    std::vector<std::int64_t> w;
  };
  const std::vector<Case> cases = {
      // odd triangle plus a tail: augmenting through a blossom
      {{{0, 1}, {0, 2}, {1, 2}, {2, 3}}, {8, 9, 10, 7}},
      {{{0, 1}, {0, 2}, {1, 2}, {2, 3}, {0, 5}, {3, 4}}, {8, 9, 10, 7, 5, 6}},
      // S-blossom that must later relabel and expand
      {{{0, 1}, {0, 2}, {1, 2}, {0, 3}, {3, 4}, {0, 5}}, {9, 8, 10, 5, 4, 3}},
      {{{0, 1}, {0, 2}, {1, 2}, {0, 3}, {3, 4}, {2, 5}}, {9, 8, 10, 5, 3, 4}},
      // nested S-blossoms
      {{{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 4}, {3, 4}, {4, 5}},
       {9, 9, 10, 8, 8, 10, 6}},
      {{{0, 1}, {0, 6}, {1, 2}, {2, 3}, {2, 4}, {3, 4}, {4, 5}, {5, 6},
        {6, 7}},
       {10, 10, 12, 20, 20, 25, 10, 10, 8}},
      // expanding a blossom exposes negative-slack subtleties
      {{{0, 1}, {0, 4}, {1, 2}, {2, 3}, {3, 4}, {0, 5}, {2, 8}, {3, 7},
        {4, 6}, {8, 9}},
       {45, 45, 50, 45, 50, 30, 35, 35, 26, 5}},
      {{{0, 1}, {0, 4}, {1, 2}, {2, 3}, {3, 4}, {0, 5}, {2, 8}, {3, 7},
        {4, 6}, {8, 9}},
       {45, 45, 50, 45, 50, 30, 35, 28, 26, 5}},
      {{{0, 1}, {0, 6}, {1, 2}, {2, 3}, {3, 4}, {3, 5}, {4, 5}, {5, 6},
        {0, 7}, {2, 10}, {4, 8}, {6, 9}, {10, 11}},
       {45, 45, 50, 45, 95, 94, 94, 50, 30, 35, 36, 26, 5}},
  };
  for (size_t i = 0; i < cases.size(); ++i) {
    CAPTURE(i);
    int n = 0;
    for (auto [u, v] : cases[i].edges) n = std::max({n, u + 1, v + 1});
    check_against_max_oracle(n, cases[i].edges, cases[i].w, false);
    check_against_max_oracle(n, cases[i].edges, cases[i].w, true);
  }
}

TEST_CASE("negative weights only enter under forced cardinality") {
  const std::vector<Edge> edges = {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}};
  const std::vector<std::int64_t> w = {2, -2, 1, -1, -6};
  check_against_max_oracle(4, edges, w, false);
  check_against_max_oracle(4, edges, w, true);
}

TEST_CASE("random graphs: blossom equals the perfect-matching oracle") {
  rng::CounterRng gen(0xB10550);
  int matched_graphs = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const int n = 4 + 2 * static_cast<int>(gen.next_below(5));  // 4..12
    const double density = 0.3 + 0.3 * static_cast<double>(gen.next_below(3));
    const bool integral = gen.next_below(4) == 0;  // provoke cost ties
    std::vector<Edge> ends;
    std::vector<double> weights;
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) {
        if (gen.next_unit() > density) continue;
        ends.emplace_back(u, v);
        weights.push_back(integral
                              ? static_cast<double>(1 + gen.next_below(9))
                              : gen.next_exp1());
      }
    }
    bool oracle_has = true;
    BruteForceResult oracle;
    try {
      oracle = brute_force_matching(n, ends, weights);
    } catch (const NoPerfectMatching&) {
      oracle_has = false;
    }
    if (!oracle_has) {
      CHECK_THROWS_AS(min_weight_perfect_matching(n, ends, weights),
                      NoPerfectMatching);
      continue;
    }
    ++matched_graphs;
    const Matching got = min_weight_perfect_matching(n, ends, weights);
    if (integral) {
      // ties allowed: compare objective, not the edge set
      CHECK(got.cost == doctest::Approx(oracle.best.cost).epsilon(1e-12));
    } else {
      CHECK(got.edge_ids == oracle.best.edge_ids);
      CHECK(got.cost == doctest::Approx(oracle.best.cost).epsilon(1e-12));
    }
  }
  CHECK(matched_graphs > 100);  // the generator must actually exercise us
}

TEST_CASE("forbidden edges reroute the optimum") {
  rng::CounterRng gen(0xF0B1D);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 6;
    std::vector<Edge> ends;
    std::vector<double> weights;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) {
        ends.emplace_back(u, v);
        weights.push_back(gen.next_exp1());
      }
    const Matching base = min_weight_perfect_matching(n, ends, weights);
    const std::int32_t banned = base.edge_ids[gen.next_below(3)];
    const std::int32_t forbidden[] = {banned};
    const Matching re = min_weight_perfect_matching(n, ends, weights,
                                                    forbidden);
    const BruteForceResult oracle =
        brute_force_matching(n, ends, weights, forbidden);
    CHECK(re.edge_ids == oracle.best.edge_ids);
    CHECK(std::count(re.edge_ids.begin(), re.edge_ids.end(), banned) == 0);
    CHECK(re.cost >= base.cost);
  }
}

TEST_CASE("penalties shift the objective but not the reported cost") {
  rng::CounterRng gen(0x9E4A17);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 6;
    std::vector<Edge> ends;
    std::vector<double> weights;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) {
        ends.emplace_back(u, v);
        weights.push_back(gen.next_exp1());
      }
    std::vector<double> penalties(ends.size(), 0.0);
    for (double& p : penalties)
      if (gen.next_below(2) == 0) p = gen.next_unit();
    std::vector<double> shifted(weights);
    for (size_t k = 0; k < shifted.size(); ++k) shifted[k] += penalties[k];

    const Matching got =
        min_weight_perfect_matching(n, ends, weights, {}, penalties);
    const BruteForceResult oracle = brute_force_matching(n, ends, shifted);
    CHECK(got.edge_ids == oracle.best.edge_ids);
    double plain = 0.0;
    for (std::int32_t id : got.edge_ids) plain += weights[id];
    CHECK(got.cost == doctest::Approx(plain).epsilon(1e-12));
    CHECK(got.penalized_cost ==
          doctest::Approx(oracle.best.cost).epsilon(1e-12));
  }
}

TEST_CASE("bipartite solver agrees with blossom") {
  rng::CounterRng gen(0xB1AA7);
  int solved = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int half = 2 + static_cast<int>(gen.next_below(5));  // 2..6
    std::vector<Edge> ends;
    std::vector<double> weights;
    for (int u = 0; u < half; ++u)
      for (int v = 0; v < half; ++v)
        if (gen.next_unit() < 0.75) {
          ends.emplace_back(u, half + v);
          weights.push_back(gen.next_exp1());
        }
    bool has = true;
    Matching blossom;
    try {
      blossom = min_weight_perfect_matching(2 * half, ends, weights);
    } catch (const NoPerfectMatching&) {
      has = false;
    }
    if (!has) {
      CHECK_THROWS_AS(
          min_weight_perfect_matching_bipartite(2 * half, ends, weights),
          NoPerfectMatching);
      continue;
    }
    ++solved;
    const Matching hungarian =
        min_weight_perfect_matching_bipartite(2 * half, ends, weights);
    CHECK(hungarian.edge_ids == blossom.edge_ids);
  }
  CHECK(solved > 80);
}

TEST_CASE("bipartite solver rejects odd cycles") {
  const std::vector<Edge> tri = {{0, 1}, {1, 2}, {0, 2}};
  const std::vector<double> w = {1.0, 1.0, 1.0};
  CHECK_THROWS_AS(min_weight_perfect_matching_bipartite(3, tri, w),
                  NotBipartite);
}

TEST_CASE("unmatchable inputs throw instead of returning junk") {
  // odd vertex count
  CHECK_THROWS_AS(min_weight_perfect_matching(
                      3, std::vector<Edge>{{0, 1}}, std::vector<double>{1.0}),
                  NoPerfectMatching);
  // star: three leaves cannot all be matched
  const std::vector<Edge> star = {{0, 1}, {0, 2}, {0, 3}};
  const std::vector<double> w3 = {1.0, 1.0, 1.0};
  CHECK_THROWS_AS(min_weight_perfect_matching(4, star, w3),
                  NoPerfectMatching);
  CHECK_THROWS_AS(brute_force_matching(4, star, w3), NoPerfectMatching);
  // an isolated vertex
  CHECK_THROWS_AS(min_weight_perfect_matching(2, std::vector<Edge>{},
                                              std::vector<double>{}),
                  NoPerfectMatching);
  // the empty graph is vacuously matched
  const Matching empty = min_weight_perfect_matching(0, std::vector<Edge>{},
                                                     std::vector<double>{});
  CHECK(empty.edge_ids.empty());
  CHECK(empty.cost == 0.0);
}

TEST_CASE("lattice instances solve through the collapsing front end") {
  for (LatticeKind kind : {LatticeKind::H, LatticeKind::Q, LatticeKind::T}) {
    for (int L : {2, 4}) {
      const LatticeGraph g = build_lattice(kind, L);
      for (std::uint64_t i = 0; i < 10; ++i) {
        const WeightedInstance inst = sample_weights(g, 5150, i);
        const Matching got = min_weight_perfect_matching(inst);
        const BruteForceResult oracle = brute_force_matching(inst);
        CAPTURE(kind_char(kind));
        CAPTURE(L);
        CHECK(got.edge_ids == oracle.best.edge_ids);
        std::vector<char> covered(g.num_vertices(), 0);
        for (std::int32_t e : got.edge_ids) {
          covered[g.edge(e).u] = 1;
          covered[g.edge(e).v] = 1;
        }
        CHECK(std::count(covered.begin(), covered.end(), 0) == 0);
      }
    }
  }
}

TEST_CASE("counting matches hand results on tiny graphs") {
  // path P4: a unique perfect matching
  {
    const std::vector<Edge> path = {{0, 1}, {1, 2}, {2, 3}};
    const std::vector<double> w = {1.0, 2.0, 3.0};
    const BruteForceResult r = brute_force_matching(4, path, w);
    CHECK(r.num_perfect_matchings == 1);
    CHECK(r.best.edge_ids == std::vector<std::int32_t>{0, 2});
  }
  // 4-cycle: exactly two
  {
    const std::vector<Edge> cyc = {{0, 1}, {1, 2}, {2, 3}, {3, 0}};
    const std::vector<double> w = {1.0, 2.0, 3.0, 4.0};
    const BruteForceResult r = brute_force_matching(4, cyc, w);
    CHECK(r.num_perfect_matchings == 2);
    CHECK(r.best.edge_ids == std::vector<std::int32_t>{0, 2});
    CHECK(r.best.cost == 4.0);
  }
  // complete K4: three
  {
    std::vector<Edge> k4;
    std::vector<double> w;
    for (int u = 0; u < 4; ++u)
      for (int v = u + 1; v < 4; ++v) {
        k4.emplace_back(u, v);
        w.push_back(1.0 + u + 2 * v);
      }
    CHECK(brute_force_matching(4, k4, w).num_perfect_matchings == 3);
  }
}

TEST_CASE("oversized graphs are rejected by the exhaustive oracle") {
  std::vector<Edge> ends;
  std::vector<double> w;
  for (int u = 0; u < 22; u += 2) {
    ends.emplace_back(u, u + 1);
    w.push_back(1.0);
  }
  CHECK_THROWS_AS(brute_force_matching(22, ends, w), TooLarge);
}
