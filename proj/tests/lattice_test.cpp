#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <tuple>

#include "doctest.h"
#include "dimerlab/lattice.hpp"

using namespace dimerlab;

TEST_CASE("edge and vertex counts for the three kinds") {
  const LatticeGraph q = build_lattice(LatticeKind::Q, 4);
  CHECK(q.num_vertices() == 16);
  CHECK(q.num_edges() == 32);
  CHECK(q.degree() == 4);
  CHECK(q.bipartite());

  const LatticeGraph h = build_lattice(LatticeKind::H, 4);
  CHECK(h.num_vertices() == 16);
  CHECK(h.num_edges() == 24);
  CHECK(h.degree() == 3);
  CHECK(h.bipartite());

  const LatticeGraph t = build_lattice(LatticeKind::T, 4);
  CHECK(t.num_vertices() == 16);
  CHECK(t.num_edges() == 48);
  CHECK(t.degree() == 6);
  CHECK_FALSE(t.bipartite());
}

TEST_CASE("odd or tiny extents are rejected") {
  CHECK_THROWS_AS(build_lattice(LatticeKind::Q, 3), Error);
  CHECK_THROWS_AS(build_lattice(LatticeKind::Q, 0), Error);
  CHECK_THROWS_AS(build_lattice(LatticeKind::H, -2), Error);
}

TEST_CASE("structural validation passes for all kinds and sizes") {
  for (LatticeKind kind : {LatticeKind::H, LatticeKind::Q, LatticeKind::T}) {
    for (int L : {2, 4, 6, 10}) {
      const LatticeGraph g = build_lattice(kind, L);
      const auto issues = validate_lattice(g);
      CAPTURE(kind_char(kind));
      CAPTURE(L);
      CHECK(issues.empty());
    }
  }
}

TEST_CASE("L=2 keeps parallel edges distinct by displacement") {
  const LatticeGraph q = build_lattice(LatticeKind::Q, 2);
  CHECK(q.num_edges() == 8);  // each +x/+y neighbor appears twice
  std::set<std::tuple<int, int, int, int>> seen;
  for (const LatticeEdge& e : q.edges()) {
    CHECK(seen.insert({e.u, e.v, e.dx, e.dy}).second);
    CHECK(e.u < e.v);
  }
}

TEST_CASE("vertex ids wrap around the torus") {
  const LatticeGraph g = build_lattice(LatticeKind::Q, 6);
  CHECK(g.vertex_id(-1, 0) == g.vertex_id(5, 0));
  CHECK(g.vertex_id(0, -2) == g.vertex_id(0, 4));
  CHECK(g.vertex_id(6, 6) == 0);
  CHECK(g.vertex_coords(g.vertex_id(4, 3)) == std::pair<int, int>{4, 3});
}

TEST_CASE("every edge embeds at unit length") {
  for (LatticeKind kind : {LatticeKind::H, LatticeKind::Q, LatticeKind::T}) {
    const LatticeGraph g = build_lattice(kind, 6);
    for (int e = 0; e < g.num_edges(); ++e)
      CHECK(std::abs(norm(g.edge_unit_vector(e)) - 1.0) < 1e-12);
  }
}

TEST_CASE("edge sets are translation invariant") {
  for (LatticeKind kind : {LatticeKind::H, LatticeKind::Q, LatticeKind::T}) {
    const LatticeGraph g = build_lattice(kind, 4);
    std::set<std::tuple<int, int, int, int>> canon;
    for (const LatticeEdge& e : g.edges())
      canon.insert({e.u, e.v, e.dx, e.dy});
    // Shift by the lattice's own periods in both directions. H is a
    // brick-wall pattern whose translation cell is 2 in each direction.
    const int step = kind == LatticeKind::H ? 2 : 1;
    for (const LatticeEdge& e : g.edges()) {
      auto [ux, uy] = g.vertex_coords(e.u);
      for (auto [sx, sy] : {std::pair{step, 0}, std::pair{0, step}}) {
        int nu = g.vertex_id(ux + sx, uy + sy);
        int nv = g.vertex_id(ux + e.dx + sx, uy + e.dy + sy);
        int dx = e.dx, dy = e.dy;
        if (nu > nv) {
          std::swap(nu, nv);
          dx = -dx;
          dy = -dy;
        }
        CAPTURE(kind_char(kind));
        CHECK(canon.count({nu, nv, dx, dy}) == 1);
      }
    }
  }
}

TEST_CASE("bipartite kinds only connect opposite parities") {
  for (LatticeKind kind : {LatticeKind::H, LatticeKind::Q}) {
    const LatticeGraph g = build_lattice(kind, 6);
    for (const LatticeEdge& e : g.edges())
      CHECK(g.parity(e.u) != g.parity(e.v));
  }
  const LatticeGraph t = build_lattice(LatticeKind::T, 6);
  CHECK(t.parity(0) == -1);
}

TEST_CASE("incident edge lists cover each edge twice") {
  for (LatticeKind kind : {LatticeKind::H, LatticeKind::Q, LatticeKind::T}) {
    const LatticeGraph g = build_lattice(kind, 4);
    std::vector<int> touch(g.num_edges(), 0);
    for (int v = 0; v < g.num_vertices(); ++v) {
      CHECK(static_cast<int>(g.incident_edges(v).size()) == g.degree());
      for (std::int32_t e : g.incident_edges(v)) {
        ++touch[e];
        const LatticeEdge& ed = g.edge(e);
        CHECK((ed.u == v || ed.v == v));
      }
    }
    for (int c : touch) CHECK(c == 2);
  }
}

TEST_CASE("edge list export has the documented shape") {
  const LatticeGraph g = build_lattice(LatticeKind::Q, 4);
  std::ostringstream out;
  export_edge_list(g, out);
  std::istringstream in(out.str());
  std::string kind;
  int L = 0, nv = 0, ne = 0;
  in >> kind >> L >> nv >> ne;
  CHECK(kind == "Q");
  CHECK(L == 4);
  CHECK(nv == 16);
  CHECK(ne == 32);
  int lines = 0;
  int id, u, v;
  double dx, dy;
  while (in >> id >> u >> v >> dx >> dy) {
    CHECK(id == lines);
    CHECK(std::abs(std::hypot(dx, dy) - 1.0) < 1e-12);
    ++lines;
  }
  CHECK(lines == 32);
}

TEST_CASE("kind tags round trip") {
  for (LatticeKind kind : {LatticeKind::H, LatticeKind::Q, LatticeKind::T})
    CHECK(kind_from_char(kind_char(kind)) == kind);
  CHECK_THROWS_AS(kind_from_char('x'), Error);
}
