#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "dimerlab/errors.hpp"

namespace dimerlab {

// H and Q are bipartite; T is monopartite.
enum class LatticeKind : std::uint8_t { H, Q, T };

char kind_char(LatticeKind k);
LatticeKind kind_from_char(char c);
bool kind_is_bipartite(LatticeKind k);

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::sqrt(dot(a, a)); }

// Displacements are stored in integer lattice units, measured from u with
// periodic wrap. The embedding maps lattice units to the plane; every edge
// has unit Euclidean length there.
struct LatticeEdge {
  std::int32_t u = -1;
  std::int32_t v = -1;
  std::int8_t dx = 0;
  std::int8_t dy = 0;
};

// L x L torus lattice. Vertex (x, y) has id y*L + x. Immutable after
// construction; edge ids follow the canonical (u, v, dx, dy) sort order.
class LatticeGraph {
 public:
  LatticeGraph(LatticeKind kind, int L, std::vector<LatticeEdge> edges);

  LatticeKind kind() const { return kind_; }
  int extent() const { return L_; }
  int num_vertices() const { return L_ * L_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  bool bipartite() const { return kind_is_bipartite(kind_); }
  int degree() const;

  int vertex_id(int x, int y) const;  // coordinates taken mod L
  std::pair<int, int> vertex_coords(int v) const { return {v % L_, v / L_}; }
  // 0/1 on bipartite lattices, -1 on T.
  int parity(int v) const;

  const std::vector<LatticeEdge>& edges() const { return edges_; }
  const LatticeEdge& edge(int e) const { return edges_[e]; }
  std::span<const std::int32_t> incident_edges(int v) const;

  // Lattice-unit coordinates -> plane. Periods a_x = embed(1,0), a_y = embed(0,1).
  Vec2 embed(double x, double y) const;
  Vec2 vertex_position(int v) const;
  Vec2 edge_unit_vector(int e) const;  // embedded displacement u -> v, unit length
  Vec2 period_x() const { return embed(L_, 0); }
  Vec2 period_y() const { return embed(0, L_); }

 private:
  LatticeKind kind_;
  int L_;
  std::vector<LatticeEdge> edges_;
  std::vector<std::int32_t> incident_offsets_;
  std::vector<std::int32_t> incident_ids_;
};

// Throws Error for odd L or L < 2. Deterministic: identical inputs give
// identical vertex and edge ids.
LatticeGraph build_lattice(LatticeKind kind, int L);

// Empty iff all structural invariants hold; each entry names the violated
// invariant and the offending element.
std::vector<std::string> validate_lattice(const LatticeGraph& g);

// Header `kind L num_vertices num_edges`, then `edge_id u v dx dy` per line
// with the embedded unit displacement.
void export_edge_list(const LatticeGraph& g, std::ostream& out);

}  // namespace dimerlab
