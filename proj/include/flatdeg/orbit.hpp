#pragma once

#include <optional>
#include <string>
#include <vector>

#include "flatdeg/permsurf.hpp"

namespace flatdeg {

// S(h, v) = (v, h^-1) is the quarter turn [[0,1],[-1,0]];
// T(h, v) = (h, v o h^-1) is the shear [[1,1],[0,1]]; Tinv undoes T on the nose.
enum class Move { S, T, Tinv };
char to_char(Move m);  // 'S', 'T', 't'

// An origami, optionally with the half-translation involution of a pillow
// cover's double cover. With an involution the surface may be disconnected
// as long as <h, v, i> is transitive.
struct OrbitPoint {
  Origami surface;
  std::optional<Perm> involution;

  int size() const { return surface.size(); }
  std::string to_string() const;
  friend bool operator==(const OrbitPoint&, const OrbitPoint&) = default;
};

OrbitPoint from_double_cover(const DoubleCover& dc);

Origami apply_generator(const Origami& o, Move m);
// Also transports the involution: under T the square labelled s is the sheared
// square sharing its bottom edge with old s, so i' = h o i (T) or h^-1 o i (Tinv).
OrbitPoint apply_generator(const OrbitPoint& p, Move m);

struct CanonicalForm {
  OrbitPoint point;
  // point == input relabelled by `relabel` (old label x becomes relabel[x]).
  Perm relabel;
};

// Lexicographically least labelling among greedy BFS labellings from every
// start square.
CanonicalForm canonical_form(const OrbitPoint& p);
OrbitPoint relabel(const OrbitPoint& p, const Perm& labels);

struct OrbitEdge {
  int from = 0;
  Move move = Move::S;
  int to = 0;
  // Maps the squares of move(vertices[from]) onto those of vertices[to].
  Perm relabel;
};

struct OrbitGraph {
  std::vector<OrbitPoint> vertices;  // canonical forms, vertices[base] is the seed's
  std::vector<OrbitEdge> edges;      // edges[3 * v + move]
  int base = 0;

  int size() const { return static_cast<int>(vertices.size()); }
  const OrbitEdge& edge(int v, Move m) const { return edges[static_cast<std::size_t>(3 * v + static_cast<int>(m))]; }
  int find(const OrbitPoint& canonical) const;  // -1 if absent
};

// Breadth-first closure under S, T, Tinv. Throws ResourceError past `cap`
// vertices.
OrbitGraph enumerate_orbit(const OrbitPoint& seed, int cap = 10000);
OrbitGraph enumerate_orbit(const Origami& seed, int cap = 10000);

// One vertex per line ("v i; d; h; v[; iota]") in sorted order, then the S
// and T edges ("e i S j"), renumbered by that order.
std::string dump(const OrbitGraph& g);

}  // namespace flatdeg
