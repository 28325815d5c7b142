#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "flatdeg/perm.hpp"

namespace flatdeg {

enum class StratumKind { abelian, quadratic };

// Orders of the cone points of a flat surface. Quadratic orders are >= -1,
// abelian orders >= 0; a 0 is a marked regular point and is kept.
struct Stratum {
  StratumKind kind = StratumKind::abelian;
  std::vector<int> orders;  // nonincreasing
  int genus = 0;

  int pole_count() const;
  // Orders with the marked points (0's) removed.
  std::vector<int> without_marked() const;
  // e.g. "Q(3^3, -1^5)" or "H(2)"; marked points shown as 0.
  std::string label(bool with_marked = true) const;

  friend bool operator==(const Stratum&, const Stratum&) = default;
};

// Builds a stratum from orders, deriving the genus from the degree and
// checking the Gauss-Bonnet relation.
Stratum make_stratum(StratumKind kind, std::vector<int> orders);

// Square-tiled translation surface on d unit squares. h maps a square to its
// right neighbour, v to its top neighbour. Connectivity is not enforced here
// (orientation covers of global squares are disconnected); operations that
// need it check.
class Origami {
 public:
  Origami(Perm h, Perm v);
  static Origami parse(std::string_view line);  // "d; h; v"

  int size() const { return h_.size(); }
  const Perm& h() const { return h_; }
  const Perm& v() const { return v_; }

  // c = v^-1 * h^-1 * v * h: the cycle of c through s is the set of squares
  // sharing the lower-left corner of s.
  Perm vertex_perm() const;
  // Vertex id (c-cycle index) of the lower-left corner of every square.
  std::vector<int> vertex_of_square() const;
  bool is_connected() const;
  std::string to_string() const;

  friend bool operator==(const Origami&, const Origami&) = default;

 private:
  Perm h_, v_;
};

// Degree-d cover of the pillowcase, given by its monodromy around the four
// poles of the base differential, g0 * g1 * g2 * g3 == id. Corners are g0 =
// bottom-left, g1 = bottom-right, g2 = top-right, g3 = top-left of the front
// face; loops are counterclockwise as seen from the front.
class PillowCover {
 public:
  explicit PillowCover(std::array<Perm, 4> g);
  static PillowCover parse(std::string_view line);  // "d; g0; g1; g2; g3"

  int degree() const { return g_[0].size(); }
  const std::array<Perm, 4>& monodromy() const { return g_; }
  const Perm& corner(int i) const { return g_[static_cast<std::size_t>(i)]; }
  std::string to_string() const;

 private:
  std::array<Perm, 4> g_;
};

Stratum origami_stratum(const Origami& o);
Stratum pillow_stratum(const PillowCover& p);

// Fibre product of a pillow cover with the 2x2 torus covering the
// pillowcase. Squares are 4*x + q for sheet x and torus square q in
// {0: (0,0), 1: (1,0), 2: (0,1), 3: (1,1)}. The involution is the lift of
// z -> -z; it satisfies i h i = h^-1 and i v i = v^-1 and fixes no square.
struct DoubleCover {
  Origami surface;
  Perm involution;
  // False iff the pulled back differential is a global square; the surface
  // is then two copies of X exchanged by the involution.
  bool connected = true;
};

DoubleCover orientation_double_cover(const PillowCover& p);

// Quadratic stratum of (surface / involution), read off the involution's
// action on vertices. Inverse of orientation_double_cover on strata.
Stratum quotient_stratum(const Origami& surface, const Perm& involution);

// Checks i h i = h^-1, i v i = v^-1, i^2 = id, no fixed square.
bool is_half_translation_involution(const Origami& surface, const Perm& involution);

}  // namespace flatdeg
