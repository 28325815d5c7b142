#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "flatdeg/orbit.hpp"

namespace flatdeg {

using IntMatrix = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;
using IntVector = Eigen::Matrix<long long, Eigen::Dynamic, 1>;

// Integer 1-chains on the square complex of an origami with d squares:
// entries [0, d) are bottom edges b_s (pointing right), [d, 2d) left edges
// l_s (pointing up).
using Chain = IntVector;

// H_1 of the square complex. Basis cycles come from a tree-cotree
// decomposition: each leftover dual edge closes a dual cycle y_j through the
// dual spanning forest, and Z_j is y_j pushed down-left onto the edges
// (sigma_s to b_s, zeta_s to l_s), a homologous primal cycle.
struct HomologyBasis {
  Origami surface{Perm(1), Perm(1)};
  int squares = 0;
  int rank = 0;
  std::vector<Chain> cycles;   // Z_j
  IntMatrix J;                 // J(i, j) = Z_i . Z_j, antisymmetric and unimodular
  IntMatrix Jinv_T;            // (J^T)^-1

  // Coordinates c of a cycle z, z ~ sum c_j Z_j.
  IntVector coords(const Chain& z) const;
};

// Boundary of a chain, indexed by vertex (c-cycle) of `o`.
IntVector boundary(const Origami& o, const Chain& z);
// Algebraic intersection of a primal cycle with the dual cycle whose
// coefficients on sigma_s, zeta_s are y[s], y[d + s].
long long pairing(const Origami& o, const Chain& z, const Chain& y);
// (sum of b coefficients, sum of l coefficients).
std::array<long long, 2> holonomy(const Chain& z);

HomologyBasis homology_basis(const Origami& o);

// Chain-level maps. Moves send chains on `before` to chains on
// apply_generator(before, m) (same square labels).
Chain move_chain(const Origami& before, Move m, const Chain& z);
Chain involution_chain(const Origami& o, const Perm& involution, const Chain& z);
Chain relabel_chain(const Perm& labels, const Chain& z);

// 2x2 integer matrix of a move acting on holonomy vectors.
std::array<long long, 4> move_matrix(Move m);

// Matrix whose column j is the basis-`to` coordinates of f(Z_j), Z_j from `from`.
template <class F>
IntMatrix induced_matrix(const HomologyBasis& from, const HomologyBasis& to, F&& f) {
  IntMatrix M(to.rank, from.rank);
  for (int j = 0; j < from.rank; ++j) M.col(j) = to.coords(f(from.cycles[static_cast<std::size_t>(j)]));
  return M;
}

struct CocycleResult {
  IntMatrix M;
  OrbitPoint final_point;
  std::string word;
};

// Cocycle along a word (applied left to right), from the basis at p to the
// basis at the final surface.
CocycleResult induced_cocycle(const OrbitPoint& p, const std::vector<Move>& word);
CocycleResult induced_cocycle(const Origami& o, const std::vector<Move>& word);

// Matrix of the involution on the basis.
IntMatrix involution_matrix(const HomologyBasis& b, const Origami& o, const Perm& involution);

// Exact inverse of a unimodular integer matrix; throws InternalError otherwise.
IntMatrix unimodular_inverse(const IntMatrix& A);

}  // namespace flatdeg
