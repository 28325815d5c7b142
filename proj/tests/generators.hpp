#pragma once

// Random surfaces for property tests.

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "flatdeg/permsurf.hpp"

namespace flatdeg::testing {

inline Perm random_perm(int n, std::mt19937_64& rng) {
  std::vector<int> img(static_cast<std::size_t>(n));
  std::iota(img.begin(), img.end(), 0);
  std::shuffle(img.begin(), img.end(), rng);
  return Perm(std::move(img));
}

inline Origami random_origami(int d, std::mt19937_64& rng) {
  for (;;) {
    Origami o(random_perm(d, rng), random_perm(d, rng));
    if (o.is_connected()) return o;
  }
}

inline PillowCover random_pillow(int d, std::mt19937_64& rng) {
  for (;;) {
    Perm g0 = random_perm(d, rng), g1 = random_perm(d, rng), g2 = random_perm(d, rng);
    Perm g3 = (g0 * g1 * g2).inverse();
    std::array<Perm, 4> g{g0, g1, g2, g3};
    if (is_transitive(d, g)) return PillowCover(g);
  }
}

// Independent vertex count: union-find over the four corner slots of every
// square (0 = lower-left, 1 = lower-right, 2 = upper-left, 3 = upper-right).
inline int count_vertices_by_corners(const Origami& o) {
  const int d = o.size();
  std::vector<int> parent(static_cast<std::size_t>(4 * d));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    return x;
  };
  auto unite = [&](int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); };
  for (int s = 0; s < d; ++s) {
    unite(4 * s + 1, 4 * o.h()[s] + 0);
    unite(4 * s + 3, 4 * o.h()[s] + 2);
    unite(4 * s + 2, 4 * o.v()[s] + 0);
    unite(4 * s + 3, 4 * o.v()[s] + 1);
  }
  int roots = 0;
  for (int x = 0; x < 4 * d; ++x) roots += find(x) == x;
  return roots;
}

}  // namespace flatdeg::testing
