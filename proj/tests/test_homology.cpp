#include <Eigen/LU>
#include <random>

#include "doctest.h"
#include "flatdeg/coverings.hpp"
#include "flatdeg/homology.hpp"
#include "generators.hpp"

using namespace flatdeg;

namespace {

std::vector<Move> random_word(std::mt19937_64& rng, int len) {
  std::vector<Move> w;
  for (int i = 0; i < len; ++i) w.push_back(static_cast<Move>(rng() % 3));
  return w;
}

Chain square_boundary(const Origami& o, int s) {
  int d = o.size();
  Chain z = Chain::Zero(2 * d);
  z(s) += 1;
  z(d + o.h()[s]) += 1;
  z(o.v()[s]) -= 1;
  z(d + s) -= 1;
  return z;
}

}  // namespace

TEST_CASE("torus homology") {
  Origami t(Perm(1), Perm(1));
  auto b = homology_basis(t);
  REQUIRE(b.rank == 2);
  CHECK(b.J(0, 1) == -b.J(1, 0));
  CHECK(std::abs(b.J(0, 1)) == 1);
  CHECK(b.J(0, 0) == 0);

  // The class of the bottom edge has holonomy (1, 0); with the left edge it
  // meets once.
  Chain bottom = Chain::Zero(2), left = Chain::Zero(2);
  bottom(0) = 1;
  left(1) = 1;
  IntVector cb = b.coords(bottom), cl = b.coords(left);
  CHECK((cb.transpose() * b.J * cl)(0, 0) == 1);

  auto r = induced_cocycle(t, {Move::T});
  CHECK(r.final_point.surface == t);
  // In the (bottom, left) basis T is [[1,1],[0,1]].
  IntMatrix P(2, 2);
  P << cb, cl;
  IntMatrix inBL = unimodular_inverse(P) * r.M * P;
  IntMatrix want(2, 2);
  want << 1, 1, 0, 1;
  CHECK(inBL == want);
  CHECK(r.M.transpose() * b.J * r.M == b.J);
}

TEST_CASE("rank is twice the genus and J is unimodular") {
  CHECK(homology_basis(Origami::parse("3; (1 2 3); (1 2)")).rank == 4);
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 100; ++trial) {
    Origami o = testing::random_origami(1 + static_cast<int>(rng() % 14), rng);
    auto b = homology_basis(o);
    CHECK(b.rank == 2 * origami_stratum(o).genus);
    CHECK(b.J == -b.J.transpose());
    Eigen::MatrixXd Jd = b.J.cast<double>();
    CHECK(Jd.determinant() == doctest::Approx(1.0));
    for (int j = 0; j < b.rank; ++j) CHECK(b.coords(b.cycles[static_cast<std::size_t>(j)]) == IntVector::Unit(b.rank, j));
    for (int s = 0; s < o.size(); ++s) CHECK(b.coords(square_boundary(o, s)).isZero());
  }
}

TEST_CASE("chain maps commute with holonomy and boundary") {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 100; ++trial) {
    Origami o = testing::random_origami(1 + static_cast<int>(rng() % 10), rng);
    auto b = homology_basis(o);
    for (Move m : {Move::S, Move::T, Move::Tinv}) {
      Origami after = apply_generator(o, m);
      auto g = move_matrix(m);
      for (const auto& z : b.cycles) {
        Chain w = move_chain(o, m, z);
        CHECK(boundary(after, w).isZero());
        auto a = holonomy(z), c = holonomy(w);
        CHECK(c[0] == g[0] * a[0] + g[1] * a[1]);
        CHECK(c[1] == g[2] * a[0] + g[3] * a[1]);
      }
    }
  }
}

TEST_CASE("cocycle matrices are symplectic") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 100; ++trial) {
    Origami o = testing::random_origami(1 + static_cast<int>(rng() % 10), rng);
    auto r = induced_cocycle(o, random_word(rng, 1 + static_cast<int>(rng() % 6)));
    auto J0 = homology_basis(o).J;
    auto J1 = homology_basis(r.final_point.surface).J;
    CHECK(r.M.transpose() * J1 * r.M == J0);

    auto id = induced_cocycle(o, {Move::S, Move::S, Move::S, Move::S});
    CHECK(id.final_point.surface == o);
    CHECK(id.M == IntMatrix::Identity(id.M.rows(), id.M.cols()));
    auto tt = induced_cocycle(o, {Move::T, Move::Tinv});
    CHECK(tt.M == IntMatrix::Identity(tt.M.rows(), tt.M.cols()));
  }
}

TEST_CASE("relabelling is an isomorphism on homology") {
  std::mt19937_64 rng(54);
  for (int trial = 0; trial < 50; ++trial) {
    Origami o = testing::random_origami(1 + static_cast<int>(rng() % 10), rng);
    Perm r = testing::random_perm(o.size(), rng);
    Origami o2(o.h().relabel(r), o.v().relabel(r));
    auto b1 = homology_basis(o), b2 = homology_basis(o2);
    IntMatrix M = induced_matrix(b1, b2, [&](const Chain& z) { return relabel_chain(r, z); });
    CHECK(M.transpose() * b2.J * M == b1.J);
  }
}

TEST_CASE("cocycle is deck equivariant on the (5,1,2,2,5) double cover") {
  auto dc = orientation_double_cover(cyclic_to_pillow({5, {1, 2, 2, 5}}).cover);
  OrbitPoint x = from_double_cover(dc);
  auto b0 = homology_basis(x.surface);
  CHECK(b0.rank == 14);
  IntMatrix I0 = involution_matrix(b0, x.surface, *x.involution);
  CHECK(I0 * I0 == IntMatrix::Identity(14, 14));
  // Trace of the involution is 2 dim H+ - rank = 4 g(X) - 2 g(X^).
  CHECK(I0.trace() == 2 * 4 - 14);
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 100; ++trial) {
    auto r = induced_cocycle(x, random_word(rng, 1 + static_cast<int>(rng() % 8)));
    auto b1 = homology_basis(r.final_point.surface);
    IntMatrix I1 = involution_matrix(b1, r.final_point.surface, *r.final_point.involution);
    CHECK(I1 * r.M == r.M * I0);
    CHECK(r.M.transpose() * b1.J * r.M == b0.J);
  }
}

TEST_CASE("involution on random double covers") {
  std::mt19937_64 rng(56);
  for (int trial = 0; trial < 50; ++trial) {
    PillowCover p = testing::random_pillow(1 + static_cast<int>(rng() % 7), rng);
    auto dc = orientation_double_cover(p);
    auto b = homology_basis(dc.surface);
    IntMatrix I = involution_matrix(b, dc.surface, dc.involution);
    CHECK(I * I == IntMatrix::Identity(b.rank, b.rank));
    CHECK(I.transpose() * b.J * I == b.J);
    // The invariant part is H_1 of the quotient.
    int g = pillow_stratum(p).genus;
    CHECK((b.rank + I.trace()) / 2 == 2 * g);
  }
}
