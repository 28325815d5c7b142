#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "doctest.h"
#include "flatdeg/coverings.hpp"
#include "flatdeg/errors.hpp"
#include "flatdeg/orbit.hpp"
#include "generators.hpp"

using namespace flatdeg;

namespace {

OrbitPoint pt(const Origami& o) { return {o, std::nullopt}; }

// Minimum over all d! relabelings; only for tiny d.
std::vector<int> naive_key(const Origami& o) {
  int d = o.size();
  std::vector<int> lab(static_cast<std::size_t>(d));
  std::iota(lab.begin(), lab.end(), 0);
  std::vector<int> best;
  do {
    Perm r(lab);
    auto k = o.h().relabel(r).images();
    auto kv = o.v().relabel(r).images();
    k.insert(k.end(), kv.begin(), kv.end());
    if (best.empty() || k < best) best = k;
  } while (std::next_permutation(lab.begin(), lab.end()));
  return best;
}

std::set<std::string> vertex_set(const OrbitGraph& g) {
  std::set<std::string> s;
  for (const auto& v : g.vertices) s.insert(v.to_string());
  return s;
}

}  // namespace

TEST_CASE("generators on the torus") {
  Origami t(Perm(1), Perm(1));
  CHECK(apply_generator(t, Move::T) == t);
  CHECK(apply_generator(t, Move::S) == t);
  CHECK(enumerate_orbit(t).size() == 1);
}

TEST_CASE("generator identities and stratum invariance") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    int d = 1 + static_cast<int>(rng() % 10);
    Origami o = testing::random_origami(d, rng);
    auto s = origami_stratum(o);
    for (Move m : {Move::S, Move::T, Move::Tinv}) CHECK(origami_stratum(apply_generator(o, m)) == s);
    CHECK(apply_generator(apply_generator(o, Move::T), Move::Tinv) == o);
    CHECK(apply_generator(apply_generator(o, Move::Tinv), Move::T) == o);
    Origami s2 = apply_generator(apply_generator(o, Move::S), Move::S);
    CHECK(s2 == Origami(o.h().inverse(), o.v().inverse()));
    CHECK(apply_generator(apply_generator(s2, Move::S), Move::S) == o);
  }
}

TEST_CASE("S^2 acts trivially on half-translation data and on genus 2") {
  std::mt19937_64 rng(36);
  auto s2 = [](OrbitPoint p) { return apply_generator(apply_generator(p, Move::S), Move::S); };
  for (int trial = 0; trial < 100; ++trial) {
    PillowCover p = testing::random_pillow(1 + static_cast<int>(rng() % 7), rng);
    OrbitPoint x = from_double_cover(orientation_double_cover(p));
    CHECK(canonical_form(s2(x)).point == canonical_form(x).point);
    // The involution itself realizes the isomorphism.
    CHECK(relabel(s2(x), *x.involution) == x);
  }
  int seen = 0;
  while (seen < 50) {
    Origami o = testing::random_origami(3 + static_cast<int>(rng() % 6), rng);
    if (origami_stratum(o).genus != 2) continue;
    ++seen;
    CHECK(canonical_form(s2(pt(o))).point == canonical_form(pt(o)).point);
  }
}

TEST_CASE("canonical form is idempotent and relabeling invariant") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 100; ++trial) {
    int d = 1 + static_cast<int>(rng() % 12);
    Origami o = testing::random_origami(d, rng);
    auto c = canonical_form(pt(o));
    CHECK(relabel(pt(o), c.relabel) == c.point);
    CHECK(canonical_form(c.point).point == c.point);
    Perm r = testing::random_perm(d, rng);
    CHECK(canonical_form(relabel(pt(o), r)).point == c.point);
  }
}

TEST_CASE("canonical form separates exactly the isomorphism classes") {
  std::mt19937_64 rng(33);
  std::vector<Origami> corpus;
  for (int trial = 0; trial < 150; ++trial) corpus.push_back(testing::random_origami(1 + static_cast<int>(rng() % 5), rng));
  for (std::size_t i = 0; i < corpus.size(); ++i)
    for (std::size_t j = i; j < corpus.size(); j += 7) {
      if (corpus[i].size() != corpus[j].size()) continue;
      bool same_naive = naive_key(corpus[i]) == naive_key(corpus[j]);
      bool same_fast = canonical_form(pt(corpus[i])).point == canonical_form(pt(corpus[j])).point;
      CHECK(same_naive == same_fast);
    }
}

TEST_CASE("orbit of the L-shaped origami matches brute-force reachability") {
  Origami L = Origami::parse("3; (1 2 3); (1 2)");
  auto g = enumerate_orbit(L);

  // All connected 3-square origamis in H(2), classes by naive keys, edges by moves.
  std::map<std::vector<int>, Origami> classes;
  std::vector<int> a{0, 1, 2}, b;
  do {
    b = {0, 1, 2};
    do {
      Origami o{Perm(a), Perm(b)};
      if (!o.is_connected() || origami_stratum(o).orders != std::vector<int>{2}) continue;
      classes.emplace(naive_key(o), o);
    } while (std::next_permutation(b.begin(), b.end()));
  } while (std::next_permutation(a.begin(), a.end()));
  std::set<std::vector<int>> reached{naive_key(L)};
  std::vector<Origami> todo{L};
  while (!todo.empty()) {
    Origami o = todo.back();
    todo.pop_back();
    for (Move m : {Move::S, Move::T, Move::Tinv}) {
      Origami w = apply_generator(o, m);
      if (reached.insert(naive_key(w)).second) todo.push_back(w);
    }
  }
  CHECK(classes.size() == 3);
  CHECK(g.size() == static_cast<int>(reached.size()));
  CHECK(g.size() == 3);
  CHECK_THROWS_AS(enumerate_orbit(L, 2), ResourceError);
}

TEST_CASE("orbit graph edges and seed independence") {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 20; ++trial) {
    Origami o = testing::random_origami(2 + static_cast<int>(rng() % 6), rng);
    auto g = enumerate_orbit(o);
    auto s = origami_stratum(o);
    for (const auto& e : g.edges) {
      auto moved = apply_generator(g.vertices[static_cast<std::size_t>(e.from)], e.move);
      CHECK(relabel(moved, e.relabel) == g.vertices[static_cast<std::size_t>(e.to)]);
    }
    for (const auto& v : g.vertices) CHECK(origami_stratum(v.surface) == s);
    auto other = enumerate_orbit(g.vertices.back());
    CHECK(vertex_set(other) == vertex_set(g));
    CHECK(dump(other) == dump(g));
  }
}

TEST_CASE("involution is carried along moves") {
  std::mt19937_64 rng(35);
  for (int trial = 0; trial < 100; ++trial) {
    PillowCover p = testing::random_pillow(1 + static_cast<int>(rng() % 7), rng);
    auto q = pillow_stratum(p);
    OrbitPoint x = from_double_cover(orientation_double_cover(p));
    for (int step = 0; step < 6; ++step) {
      x = apply_generator(x, static_cast<Move>(rng() % 3));
      CHECK(is_half_translation_involution(x.surface, *x.involution));
      CHECK(quotient_stratum(x.surface, *x.involution) == q);
    }
  }
}

TEST_CASE("orbit of the (5,1,2,2,5) double cover") {
  auto p = cyclic_to_pillow({5, {1, 2, 2, 5}}).cover;
  auto seed = from_double_cover(orientation_double_cover(p));
  auto g = enumerate_orbit(seed);
  CHECK(g.size() > 1);
  auto q = pillow_stratum(p);
  auto s = origami_stratum(seed.surface);
  for (const auto& v : g.vertices) {
    CHECK(origami_stratum(v.surface) == s);
    CHECK(quotient_stratum(v.surface, *v.involution) == q);
  }
  auto other = enumerate_orbit(g.vertices[static_cast<std::size_t>(g.size() / 2)]);
  CHECK(dump(other) == dump(g));
}

TEST_CASE("disconnected double covers canonicalize through the involution") {
  auto p = cyclic_to_pillow({2, {1, 1, 1, 1}}).cover;
  auto dc = orientation_double_cover(p);
  REQUIRE_FALSE(dc.connected);
  auto g = enumerate_orbit(from_double_cover(dc));
  CHECK(g.size() >= 1);
  CHECK_THROWS_AS(canonical_form(pt(dc.surface)), ConnectivityError);
}
