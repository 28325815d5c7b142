#include <numeric>
#include <random>

#include "doctest.h"
#include "flatdeg/coverings.hpp"
#include "flatdeg/errors.hpp"

using namespace flatdeg;

namespace {

const BoundCheck& find(const std::vector<BoundCheck>& v, const std::string& name) {
  for (const auto& b : v)
    if (b.name == name) return b;
  throw std::runtime_error("no check " + name);
}

bool is_prime(int p) {
  if (p < 2) return false;
  for (int q = 2; q * q <= p; ++q)
    if (p % q == 0) return false;
  return true;
}

}  // namespace

TEST_CASE("cyclic datum parsing and validation") {
  auto s = CyclicCoverSpec::parse("5 1 2 2 5");
  CHECK(s.N == 5);
  CHECK(s.to_string() == "5 1 2 2 5");
  CHECK_THROWS_AS(CyclicCoverSpec::parse("5 1 2 2"), ParseError);
  CHECK_THROWS_AS(CyclicCoverSpec::parse("5 1 2 x 5"), ParseError);
  CHECK_THROWS_AS(CyclicCoverSpec::parse("4 2 2 2 2"), DatumError);  // gcd 2
  CHECK_THROWS_AS(CyclicCoverSpec::parse("5 1 1 1 1"), DatumError);  // sum 4
  CHECK_THROWS_AS(CyclicCoverSpec::parse("5 0 2 3 5"), DatumError);
  CHECK_THROWS_AS(CyclicCoverSpec::parse("5 6 2 2 5"), DatumError);
}

TEST_CASE("cyclic covers as pillow covers") {
  auto c = cyclic_to_pillow({5, {1, 2, 2, 5}});
  CHECK(c.cover.corner(3).is_identity());
  for (int i = 0; i < 3; ++i) CHECK(c.cover.corner(i).cycle_type() == std::vector<int>{5});
  CHECK(c.ramification[3].cycles == 5);
  CHECK(c.ramification[3].length == 1);
  CHECK(c.ramification[0].length == 5);

  auto c2 = cyclic_to_pillow({2, {1, 1, 1, 1}});
  for (int i = 0; i < 4; ++i) CHECK(c2.cover.corner(i).cycle_type() == std::vector<int>{2});

  auto c4 = cyclic_to_pillow({4, {1, 1, 1, 1}});
  for (int i = 0; i < 4; ++i) CHECK(c4.cover.corner(i).cycle_type() == std::vector<int>{4});
  CHECK(pillow_stratum(c4.cover).genus == 3);
  CHECK(pillow_stratum(c4.cover).orders == std::vector<int>{2, 2, 2, 2});
}

TEST_CASE("determinant locus criterion") {
  auto t = is_determinant_locus({5, {1, 2, 2, 5}});
  CHECK(t.value);
  CHECK(t.reason == "unbranched over corner 3");
  CHECK_FALSE(is_determinant_locus({4, {1, 1, 1, 1}}).value);
  auto two = is_determinant_locus({3, {3, 3, 1, 2}});
  CHECK(two.value);
  CHECK(two.reason == "unbranched over corner 0 1");
  CHECK_THROWS_AS(is_determinant_locus({3, {3, 3, 3, 3}}), DatumError);
}

TEST_CASE("criteria agree on random data and degenerate covers have an unbranched pole") {
  std::mt19937_64 rng(21);
  int tested = 0;
  while (tested < 300) {
    int N = 2 + static_cast<int>(rng() % 14);
    CyclicCoverSpec s{N, {}};
    for (int i = 0; i < 3; ++i) s.a[static_cast<std::size_t>(i)] = 1 + static_cast<int>(rng() % static_cast<unsigned>(N));
    int rest = (N - (s.a[0] + s.a[1] + s.a[2]) % N) % N;
    s.a[3] = rest == 0 ? N : rest;
    try {
      s.validate();
    } catch (const DatumError&) {
      continue;
    }
    ++tested;
    auto crit = is_determinant_locus(s);  // throws on disagreement
    auto c = cyclic_to_pillow(s);
    CHECK(crit.value == (branch_count(c.cover) <= 3));
    if (crit.value) {
      bool trivial_corner = false;
      for (int i = 0; i < 4; ++i)
        trivial_corner |= c.cover.corner(i).cycle_type() == std::vector<int>(static_cast<std::size_t>(N), 1);
      CHECK(trivial_corner);
      auto checks = check_bounds(cover_report(s), true);
      CHECK(find(checks, "unbranched_pole").verdict == Verdict::pass);
    }
  }
}

TEST_CASE("p-family strata") {
  for (int p = 3; p <= 31; ++p) {
    if (!is_prime(p)) continue;
    CAPTURE(p);
    auto r = cover_report(CyclicCoverSpec{p, {1, 1, p - 2, p}});
    CHECK(r.genus == (p - 1) / 2);
    std::vector<int> want{p - 2, p - 2, p - 2};
    want.insert(want.end(), static_cast<std::size_t>(p), -1);
    CHECK(r.stratum.orders == want);
    CHECK(r.n == p);
    CHECK(r.branch_count == 3);
    CHECK(is_determinant_locus({p, {1, 1, p - 2, p}}).value);
  }
}

TEST_CASE("bound checks") {
  auto c5 = check_bounds(cover_report({5, {1, 2, 2, 5}}), true);
  CHECK(find(c5, "pole_bound").verdict == Verdict::pass);
  CHECK(find(c5, "pole_bound").lhs == 5);
  CHECK(find(c5, "pole_bound").rhs == 2);
  CHECK(find(c5, "degree_bound").verdict == Verdict::skipped);
  CHECK(find(c5, "unbranched_pole").verdict == Verdict::pass);

  auto r7 = cover_report({7, {1, 2, 4, 7}});
  auto c7 = check_bounds(r7, true);
  CHECK(find(c7, "pole_bound").lhs == 7);
  CHECK(find(c7, "pole_bound").rhs == 4);
  CHECK(r7.n - (2 * r7.genus - 2) == 3);

  auto ctrl = check_bounds(cover_report({2, {1, 1, 1, 1}}), false);
  for (const auto& b : ctrl) CHECK(b.verdict == Verdict::skipped);

  // A degenerate flag on a four-branch-point non-Galois cover engages the degree bound.
  CoverReport fake;
  fake.genus = 4;
  fake.degree = 10;
  fake.branch_count = 4;
  fake.n = 3;
  auto cf = check_bounds(fake, true);
  CHECK(find(cf, "degree_bound").verdict == Verdict::pass);
  CHECK(find(cf, "pole_bound").verdict == Verdict::fail);
  CHECK(find(cf, "unbranched_pole").verdict == Verdict::skipped);
  fake.degree = 11;
  fake.genus = 6;
  CHECK(find(check_bounds(fake, true), "degree_bound").verdict == Verdict::fail);
}

TEST_CASE("locus metadata") {
  int p = 5;
  LocusSpec fam{{}, 4, {Perm::rotation(p, 1), Perm::rotation(p, 1), Perm::rotation(p, p - 2)}};
  auto m = locus_metadata(fam);
  CHECK(m.n == p);
  CHECK(m.dim == 2);
  CHECK(m.genus_Y == 2);
  CHECK(m.target.orders == std::vector<int>{3, 3, 3, -1, -1, -1, -1, -1});

  auto triv = locus_metadata(LocusSpec::parse("1; 5; 1; (); (); ()"));
  CHECK(triv.n == 5);
  CHECK(triv.dim == 4);
  CHECK(triv.genus_Y == 0);

  auto six = locus_metadata(LocusSpec::parse("; 4; 6; (1 2)(3 4)(5 6); (1 6 5 2 4 3); (1 4)(2 6)"));
  CHECK(six.n == 8);
  CHECK(six.dim == 2);
  CHECK(six.genus_Y == 0);
  CHECK(six.target.pole_count() == 8);

  CHECK_THROWS_AS(LocusSpec::parse("1; 4; 1; (); (); ()"), SpecError);
  CHECK_THROWS_AS(LocusSpec::parse("; 4; 3; (1 2 3); (); ()"), SpecError);
  CHECK_THROWS_AS(LocusSpec::parse("; 4; 2; (); (); ()"), ConnectivityError);
}

TEST_CASE("locus dimension grows with the number of poles") {
  const std::array<Perm, 3> mono{Perm::rotation(5, 1), Perm::rotation(5, 1), Perm::rotation(5, 3)};
  int last = 0;
  for (int k = 4; k <= 20; ++k) {
    std::vector<int> m(static_cast<std::size_t>(k - 4), 1);
    auto md = locus_metadata({m, k, mono});
    CHECK(md.dim == static_cast<int>(m.size()) + k - 2);
    CHECK(md.dim > last);
    last = md.dim;
  }
}

TEST_CASE("locus metadata properties on random covers") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 200; ++trial) {
    int d = 1 + static_cast<int>(rng() % 7);
    std::vector<int> a(static_cast<std::size_t>(d)), b(a);
    std::iota(a.begin(), a.end(), 0);
    std::iota(b.begin(), b.end(), 0);
    std::shuffle(a.begin(), a.end(), rng);
    std::shuffle(b.begin(), b.end(), rng);
    Perm h0(a), h1(b);
    Perm hinf = (h0 * h1).inverse();
    std::array<Perm, 3> mono{h0, h1, hinf};
    if (!is_transitive(d, mono)) continue;
    int r = static_cast<int>(rng() % 3);
    std::vector<int> m;
    for (int j = 0; j < r; ++j) m.push_back(1 + static_cast<int>(rng() % 3));
    int k = std::accumulate(m.begin(), m.end(), 0) + 4;
    auto md = locus_metadata({m, k, mono});
    CHECK(md.dim >= 1);
    CHECK(md.n >= k - 3);
    CHECK(md.target.pole_count() == md.n);
  }
}

TEST_CASE("base differentials") {
  using P = BaseDifferential::Point;
  auto q = sample_base_differential({}, 4, {}, {P(2, 1)});
  CHECK(q.order_at(P(0, 0)) == -1);
  CHECK(q.order_at(P(1, 0)) == -1);
  CHECK(q.order_at(P(2, 1)) == -1);
  CHECK(q.order_at(P(3, 0)) == 0);
  CHECK(q.order_at_infinity() == -1);

  auto q2 = sample_base_differential({2}, 6, {P(0.5, 0.5)}, {P(2, 0), P(3, 0), P(-1, 0)});
  CHECK(q2.order_at_infinity() == -1);
  CHECK(q2.order_at(P(0.5, 0.5)) == 2);

  auto q3 = sample_base_differential({1, 1}, 6, {P(0, 2), P(0, -2)}, {P(2, 0), P(3, 0), P(-1, 0)});
  int total = 0;
  for (const auto& [pt, ord] : q3.divisor()) total += ord;
  CHECK(total == -4);

  // Near a simple pole f ~ c / z.
  auto f = q(P(1e-7, 0));
  CHECK(std::abs(f * 1e-7 - 1.0 / ((0.0 - 1.0) * (0.0 - P(2, 1)))) < 1e-5);

  CHECK_THROWS_AS(sample_base_differential({}, 4, {}, {P(1, 0)}), GeometryError);
  CHECK_THROWS_AS(sample_base_differential({2}, 6, {P(2, 0)}, {P(2, 0), P(3, 0), P(-1, 0)}), GeometryError);
  CHECK_THROWS_AS(sample_base_differential({2}, 5, {P(5, 0)}, {P(2, 0), P(3, 0)}), SpecError);
}
