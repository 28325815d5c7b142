#include <cmath>
#include <random>

#include <doctest.h>
#include <json.hpp>

#include "flatdeg/bform.hpp"
#include "flatdeg/errors.hpp"

using namespace flatdeg;

namespace {

CoverQuadratic standard_q(Complex t) {
  return CoverQuadratic::pullback(BaseDifferential({}, 4, {}, {t}));
}

SuperellipticCurve cyclic(int N, int a1, int a2, int a3, Complex t) {
  return {N, {0.0, 1.0, t}, {a1, a2, a3}};
}

const std::vector<Complex> kSextic = {{-1.3, 0.2}, {-0.7, -0.5}, {-0.2, 0.9},
                                      {0.4, -0.3}, {0.9, 0.6},   {1.4, -0.8}};

// Genus 2, q pulled back from a base differential whose poles avoid the branch points.
const BFormReport& gap_report() {
  static const BFormReport rep = [] {
    SuperellipticCurve c{2, kSextic, std::vector<int>(6, 1)};
    CoverQuadratic q;
    q.factors = {{{0.3, 0.4}, -1}, {{-0.5, -0.6}, -1}, {{1.1, 1.0}, -1}, {{0.0, 1.5}, -1}};
    return pairing_matrices(c, q, holomorphic_basis(c));
  }();
  return rep;
}

}  // namespace

TEST_CASE("genus from Riemann-Hurwitz") {
  CHECK(cyclic(5, 1, 2, 2, 0.3).genus() == 2);
  CHECK(cyclic(2, 1, 1, 1, 0.3).genus() == 1);
  CHECK(cyclic(4, 1, 1, 1, 0.3).genus() == 3);
  CHECK(SuperellipticCurve{2, kSextic, std::vector<int>(6, 1)}.genus() == 2);
  CHECK(SuperellipticCurve{2, {0.0, 1.0}, {1, 1}}.genus() == 0);
  CHECK(cyclic(5, 1, 2, 2, 0.3).a_inf() == 0);
  CHECK(cyclic(4, 1, 1, 1, 0.3).a_inf() == 1);
}

TEST_CASE("curve validation") {
  CHECK_THROWS_AS(SuperellipticCurve({4, {0.0, 1.0}, {2, 2}}).validate(), DatumError);
  CHECK_THROWS_AS(SuperellipticCurve({4, {0.0, 1.0}, {0, 1}}).validate(), DatumError);
  CHECK_THROWS_AS(SuperellipticCurve({4, {0.0, 1.0}, {5, 1}}).validate(), DatumError);
  CHECK_THROWS_AS(SuperellipticCurve({3, {0.5, 0.5}, {1, 1}}).validate(), GeometryError);
}

TEST_CASE("holomorphic bases") {
  SUBCASE("degree five family has two forms") {
    auto basis = holomorphic_basis(cyclic(5, 1, 2, 2, 0.3));
    REQUIRE(basis.size() == 2);
    CHECK(basis[0].b == 2);
    CHECK(basis[1].b == 4);
    CHECK(basis[0].r == 0);
  }
  SUBCASE("sextic hyperelliptic forms are all anti-invariant") {
    auto basis = holomorphic_basis({2, kSextic, std::vector<int>(6, 1)});
    REQUIRE(basis.size() == 2);
    for (const auto& f : basis) CHECK(f.b == 1);
    CHECK(basis[0].r == 0);
    CHECK(basis[1].r == 1);
  }
  SUBCASE("rational curve") {
    CHECK(holomorphic_basis({2, {0.0, 1.0}, {1, 1}}).empty());
  }
  SUBCASE("valuations of dz/w on an elliptic curve") {
    auto basis = holomorphic_basis(cyclic(2, 1, 1, 1, 0.3));
    REQUIRE(basis.size() == 1);
    for (int v : basis[0].valuation) CHECK(v == 0);
    CHECK(basis[0].valuation_inf == 0);
  }
}

TEST_CASE("random curves: basis count matches genus and rejected candidates have a pole") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const int N = std::uniform_int_distribution<int>(2, 12)(rng);
    const int k = std::uniform_int_distribution<int>(1, 7)(rng);
    SuperellipticCurve c;
    c.N = N;
    for (int i = 0; i < k; ++i) {
      c.points.push_back({static_cast<double>(i), 0.5 * i * i});
      c.a.push_back(std::uniform_int_distribution<int>(1, N)(rng));
    }
    try {
      c.validate();
    } catch (const DatumError&) {
      continue;
    }
    auto basis = holomorphic_basis(c);
    CHECK(static_cast<int>(basis.size()) == c.genus());
    for (const auto& f : candidate_forms(c, 2)) {
      bool holo = f.valuation_inf >= 0;
      for (int v : f.valuation) holo = holo && v >= 0;
      const bool listed = std::any_of(basis.begin(), basis.end(),
                                      [&](const EigenForm& e) { return e.r == f.r && e.b == f.b; });
      CHECK(holo == listed);
    }
  }
}

TEST_CASE("Hodge norm of dz/w matches complete elliptic integrals") {
  for (double lam : {0.5, 0.3}) {
    auto c = cyclic(2, 1, 1, 1, lam);
    auto rep = pairing_matrices(c, standard_q(lam), holomorphic_basis(c));
    const double oracle = 16.0 * std::comp_ellint_1(std::sqrt(lam)) *
                          std::comp_ellint_1(std::sqrt(1.0 - lam));
    CHECK(rep.H(0, 0).real() == doctest::Approx(oracle).epsilon(1e-6));
    CHECK(std::abs(rep.H(0, 0) - oracle) <= rep.quad_error);
  }
}

TEST_CASE("square of a holomorphic form saturates the bound") {
  auto c = cyclic(2, 1, 1, 1, {0.2, 0.7});
  auto rep = pairing_matrices(c, standard_q({0.2, 0.7}), holomorphic_basis(c));
  REQUIRE(rep.theta.size() == 1);
  CHECK(rep.theta[0] == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("cyclic cover of degree four with three equal exponents") {
  auto c = cyclic(4, 1, 1, 1, 0.3);
  auto rep = pairing_matrices(c, standard_q(0.3), holomorphic_basis(c));
  REQUIRE(rep.theta.size() == 3);
  CHECK(rep.theta[0] == doctest::Approx(1.0).epsilon(0.02));
  CHECK(rep.theta[1] < 0.02);
  CHECK(rep.theta[2] < 0.02);
}

TEST_CASE("degree five family is degenerate at two points of the disc") {
  for (Complex t : {Complex(0.3, 0.0), Complex(0.2, 0.7)}) {
    auto c = cyclic(5, 1, 2, 2, t);
    auto rep = pairing_matrices(c, standard_q(t), holomorphic_basis(c));
    REQUIRE(rep.theta.size() == 2);
    CHECK(rep.theta[0] < 0.02);
    CHECK(rep.selected.count() == 0);
    CHECK(rep.B.cwiseAbs().maxCoeff() == 0.0);
    CHECK(rep.H(0, 0).real() > 0.0);
  }
}

TEST_CASE("anti-invariant q on a genus three hyperelliptic curve") {
  std::vector<Complex> pts = kSextic;
  pts.push_back({0.1, -1.2});
  pts.push_back({1.8, 0.3});
  SuperellipticCurve c{2, pts, std::vector<int>(8, 1)};
  CoverQuadratic q;
  q.character = 1;
  auto rep = pairing_matrices(c, q, holomorphic_basis(c));
  REQUIRE(rep.basis.size() == 3);
  CHECK(rep.B.cwiseAbs().maxCoeff() < 1e-6);
  CHECK(rep.selected.count() == 0);
  for (double t : rep.theta) CHECK(t < 1e-6);
}

TEST_CASE("simple poles give a strict gap") {
  const auto& rep = gap_report();
  REQUIRE(rep.theta.size() == 2);
  CHECK(rep.theta[0] >= rep.theta[1]);
  CHECK(rep.theta[0] <= 1.0 + 1e-3);
  CHECK(rep.gap() > 0.05);
  CHECK(rep.theta[0] > 0.05);  // not degenerate either
}

TEST_CASE("B is symmetric and H is Hermitian positive definite") {
  const auto& rep = gap_report();
  CHECK((rep.B - rep.B.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((rep.H - rep.H.adjoint()).cwiseAbs().maxCoeff() == 0.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rep.H);
  CHECK(es.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("theta is unchanged when q is rescaled") {
  const auto& rep = gap_report();
  for (Complex s : {Complex(-2.0, 3.0), Complex(0.0, 0.1)}) {
    auto scaled = pairing_matrices(rep.curve, rep.q.scaled(s), rep.basis);
    for (std::size_t i = 0; i < rep.theta.size(); ++i)
      CHECK(scaled.theta[i] == doctest::Approx(rep.theta[i]).epsilon(1e-6));
  }
}

TEST_CASE("halving the mesh stays within the error estimate") {
  const auto& base = gap_report();
  QuadratureOptions coarse;
  coarse.min_level = coarse.max_level = 2;
  coarse.strict = false;
  QuadratureOptions fine = coarse;
  fine.min_level = fine.max_level = 3;
  auto a = pairing_matrices(base.curve, base.q, base.basis, coarse);
  auto b = pairing_matrices(base.curve, base.q, base.basis, fine);
  CHECK((a.B - b.B).cwiseAbs().maxCoeff() <= a.quad_error);
  CHECK((a.H - b.H).cwiseAbs().maxCoeff() <= a.quad_error);
  CHECK(b.quad_error < a.quad_error);
}

TEST_CASE("failures are reported") {
  SUBCASE("non-convergence names a region") {
    const auto& base = gap_report();
    QuadratureOptions o;
    o.min_level = o.max_level = 1;
    CHECK_THROWS_WITH_AS(pairing_matrices(base.curve, base.q, base.basis, o),
                         doctest::Contains("worst in"), NumericalError);
  }
  SUBCASE("indefinite Gram matrix") {
    BFormReport rep;
    rep.H = -Eigen::MatrixXcd::Identity(2, 2);
    rep.B = Eigen::MatrixXcd::Zero(2, 2);
    CHECK_THROWS_AS(theta_spectrum(rep), NumericalError);
  }
  SUBCASE("genus zero has an empty spectrum") {
    SuperellipticCurve c{2, {0.0, 1.0}, {1, 1}};
    auto rep = pairing_matrices(c, standard_q(0.5), holomorphic_basis(c));
    CHECK(rep.theta.empty());
  }
}

TEST_CASE("report json") {
  auto j = nlohmann::json::parse(gap_report().to_json());
  CHECK(j["theta"].size() == 2);
  CHECK(j["B"].size() == 2);
  CHECK(j["B"][0][0].size() == 2);
  CHECK(j["curve"]["genus"] == 2);
  CHECK(j.contains("quad_error"));
}
