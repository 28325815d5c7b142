#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "flatdeg/coverings.hpp"

namespace flatdeg {

using Complex = std::complex<double>;

// w^N = prod (z - z_i)^{a_i}. Infinity is a branch point iff sum a_i is not 0 mod N.
struct SuperellipticCurve {
  int N = 2;
  std::vector<Complex> points;
  std::vector<int> a;

  void validate() const;
  int a_inf() const;  // in [0, N)
  int genus() const;
  std::string to_string() const;
};

// z^r prod (z - z_i)^{floors_i} w^{-b} dz with floors_i = floor(b a_i / N), so the
// modulus near z_i behaves like |z - z_i|^{-mu_i}, mu_i = {b a_i / N}.
// The deck transformation w -> zeta w acts by zeta^{-b}.
struct EigenForm {
  int r = 0;
  int b = 1;
  std::vector<int> floors;
  std::vector<double> mu;
  // Order of vanishing at each point over z_i (all points of a fibre agree) and over infinity.
  std::vector<int> valuation;
  int valuation_inf = 0;

  std::string to_string() const;
};

// Candidate forms for b in [1, N-1] and r up to the degree bound, filtered by valuations.
// Throws InternalError if the count disagrees with Riemann-Hurwitz.
std::vector<EigenForm> holomorphic_basis(const SuperellipticCurve& c);
std::vector<EigenForm> candidate_forms(const SuperellipticCurve& c, int extra_r = 1);

// q = coefficient * w^{-character} * prod (z - p_j)^{m_j} dz^2 on the curve.
// character 0 means q is pulled back from the sphere.
struct CoverQuadratic {
  int character = 0;
  Complex coefficient{1.0, 0.0};
  std::vector<std::pair<Complex, int>> factors;

  static CoverQuadratic pullback(const BaseDifferential& q);
  CoverQuadratic scaled(Complex c) const;
  std::string to_string() const;
};

struct QuadratureOptions {
  double tol = 1e-6;
  int min_level = 1;
  int max_level = 4;
  // When false, a level that misses tol is reported instead of thrown.
  bool strict = true;
};

struct BFormReport {
  SuperellipticCurve curve;
  CoverQuadratic q;
  std::vector<EigenForm> basis;
  Eigen::MatrixXcd B;
  Eigen::MatrixXcd H;
  // selected(i, j) is false where the deck character forces B(i, j) = 0.
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> selected;
  std::vector<double> theta;
  double quad_error = 0.0;
  int level = 0;
  std::string worst_region;

  double gap() const { return theta.empty() ? 1.0 : 1.0 - theta.front(); }
  std::string to_json() const;
};

BFormReport pairing_matrices(const SuperellipticCurve& c, const CoverQuadratic& q,
                             const std::vector<EigenForm>& basis,
                             const QuadratureOptions& opt = {});

// Singular values of C^T B C with C = conj(H)^{-1/2}, nonincreasing.
std::vector<double> theta_spectrum(const BFormReport& report);

}  // namespace flatdeg
