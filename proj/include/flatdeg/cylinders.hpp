#pragma once

#include <optional>
#include <string>
#include <vector>

#include "flatdeg/orbit.hpp"
#include "flatdeg/rational.hpp"

namespace flatdeg {

// Whether horizontal circles carrying only marked regular points bound
// cylinders. Strata keep marked points, so by default they do.
enum class MarkedPolicy { singular, regular };

struct Cylinder {
  int width = 0;
  int height = 0;
  std::vector<int> rows;  // bottom to top, indices into CylinderDecomposition::row_squares
};

struct CylinderDecomposition {
  std::vector<std::vector<int>> row_squares;  // h-cycles, each starting at its smallest square
  std::vector<Cylinder> cylinders;

  int area() const;
  // Sum of height / width; equals the sum over rows of 1 / width for either policy.
  Rational modulus_sum() const;
};

CylinderDecomposition horizontal_cylinders(const Origami& o, MarkedPolicy policy = MarkedPolicy::singular);

// Average of modulus_sum over the orbit, before normalization.
Rational raw_sv_average(const OrbitGraph& g);

// Normalization of the Siegel-Veech term on double covers.
struct SvCalibration {
  Rational kappa;
  struct Case {
    std::string datum;
    Rational raw;
    Rational required;
  };
  std::vector<Case> cases;
};

// Fixes kappa from the p = 3 family and checks it on p = 5 and the orientable
// control (2,1,1,1,1); throws CalibrationError when no single value fits.
SvCalibration calibrate_sv(int orbit_cap = 10000);

// kappa * raw_sv_average over the orbit of the double cover (with involution).
Rational sv_term(const OrbitGraph& g, const Rational& kappa);

struct EKZReport {
  Stratum stratum;
  int n = 0;
  Rational kappa_term, pole_term, sv_term, lyap_sum;
  // (2g - 2, sum m/(m+2), residual) with n = sum of the three.
  Rational two_g_minus_two, zero_term, residual;
  // Set when lyap_sum == 0: 2g-2 <= zero_term + 2g-2 <= n.
  std::optional<std::array<Rational, 3>> bound_chain;
  // residual == 12 * sv_term; by algebra this holds whenever lyap_sum == 0.
  bool residual_is_12_sv = false;
};

// Throws PreconditionError for abelian strata or when n differs from the
// stratum's pole count.
EKZReport ekz_sum(const Stratum& s, int n, const Rational& sv);

// The whole exact channel for one pillow cover: orbit, sv term, EKZ sum.
struct ExactChannel {
  EKZReport report;
  int orbit_size = 0;
  Rational raw_sv;
};

ExactChannel exact_channel(const PillowCover& p, const Rational& kappa, int orbit_cap = 10000);

}  // namespace flatdeg
