#pragma once

#include <stdexcept>
#include <string>

namespace flatdeg {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input surfaces that are not connected.
struct ConnectivityError : Error { using Error::Error; };
// Monodromy tuples violating the product relation.
struct MonodromyError : Error { using Error::Error; };
// Invalid cyclic cover datum (N, a1..a4).
struct DatumError : Error { using Error::Error; };
// Invalid locus specification.
struct SpecError : Error { using Error::Error; };
// Coincident points in a base differential or curve.
struct GeometryError : Error { using Error::Error; };
// A configured resource cap was exceeded.
struct ResourceError : Error { using Error::Error; };
// No single Siegel-Veech normalization fits the calibration cases.
struct CalibrationError : Error { using Error::Error; };
// Quadrature non-convergence or loss of positivity.
struct NumericalError : Error { using Error::Error; };
struct PreconditionError : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
// An internal invariant failed; always a bug.
struct InternalError : Error { using Error::Error; };

}  // namespace flatdeg
