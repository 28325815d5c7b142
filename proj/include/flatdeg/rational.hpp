#pragma once

#include <gmpxx.h>

#include <string>

namespace flatdeg {

using Rational = mpq_class;

// Always "p/q", so zero prints as "0/1".
inline std::string to_string(const Rational& r) {
  Rational c = r;
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

Rational parse_rational(const std::string& s);

}  // namespace flatdeg
