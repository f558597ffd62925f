#pragma once

#include <gmpxx.h>

#include <string>

namespace lrkit {

using Rational = mpq_class;

/// Exact conversion; every finite double is a dyadic rational.
inline Rational exact(double value) {
  Rational r(value);
  r.canonicalize();
  return r;
}

inline double to_double(const Rational& r) { return r.get_d(); }

inline std::string to_string(const Rational& r) { return r.get_str(); }

}  // namespace lrkit
