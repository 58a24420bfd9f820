#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <string>

namespace nodalkit {

/// Arbitrary-precision rational scalar used by the exact analysis backend.
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& x) { return static_cast<double>(x); }
inline double to_double(double x) { return x; }

/// Best rational approximation p/q of x with q <= max_den (continued
/// fractions). Returns false when the approximation misses by more than tol.
inline bool rationalize(double x, long long max_den, double tol, Rational& out) {
  if (!std::isfinite(x)) return false;
  using Int = boost::multiprecision::cpp_int;
  double val = x;
  Int p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  for (int it = 0; it < 64; ++it) {
    double fl = std::floor(val);
    if (fl > 9e17 || fl < -9e17) break;
    Int a = static_cast<long long>(fl);
    Int p2 = a * p1 + p0;
    Int q2 = a * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    double frac = val - fl;
    if (frac < 1e-15) break;
    val = 1.0 / frac;
  }
  if (q1 == 0) return false;
  Rational cand(p1, q1);
  if (std::abs(to_double(cand) - x) > tol) return false;
  out = cand;
  return true;
}

}  // namespace nodalkit
