#pragma once

#include <string>

#include "csperiod/precision.hpp"

namespace tu {

// Certifies |x - oracle| < 10^exp10 from the balls themselves: the oracle
// literal is parsed into a one-ulp ball at 400 digits, so the check fails
// only when the enclosures genuinely disagree.
inline bool close_to(const csp::Real& x, const std::string& oracle,
                     long exp10) {
  csp::PrecisionContext wide(400);
  csp::Real d = x - csp::Real::from_decimal(oracle, wide);
  return abs(d).abs_upper_below_pow10(exp10);
}

// Ball-overlap check: both enclose the same exact quantity.
inline bool overlaps(const csp::Real& a, const csp::Real& b) {
  return (a - b).contains_zero();
}

}  // namespace tu
