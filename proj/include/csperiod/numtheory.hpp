#pragma once

#include <gmpxx.h>

#include "csperiod/precision.hpp"

namespace csp {

// A validated negative fundamental discriminant: D < 0, D ≡ 0 or 1 (mod 4),
// and either D ≡ 1 (mod 4) with D square-free, or D = 4m with m square-free
// and m ≡ 2 or 3 (mod 4).
class Discriminant {
 public:
  // Validates and wraps D; throws InvalidInput with a reason naming the
  // failed requirement (positivity, residue class, square-freeness).
  static Discriminant validate(long D);

  long value() const { return d_; }
  unsigned long abs_value() const { return static_cast<unsigned long>(-d_); }

 private:
  explicit Discriminant(long d) : d_(d) {}
  long d_;
};

// Kronecker symbol (D|n), totally multiplicative in n, defined for all
// integers n including 0 and negatives.
int kronecker(long D, long n);

// Class number h(D) by counting reduced binary quadratic forms
// ax^2 + bxy + cy^2 of discriminant D: b^2 - 4ac = D, |b| <= a <= c,
// gcd(a,b,c) = 1, with b >= 0 whenever |b| = a or a = c.
int class_number(const Discriminant& D);

// Same count for any D < 0 with D ≡ 0,1 (mod 4) (not necessarily
// fundamental); used by oracle cross-checks.
int form_class_count(long D);

}  // namespace csp
