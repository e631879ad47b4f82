#pragma once

#include <gmpxx.h>

#include "csperiod/precision.hpp"

namespace csp {

// Parameters for the family f_i(z) = (z d/dz)^i F(z), where
// F(z) = Σ_n (s)_n (1/2)_n (1-s)_n / n!^3 · z^n.
// Requires 0 < s <= 1/2 and i in {0, 1, 2}.
struct HyperParams {
  mpq_class s;
  int i = 0;
};

void validate_params(const HyperParams& p);

// Exact series coefficient of z^n in f_i: (s)_n (1/2)_n (1-s)_n / n!^3 · n^i.
mpq_class coeff(const HyperParams& p, unsigned long n);

// Streams the base coefficients b_n = (s)_n (1/2)_n (1-s)_n / n!^3 via the
// one-term recurrence b_{n+1} = b_n (n+s)(n+1/2)(n+1-s)/(n+1)^3.
class CoeffStream {
 public:
  explicit CoeffStream(const mpq_class& s);
  const mpq_class& value() const { return b_; }  // b_n
  unsigned long index() const { return n_; }
  void advance();

 private:
  mpq_class s_;
  mpq_class b_;
  unsigned long n_;
};

// f_i(1/Z) for integer |Z| >= 2, with a rigorous truncation bound folded
// into the result's error.
Real eval(const HyperParams& p, const mpz_class& Z, const PrecisionContext& ctx);

// f_i(z) for a ball argument with |z| bounded away from 1; requires
// ub(|z|) <= 1/2.
Real eval_at(const HyperParams& p, const Real& z, const PrecisionContext& ctx);

}  // namespace csp
