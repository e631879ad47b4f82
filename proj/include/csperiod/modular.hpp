#pragma once

#include <gmpxx.h>

#include <vector>

#include "csperiod/precision.hpp"

namespace csp {

// Truncated q-expansion with exact integer coefficients c[m] of q^m, plus a
// proven coefficient envelope |c_m| <= K*(m+1)^p valid for ALL m (including
// past the stored order), used to bound evaluation tails.  K = 0 marks an
// exact polynomial (no tail).
struct QSeries {
  std::vector<mpz_class> c;
  mpz_class K = 0;
  int p = 0;

  long order() const { return static_cast<long>(c.size()) - 1; }
};

// Level-one Eisenstein series E_k, k in {2, 4, 6}, through q^order:
// E2 = 1 - 24 Σ σ1(m) q^m, E4 = 1 + 240 Σ σ3(m) q^m, E6 = 1 - 504 Σ σ5(m) q^m.
QSeries eisenstein(int k, long order);

// Exact series arithmetic; results are truncated to the shorter operand and
// coefficient envelopes are propagated.
QSeries qs_add(const QSeries& a, const QSeries& b);
QSeries qs_sub(const QSeries& a, const QSeries& b);
QSeries qs_mul(const QSeries& a, const QSeries& b);
QSeries qs_scale(const QSeries& a, const mpz_class& t);
QSeries qs_theta(const QSeries& a);  // q d/dq

// Evaluates the truncated series at a ball argument with |q| < 1/2, folding
// a tail bound from the coefficient envelope into the error.  Throws
// InsufficientPrecision when the stored order is too small for the target.
Real eval_qseries(const QSeries& s, const Real& q, const PrecisionContext& ctx);

// Smallest truncation order whose envelope tail bound at |q| <= x_ub drops
// below 10^target_exp10.  x_ub is read from a ball's value+err.
long required_order(const mpz_class& K, int p, const Real& q, long target_exp10);

// CM point τ = (b + sqrt(D))/2 for D < 0, D ≡ 0,1 (mod 4); the associated
// nome is q = (-1)^b exp(-π sqrt(|D|)).
struct CMPoint {
  long D;
  int b;
  Real q;
};

CMPoint make_cm_point(long D, const PrecisionContext& ctx);

// E_k at a CM point, with the truncation order chosen adaptively.
Real eval_eisenstein(int k, const CMPoint& tau, const PrecisionContext& ctx);

// j(τ) = 1728 E4^3 / (E4^3 - E6^2); throws InsufficientPrecision when the
// denominator ball cannot be separated from zero.
Real j_invariant(const CMPoint& tau, const PrecisionContext& ctx);

// The hypergeometric side-check at a CM point: evaluates
// F(1728/j(τ)) with parameter s = 1/6 against sqrt(E4(τ)).
struct F0Check {
  Real j;
  Real f0;       // F(1728/j)
  Real sqrt_e4;  // E4(τ)^(1/2)
  Real residual; // |f0 - sqrt_e4|
};

F0Check check_f0_sqrt_e4(const CMPoint& tau, const PrecisionContext& ctx);

}  // namespace csp
