#pragma once

#include <gmpxx.h>

#include <array>
#include <vector>

#include "csperiod/precision.hpp"

namespace csp {

// Linear-form simultaneous Padé data for the system (1, f0, f1, f2):
//   R(z) = A0(z) + A1(z) f0(z) + A2(z) f1(z) + A3(z) f2(z) = O(z^sigma),
// with deg A_k <= degrees[k] and sigma = sum(deg_k + 1) - 1 over present
// slots.  degrees[k] = -1 marks slot k absent (A_k = 0).
struct PadeForm {
  mpq_class s;
  std::array<int, 4> degrees{};
  // polys[k][j] = integer coefficient of z^j in A_k; empty when absent.
  // Cleared to coprime integers, first nonzero coefficient positive.
  std::array<std::vector<mpz_class>, 4> polys;
  long sigma = 0;       // forced vanishing order
  long order = 0;       // achieved vanishing order, verified exactly
  bool unique = false;  // nullspace dimension was exactly 1
};

// Solves the homogeneous linear system forcing the first sigma series
// coefficients of R to vanish, exactly over the rationals (fraction-free
// echelon elimination), and clears the solution to coprime integers.
// Requires sum(deg_k + 1) >= 2 over present slots.
PadeForm construct(const mpq_class& s, const std::array<int, 4>& degrees);

struct DecayRow {
  long n = 0;
  long sigma = 0;
  long order = 0;
  double log10_remainder = 0.0;   // midpoint log10 |R_n(1/Z)|
  double log10_coeff_norm = 0.0;  // log10 of max |integer coefficient|
  bool resolved = false;          // remainder ball separated from zero
  bool consistent = false;        // series-tail and combo routes overlap
};

struct DecayReport {
  mpq_class s;
  mpz_class Z;
  long N = 0;
  long digits = 0;
  std::vector<DecayRow> rows;
  double slope_log10_remainder = 0.0;  // least-squares slope vs n
  double slope_log10_coeff = 0.0;
  bool strictly_decreasing = false;    // |R_n(1/Z)| decreasing in n
};

// For degrees (n, n, n, n), n = 1..N: evaluates |R_n(1/Z)| by the exact
// series tail (relative-precision stopping) and cross-checks against the
// polynomial-combination route; reports per-n magnitudes and fitted rates.
// Requires |Z| >= 2.
DecayReport remainder_decay(const mpq_class& s, long N, const mpz_class& Z,
                            const PrecisionContext& ctx);

}  // namespace csp
