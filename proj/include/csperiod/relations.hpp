#pragma once

#include <gmpxx.h>

#include <variant>
#include <vector>

#include "csperiod/precision.hpp"

namespace csp {

using LatticeRow = std::vector<mpz_class>;
using LatticeBasis = std::vector<LatticeRow>;

// Lenstra–Lenstra–Lovász reduction over exact integers (Cohen's integral
// variant: all Gram–Schmidt data kept as integers d[], lambda[][]).
//
// Requires >= 2 rows of equal dimension, linearly independent; delta in
// (1/4, 1), default 3/4.  Returns a size-reduced basis satisfying the Lovász
// condition and spanning the same lattice.  If change_of_basis is non-null it
// receives the unimodular matrix U with U * input = output (as rows).
LatticeBasis lll_reduce(LatticeBasis basis,
                        const mpq_class& delta = mpq_class(3, 4),
                        LatticeBasis* change_of_basis = nullptr);

// Exact determinant of a square integer matrix (fraction-free Bareiss).
mpz_class determinant(LatticeBasis a);

// Divides by the gcd and flips sign so the leading nonzero entry is positive.
// m must contain at least one nonzero entry.
void normalize_relation(std::vector<mpz_class>& m);

struct IntegerRelation {
  std::vector<mpz_class> m;  // gcd 1, leading nonzero entry positive
  Real residual;             // |sum m_k x_k| recomputed from the input balls
  long confidence;           // ~digits of norm margin to the next lattice row
};

// Certified negative result: every integer vector with 0 < max|m_k| <=
// 10^max_coeff_digits satisfies |sum m_k x_k| > exclusion_threshold.
struct NoRelation {
  long max_coeff_digits;
  Real exclusion_threshold;
};

using FindResult = std::variant<IntegerRelation, NoRelation>;

// Searches for an integer relation among xs with coefficients bounded by
// 10^max_coeff_digits, via the scaled-column lattice embedding
// rows_k = (e_k | round(x_k * 10^{digits-guard})) reduced by LLL.
//
// Requires len(xs) >= 2 and ctx.digits >= 2 * len(xs) * max_coeff_digits + 40;
// each input ball must be accurate to the embedding scale.  Throws
// InsufficientPrecision when neither a relation nor an exclusion bound can be
// certified.
FindResult find_relation(const std::vector<Real>& xs, long max_coeff_digits,
                         const PrecisionContext& ctx);

}  // namespace csp
