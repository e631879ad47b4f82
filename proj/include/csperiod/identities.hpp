#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "csperiod/periods.hpp"
#include "csperiod/precision.hpp"

namespace csp {

// One catalog case.  For each derivative level `which` the identity reads
//   Σ_i rel<which>[i] · f_i(1/Z)  =  k<which> · target(which)
// with target(0) = √d·Ω/π², target(1) = √d/π, target(2) = √d/Ω.
struct CaseRecord {
  long D;
  long d;
  mpq_class s;
  mpz_class Z;
  int h;
  std::vector<mpz_class> rel0;  // (a₀)
  mpz_class k0;
  std::vector<mpz_class> rel1;  // (a₁, b₁)
  mpz_class k1;
  std::vector<mpz_class> rel2;  // (a₂, b₂, c₂)
  mpz_class k2;
  // Linear-form exponent, printed to 8 decimals and truncated (the true
  // constant has an unknown tail in [0, 10^-8)).
  std::string mu_printed;

  const std::vector<mpz_class>& rel(int which) const;
  const mpz_class& k(int which) const;
  mpq_class mu_lower() const;  // the printed value, exactly
  mpq_class mu_upper() const;  // printed + 10^-8, a strict upper bound
};

// The four hard-coded cases, in fixed order (-148, -232, -267, -163).
const std::vector<CaseRecord>& catalog();
// Lookup by discriminant; throws InvalidInput for an unknown case.
const CaseRecord& catalog_case(long D);
// Canonical serialization of all catalog integers (for regression locking).
std::string catalog_fingerprint();

struct IdentityResidual {
  long D;
  long d;
  int which;
  int digits;
  Real lhs;
  Real rhs;
  Real residual;      // |lhs - rhs|
  Real rel_residual;  // residual / |rhs|
  long tolerance_exp10;
  bool pass;  // rel_residual.value + rel_residual.err < 10^tolerance_exp10
};

// Verifies one appendix identity numerically: lhs from the hypergeometric
// side, rhs from the period side.  Requires ctx.digits >= 100.
IdentityResidual verify_identity(const CaseRecord& rec, int which,
                                 const PrecisionContext& ctx,
                                 EvalPolicy policy = EvalPolicy::Parallel);

// Linear-form probe over the box max|m_k| <= height for the form
//   m₀ + m₁·π√d + m₂·Ω/π + m₃·π/Ω.
// For each sign class one representative is enumerated (first nonzero of
// (m₁,m₂,m₃) positive, or (m₀>0,0,0,0)).
struct ProbeSlice {
  Real min_form;        // ball around the minimal |form|
  long argmin[4];       // its quadruple, canonical sign
  long argmin_height;   // max |m_k| of the argmin
  Real bound;           // argmin_height^(1 - mu_upper - eps)
  bool bound_satisfied; // min_form > bound, certified
  // sign classes whose |form| provably drops below their own height's
  // bound — expected at small heights where the theorem's asymptotic
  // threshold has not kicked in; diagnostic only
  long below_threshold_count;
};

struct ProbeReport {
  long D;
  long d;
  long height;
  mpq_class eps;
  int digits;
  ProbeSlice full;     // all quadruples
  ProbeSlice m1_zero;  // m₁ = 0 slice (nonquadraticity of Ω/π)
  std::string method;  // "exhaustive" or "lattice"
};

// Probes the lower bound: exhaustive enumeration for height <= 50 (search
// budget); above that, lattice reduction of the scaled embedding proposes
// candidate minimal forms ("lattice" method — a candidate search, not an
// exhaustive minimum).  Throws InsufficientPrecision if the minimal form
// cannot be separated from zero or a bound comparison is ambiguous at this
// precision.
ProbeReport probe_linear_forms(const CaseRecord& rec, long height,
                               const mpq_class& eps,
                               const PrecisionContext& ctx,
                               EvalPolicy policy = EvalPolicy::Parallel);

}  // namespace csp
