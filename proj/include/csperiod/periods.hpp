#pragma once

#include "csperiod/numtheory.hpp"
#include "csperiod/precision.hpp"

namespace csp {

enum class EvalPolicy { Serial, Parallel };

// Sum over j = 1..|D| of (D|j) * log Γ(j/|D|).  Evaluated in fixed-size
// chunks whose partial sums are combined in index order, so the serial and
// parallel policies produce bit-identical results.
Real chi_log_gamma_sum(const Discriminant& D, const PrecisionContext& ctx,
                       EvalPolicy policy = EvalPolicy::Parallel);

// The period Ω_D = (2π/|D|) * (∏_j Γ(j/|D|)^(D|j))^(1/h(D)), via the
// exp of the chi-weighted log-gamma sum divided by the class number.
Real omega(const Discriminant& D, const PrecisionContext& ctx,
           EvalPolicy policy = EvalPolicy::Parallel);

// The four quantities spanned by the linear forms for a catalog case with
// discriminant D = -4d or D ≡ 1 (mod 4), d = |D| or |D|/4 as appropriate:
// basis (1, π√d, Ω/π, π/Ω) plus the scaled variant (1, √d·Ω/π², √d/π, √d/Ω).
struct PeriodValues {
  Real omega;
  Real pi_sqrt_d;      // π√d
  Real omega_over_pi;  // Ω/π
  Real pi_over_omega;  // π/Ω
  Real span[4];        // (1, √d·Ω/π², √d/π, √d/Ω)
};

PeriodValues span_values(const Discriminant& D, long d,
                         const PrecisionContext& ctx,
                         EvalPolicy policy = EvalPolicy::Parallel);

}  // namespace csp
