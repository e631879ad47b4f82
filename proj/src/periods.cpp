#include "csperiod/periods.hpp"

#include <algorithm>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace csp {

namespace {

constexpr unsigned long kChunk = 16;

// Partial sum over j in [lo, hi) of (D|j) log Γ(j/|D|).
Real sum_chunk(long D, unsigned long absD, unsigned long lo, unsigned long hi,
               const PrecisionContext& ctx) {
  Real acc = Real::from_long(0, ctx);
  for (unsigned long j = lo; j < hi; ++j) {
    int chi = kronecker(D, static_cast<long>(j));
    if (chi == 0) continue;
    Real lg = log_gamma(mpq_class(j, absD), ctx);
    if (chi > 0)
      acc += lg;
    else
      acc -= lg;
  }
  return acc;
}

}  // namespace

Real chi_log_gamma_sum(const Discriminant& D, const PrecisionContext& ctx,
                       EvalPolicy policy) {
  unsigned long absD = D.abs_value();
  unsigned long nchunks = (absD + kChunk - 1) / kChunk;
  std::vector<Real> partial(nchunks);

  if (policy == EvalPolicy::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long c = 0; c < static_cast<long>(nchunks); ++c) {
      unsigned long lo = static_cast<unsigned long>(c) * kChunk + 1;
      unsigned long hi = std::min(lo + kChunk, absD + 1);
      partial[static_cast<size_t>(c)] = sum_chunk(D.value(), absD, lo, hi, ctx);
    }
  } else {
    for (long c = 0; c < static_cast<long>(nchunks); ++c) {
      unsigned long lo = static_cast<unsigned long>(c) * kChunk + 1;
      unsigned long hi = std::min(lo + kChunk, absD + 1);
      partial[static_cast<size_t>(c)] = sum_chunk(D.value(), absD, lo, hi, ctx);
    }
  }

  // combine in fixed chunk order regardless of policy
  Real total = Real::from_long(0, ctx);
  for (size_t c = 0; c < nchunks; ++c) total += partial[c];
  return total;
}

Real omega(const Discriminant& D, const PrecisionContext& ctx,
           EvalPolicy policy) {
  Real s = chi_log_gamma_sum(D, ctx, policy);
  int h = class_number(D);
  Real expo = exp(div_ui(s, static_cast<unsigned long>(h)));
  Real front = div_ui(mul_mpz(Real::pi(ctx), mpz_class(2)), D.abs_value());
  return front * expo;
}

PeriodValues span_values(const Discriminant& D, long d,
                         const PrecisionContext& ctx, EvalPolicy policy) {
  if (d <= 0) throw InvalidInput("span_values requires d > 0");
  PeriodValues pv;
  pv.omega = omega(D, ctx, policy);
  Real pi = Real::pi(ctx);
  Real sqrt_d = sqrt(Real::from_long(d, ctx));
  pv.pi_sqrt_d = pi * sqrt_d;
  pv.omega_over_pi = pv.omega / pi;
  pv.pi_over_omega = pi / pv.omega;
  pv.span[0] = Real::from_long(1, ctx);
  pv.span[1] = sqrt_d * pv.omega / (pi * pi);
  pv.span[2] = sqrt_d / pi;
  pv.span[3] = sqrt_d / pv.omega;
  return pv;
}

}  // namespace csp
