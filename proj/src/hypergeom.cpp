#include "csperiod/hypergeom.hpp"

namespace csp {

namespace {
constexpr mpfr_prec_t kMagPrec = 32;
}  // namespace

void validate_params(const HyperParams& p) {
  if (sgn(p.s) <= 0 || cmp(p.s, mpq_class(1, 2)) > 0)
    throw InvalidInput("hypergeometric parameter s must satisfy 0 < s <= 1/2");
  if (p.i < 0 || p.i > 2)
    throw InvalidInput("derivative order i must be 0, 1, or 2");
}

CoeffStream::CoeffStream(const mpq_class& s) : s_(s), b_(1), n_(0) {}

void CoeffStream::advance() {
  // b_{n+1} = b_n (n+s)(n+1/2)(n+1-s)/(n+1)^3
  mpq_class n(static_cast<unsigned long>(n_));
  mpq_class num = (n + s_) * (n + mpq_class(1, 2)) * (n + 1 - s_);
  mpq_class den = (n + 1) * (n + 1) * (n + 1);
  b_ *= num / den;
  b_.canonicalize();
  ++n_;
}

mpq_class coeff(const HyperParams& p, unsigned long n) {
  validate_params(p);
  CoeffStream cs(p.s);
  while (cs.index() < n) cs.advance();
  mpq_class c = cs.value();
  if (p.i > 0) {
    mpz_class npow;
    mpz_ui_pow_ui(npow.get_mpz_t(), n, static_cast<unsigned long>(p.i));
    c *= npow;
  }
  return c;
}

Real eval_at(const HyperParams& p, const Real& z, const PrecisionContext& ctx) {
  validate_params(p);

  mpfr_t x_ub, target, bound, half;
  mpfr_init2(x_ub, kMagPrec);
  mpfr_init2(target, kMagPrec);
  mpfr_init2(bound, kMagPrec);
  mpfr_init2(half, kMagPrec);
  mpfr_abs(x_ub, z.value(), MPFR_RNDU);
  mpfr_add(x_ub, x_ub, z.err(), MPFR_RNDU);
  mpfr_set_ui_2exp(half, 1, -1, MPFR_RNDN);
  if (mpfr_cmp(x_ub, half) > 0) {
    mpfr_clear(x_ub);
    mpfr_clear(target);
    mpfr_clear(bound);
    mpfr_clear(half);
    throw InvalidInput("series argument must satisfy |z| <= 1/2");
  }
  mpfr_set_ui(target, 10, MPFR_RNDU);
  mpfr_pow_si(target, target, ctx.target_exp10(), MPFR_RNDD);

  Real sum = Real::from_long(0, ctx);
  Real zpow = Real::from_long(1, ctx);
  CoeffStream cs(p.s);

  for (unsigned long n = 0; n <= 4000000; ++n) {
    mpq_class c = cs.value();
    if (p.i > 0) {
      mpz_class npow;
      mpz_ui_pow_ui(npow.get_mpz_t(), n, static_cast<unsigned long>(p.i));
      c *= npow;
    }
    if (sgn(c) != 0) sum += Real::from_mpq(c, ctx) * zpow;

    // base coefficients are <= 1 and the derivative weight is <= n², so
    // Σ_{m>n} m² x^m dominates the tail
    tail_sum_quadratic(bound, x_ub, n);
    if (mpfr_cmp(bound, target) < 0) {
      sum.add_err(bound);
      mpfr_clear(x_ub);
      mpfr_clear(target);
      mpfr_clear(bound);
      mpfr_clear(half);
      return sum;
    }
    zpow *= z;
    cs.advance();
  }
  mpfr_clear(x_ub);
  mpfr_clear(target);
  mpfr_clear(bound);
  mpfr_clear(half);
  throw InsufficientPrecision("hypergeometric series did not converge");
}

Real eval(const HyperParams& p, const mpz_class& Z, const PrecisionContext& ctx) {
  if (cmp(abs(Z), 2) < 0)
    throw InvalidInput("series evaluation requires an integer |Z| >= 2");
  mpq_class z(mpz_class(1), Z);
  z.canonicalize();
  return eval_at(p, Real::from_mpq(z, ctx), ctx);
}

}  // namespace csp
