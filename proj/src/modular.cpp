#include "csperiod/modular.hpp"

#include <algorithm>

#include "csperiod/hypergeom.hpp"

namespace csp {

namespace {

constexpr mpfr_prec_t kMagPrec = 32;

// Envelope constant for E2/E4/E6: |c_m| <= 525 (m+1)^5 since
// 504 σ5(m) <= 504 ζ(5) m^5 < 525 (m+1)^5 (and likewise for σ1, σ3).
const long kEisK = 525;
constexpr int kEisP = 5;

// upper bound of |q| from a ball
void q_ub(mpfr_t out, const Real& q) {
  mpfr_abs(out, q.value(), MPFR_RNDU);
  mpfr_add(out, out, q.err(), MPFR_RNDU);
}

// Tail bound  Σ_{m>M} K (m+1)^p x^m  <=  K (M+2)^p x^(M+1) / (1 - ρ),
// ρ = x e^(p/(M+2)), valid when ρ < 1.  Returns false if ρ >= 1.
bool tail_bound(mpfr_t out, const mpz_class& K, int p, mpfr_srcptr x,
                long M) {
  mpfr_t rho, t;
  mpfr_init2(rho, kMagPrec);
  mpfr_init2(t, kMagPrec);
  // ρ = x * e^(p/(M+2))
  mpfr_set_ui(t, static_cast<unsigned long>(p), MPFR_RNDU);
  mpfr_div_ui(t, t, static_cast<unsigned long>(M + 2), MPFR_RNDU);
  mpfr_exp(t, t, MPFR_RNDU);
  mpfr_mul(rho, x, t, MPFR_RNDU);
  if (mpfr_cmp_ui(rho, 1) >= 0) {
    mpfr_clear(rho);
    mpfr_clear(t);
    return false;
  }
  mpfr_ui_sub(rho, 1, rho, MPFR_RNDD);  // 1 - ρ, rounded down

  mpfr_set_ui(t, static_cast<unsigned long>(M + 2), MPFR_RNDU);
  mpfr_pow_ui(t, t, static_cast<unsigned long>(p), MPFR_RNDU);
  mpfr_mul_z(t, t, K.get_mpz_t(), MPFR_RNDU);
  mpfr_div(t, t, rho, MPFR_RNDU);

  mpfr_t xp;
  mpfr_init2(xp, kMagPrec);
  mpfr_pow_ui(xp, x, static_cast<unsigned long>(M + 1), MPFR_RNDU);
  mpfr_mul(out, t, xp, MPFR_RNDU);

  mpfr_clear(rho);
  mpfr_clear(t);
  mpfr_clear(xp);
  return true;
}

}  // namespace

QSeries eisenstein(int k, long order) {
  if (k != 2 && k != 4 && k != 6)
    throw InvalidInput("Eisenstein weight must be 2, 4, or 6");
  if (order < 0) throw InvalidInput("series order must be >= 0");
  long mult = (k == 2) ? -24 : (k == 4 ? 240 : -504);
  unsigned long kp = static_cast<unsigned long>(k - 1);

  QSeries s;
  s.c.assign(static_cast<size_t>(order) + 1, mpz_class(0));
  s.c[0] = 1;
  // divisor-power sums by sieving
  for (long d = 1; d <= order; ++d) {
    mpz_class dp;
    mpz_ui_pow_ui(dp.get_mpz_t(), static_cast<unsigned long>(d), kp);
    dp *= mult;
    for (long m = d; m <= order; m += d) s.c[static_cast<size_t>(m)] += dp;
  }
  s.K = kEisK;
  s.p = kEisP;
  return s;
}

QSeries qs_add(const QSeries& a, const QSeries& b) {
  QSeries r;
  size_t n = std::min(a.c.size(), b.c.size());
  r.c.resize(n);
  for (size_t i = 0; i < n; ++i) r.c[i] = a.c[i] + b.c[i];
  r.K = a.K + b.K;
  r.p = std::max(a.p, b.p);
  return r;
}

QSeries qs_sub(const QSeries& a, const QSeries& b) {
  QSeries r;
  size_t n = std::min(a.c.size(), b.c.size());
  r.c.resize(n);
  for (size_t i = 0; i < n; ++i) r.c[i] = a.c[i] - b.c[i];
  r.K = a.K + b.K;
  r.p = std::max(a.p, b.p);
  return r;
}

QSeries qs_mul(const QSeries& a, const QSeries& b) {
  QSeries r;
  size_t n = std::min(a.c.size(), b.c.size());
  r.c.assign(n, mpz_class(0));
  for (size_t i = 0; i < n; ++i) {
    if (sgn(a.c[i]) == 0) continue;
    for (size_t j = 0; i + j < n; ++j) r.c[i + j] += a.c[i] * b.c[j];
  }
  // Σ_{i+j=m} K_a(i+1)^pa K_b(j+1)^pb <= K_a K_b (m+1)^(pa+pb+1)
  r.K = a.K * b.K;
  r.p = a.p + b.p + 1;
  return r;
}

QSeries qs_scale(const QSeries& a, const mpz_class& t) {
  QSeries r = a;
  for (auto& x : r.c) x *= t;
  r.K = a.K * abs(t);
  return r;
}

QSeries qs_theta(const QSeries& a) {
  QSeries r = a;
  for (size_t m = 0; m < r.c.size(); ++m)
    r.c[m] *= static_cast<unsigned long>(m);
  r.K = a.K;
  r.p = a.p + 1;  // m |c_m| <= K (m+1)^(p+1)
  return r;
}

Real eval_qseries(const QSeries& s, const Real& q, const PrecisionContext& ctx) {
  if (s.c.empty()) throw InvalidInput("empty series");
  mpfr_t x, half;
  mpfr_init2(x, kMagPrec);
  mpfr_init2(half, kMagPrec);
  q_ub(x, q);
  mpfr_set_ui_2exp(half, 1, -1, MPFR_RNDN);
  if (mpfr_cmp(x, half) >= 0) {
    mpfr_clear(x);
    mpfr_clear(half);
    throw InvalidInput("series evaluation requires |q| < 1/2");
  }
  mpfr_clear(half);

  // Horner from the top coefficient
  long M = s.order();
  Real val = Real::from_mpz(s.c[static_cast<size_t>(M)], ctx);
  for (long m = M - 1; m >= 0; --m) {
    val *= q;
    val += Real::from_mpz(s.c[static_cast<size_t>(m)], ctx);
  }

  if (sgn(s.K) != 0) {
    mpfr_t bound, target;
    mpfr_init2(bound, kMagPrec);
    mpfr_init2(target, kMagPrec);
    mpfr_set_ui(target, 10, MPFR_RNDU);
    mpfr_pow_si(target, target, ctx.target_exp10(), MPFR_RNDD);
    bool ok = tail_bound(bound, s.K, s.p, x, M) &&
              mpfr_cmp(bound, target) < 0;
    if (!ok) {
      mpfr_clear(bound);
      mpfr_clear(target);
      mpfr_clear(x);
      throw InsufficientPrecision(
          "series truncation order too small for the requested precision");
    }
    val.add_err(bound);
    mpfr_clear(bound);
    mpfr_clear(target);
  }
  mpfr_clear(x);
  return val;
}

long required_order(const mpz_class& K, int p, const Real& q,
                    long target_exp10) {
  mpfr_t x, bound, target;
  mpfr_init2(x, kMagPrec);
  mpfr_init2(bound, kMagPrec);
  mpfr_init2(target, kMagPrec);
  q_ub(x, q);
  mpfr_set_ui(target, 10, MPFR_RNDU);
  mpfr_pow_si(target, target, target_exp10, MPFR_RNDD);
  long M = 8;
  for (; M <= 100000000; M += std::max(1L, M / 8)) {
    if (tail_bound(bound, K, p, x, M) && mpfr_cmp(bound, target) < 0) break;
  }
  mpfr_clear(x);
  mpfr_clear(bound);
  mpfr_clear(target);
  if (M > 100000000)
    throw InsufficientPrecision("no adequate truncation order found");
  return M;
}

CMPoint make_cm_point(long D, const PrecisionContext& ctx) {
  if (D >= 0) throw InvalidInput("CM point requires D < 0");
  long r = ((D % 4) + 4) % 4;
  if (r != 0 && r != 1)
    throw InvalidInput("CM point requires D ≡ 0 or 1 (mod 4)");
  CMPoint t;
  t.D = D;
  t.b = (r == 1) ? 1 : 0;
  Real pisd = Real::pi(ctx) * sqrt(Real::from_long(-D, ctx));
  t.q = exp(-pisd);
  if (t.b == 1) t.q = -t.q;
  return t;
}

Real eval_eisenstein(int k, const CMPoint& tau, const PrecisionContext& ctx) {
  long M = required_order(kEisK, kEisP, tau.q, ctx.target_exp10());
  return eval_qseries(eisenstein(k, M), tau.q, ctx);
}

Real j_invariant(const CMPoint& tau, const PrecisionContext& ctx) {
  long M = required_order(kEisK, kEisP, tau.q, ctx.target_exp10());
  Real e4 = eval_qseries(eisenstein(4, M), tau.q, ctx);
  Real e6 = eval_qseries(eisenstein(6, M), tau.q, ctx);
  Real e43 = pow_si(e4, 3);
  Real den = e43 - pow_si(e6, 2);
  if (den.contains_zero())
    throw InsufficientPrecision(
        "j denominator E4^3 - E6^2 indistinguishable from zero");
  return mul_mpz(e43, mpz_class(1728)) / den;
}

F0Check check_f0_sqrt_e4(const CMPoint& tau, const PrecisionContext& ctx) {
  long M = required_order(kEisK, kEisP, tau.q, ctx.target_exp10());
  Real e4 = eval_qseries(eisenstein(4, M), tau.q, ctx);
  Real e6 = eval_qseries(eisenstein(6, M), tau.q, ctx);
  Real e43 = pow_si(e4, 3);
  Real den = e43 - pow_si(e6, 2);
  if (den.contains_zero())
    throw InsufficientPrecision(
        "j denominator E4^3 - E6^2 indistinguishable from zero");
  F0Check out;
  out.j = mul_mpz(e43, mpz_class(1728)) / den;
  Real z = Real::from_long(1728, ctx) / out.j;
  HyperParams p{mpq_class(1, 6), 0};
  out.f0 = eval_at(p, z, ctx);
  out.sqrt_e4 = sqrt(e4);
  out.residual = abs(out.f0 - out.sqrt_e4);
  return out;
}

}  // namespace csp
