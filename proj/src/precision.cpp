#include "csperiod/precision.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <vector>

namespace csp {

namespace {

constexpr mpfr_prec_t kMagPrec = 32;  // precision of error-bound fields

// err += one ulp of v, when a rounded operation reported inexactness.
void add_ulp(mpfr_t err, mpfr_srcptr v, int ternary) {
  if (ternary == 0) return;
  mpfr_t u;
  mpfr_init2(u, kMagPrec);
  if (mpfr_zero_p(v)) {
    // Rounded to zero: true result is below the smallest representable
    // magnitude at this exponent range; use a fixed tiny bound.
    mpfr_set_ui_2exp(u, 1, -1000000, MPFR_RNDU);
  } else {
    mpfr_set_ui_2exp(u, 1, mpfr_get_exp(v) - mpfr_get_prec(v), MPFR_RNDU);
  }
  mpfr_add(err, err, u, MPFR_RNDU);
  mpfr_clear(u);
}

// out (kMagPrec) = upper bound of |x|.
void ub_abs(mpfr_t out, mpfr_srcptr x) { mpfr_abs(out, x, MPFR_RNDU); }

// out (kMagPrec) = lower bound of |x|.
void lb_abs(mpfr_t out, mpfr_srcptr x) { mpfr_abs(out, x, MPFR_RNDD); }

// out (kMagPrec) = 10^e rounded in direction rnd.
void pow10_mag(mpfr_t out, long e, mpfr_rnd_t rnd) {
  mpfr_set_ui(out, 10, MPFR_RNDU);
  mpfr_pow_si(out, out, e, rnd);
}

}  // namespace

PrecisionContext::PrecisionContext(int digits, int guard)
    : digits_(digits), guard_(guard) {
  if (digits < 50)
    throw InvalidInput("precision context requires at least 50 digits");
  if (guard < 0) throw InvalidInput("guard digits must be non-negative");
  bits_ = static_cast<mpfr_prec_t>(
              std::ceil((digits_ + guard_) * 3.321928094887362)) +
          64;
}

Real::Real() {
  mpfr_init2(v_, 8);
  mpfr_set_zero(v_, 1);
  mpfr_init2(e_, kMagPrec);
  mpfr_set_zero(e_, 1);
}

Real::Real(mpfr_prec_t prec) {
  mpfr_init2(v_, prec);
  mpfr_set_zero(v_, 1);
  mpfr_init2(e_, kMagPrec);
  mpfr_set_zero(e_, 1);
}

Real::Real(const Real& o) {
  mpfr_init2(v_, mpfr_get_prec(o.v_));
  mpfr_set(v_, o.v_, MPFR_RNDN);
  mpfr_init2(e_, kMagPrec);
  mpfr_set(e_, o.e_, MPFR_RNDU);
}

Real::Real(Real&& o) noexcept {
  mpfr_init2(v_, 8);
  mpfr_init2(e_, kMagPrec);
  mpfr_swap(v_, o.v_);
  mpfr_swap(e_, o.e_);
}

Real& Real::operator=(const Real& o) {
  if (this != &o) {
    mpfr_set_prec(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
    mpfr_set(e_, o.e_, MPFR_RNDU);
  }
  return *this;
}

Real& Real::operator=(Real&& o) noexcept {
  if (this != &o) {
    mpfr_swap(v_, o.v_);
    mpfr_swap(e_, o.e_);
  }
  return *this;
}

Real::~Real() {
  mpfr_clear(v_);
  mpfr_clear(e_);
}

Real Real::from_long(long v, const PrecisionContext& ctx) {
  Real r(ctx.bits());
  mpfr_set_si(r.v_, v, MPFR_RNDN);  // exact: bits() >= 64
  return r;
}

Real Real::from_mpz(const mpz_class& v, const PrecisionContext& ctx) {
  Real r(ctx.bits());
  int t = mpfr_set_z(r.v_, v.get_mpz_t(), MPFR_RNDN);
  add_ulp(r.e_, r.v_, t);
  return r;
}

Real Real::from_mpq(const mpq_class& v, const PrecisionContext& ctx) {
  Real r(ctx.bits());
  int t = mpfr_set_q(r.v_, v.get_mpq_t(), MPFR_RNDN);
  add_ulp(r.e_, r.v_, t);
  return r;
}

Real Real::pi(const PrecisionContext& ctx) {
  Real r(ctx.bits());
  int t = mpfr_const_pi(r.v_, MPFR_RNDN);
  add_ulp(r.e_, r.v_, t);
  return r;
}

Real Real::from_decimal(const std::string& s, const PrecisionContext& ctx) {
  Real r(ctx.bits());
  char* end = nullptr;
  int t = mpfr_strtofr(r.v_, s.c_str(), &end, 10, MPFR_RNDN);
  if (end == s.c_str() || *end != '\0')
    throw InvalidInput("malformed decimal literal: " + s);
  add_ulp(r.e_, r.v_, t);
  return r;
}

bool Real::contains_zero() const { return mpfr_cmpabs(v_, e_) <= 0; }

bool Real::definitely_positive() const {
  return mpfr_sgn(v_) > 0 && mpfr_cmpabs(v_, e_) > 0;
}

bool Real::definitely_negative() const {
  return mpfr_sgn(v_) < 0 && mpfr_cmpabs(v_, e_) > 0;
}

bool Real::err_at_most_pow10(long exp10) const {
  if (mpfr_zero_p(e_)) return true;
  mpfr_t p;
  mpfr_init2(p, 64);
  pow10_mag(p, exp10, MPFR_RNDD);
  bool ok = mpfr_cmp(e_, p) <= 0;
  mpfr_clear(p);
  return ok;
}

bool Real::abs_upper_below_pow10(long exp10) const {
  mpfr_t ub, p;
  mpfr_init2(ub, kMagPrec);
  mpfr_init2(p, kMagPrec);
  mpfr_abs(ub, v_, MPFR_RNDU);
  mpfr_add(ub, ub, e_, MPFR_RNDU);
  pow10_mag(p, exp10, MPFR_RNDD);
  bool ok = mpfr_cmp(ub, p) < 0;
  mpfr_clear(ub);
  mpfr_clear(p);
  return ok;
}

double Real::err_log10() const {
  if (mpfr_zero_p(e_)) return -std::numeric_limits<double>::infinity();
  mpfr_t t;
  mpfr_init2(t, 64);
  mpfr_log10(t, e_, MPFR_RNDN);
  double d = mpfr_get_d(t, MPFR_RNDN);
  mpfr_clear(t);
  return d;
}

double Real::value_log10_abs() const {
  if (mpfr_zero_p(v_)) return -std::numeric_limits<double>::infinity();
  mpfr_t t;
  mpfr_init2(t, 64);
  mpfr_abs(t, v_, MPFR_RNDN);
  mpfr_log10(t, t, MPFR_RNDN);
  double d = mpfr_get_d(t, MPFR_RNDN);
  mpfr_clear(t);
  return d;
}

std::string Real::to_string(int sig) const {
  if (mpfr_zero_p(v_)) return "0";
  if (sig < 2) sig = 2;
  mpfr_exp_t e;
  char* raw = mpfr_get_str(nullptr, &e, 10, static_cast<size_t>(sig), v_,
                           MPFR_RNDN);
  std::string digits(raw);
  mpfr_free_str(raw);
  bool neg = !digits.empty() && digits[0] == '-';
  std::string mant = neg ? digits.substr(1) : digits;
  std::string out = neg ? "-" : "";
  out += mant.substr(0, 1);
  if (mant.size() > 1) out += "." + mant.substr(1);
  out += "e" + std::to_string(static_cast<long>(e - 1));
  return out;
}

std::string Real::err_string() const {
  if (mpfr_zero_p(e_)) return "0";
  mpfr_exp_t e;
  char* raw = mpfr_get_str(nullptr, &e, 10, 2, e_, MPFR_RNDU);
  std::string digits(raw);
  mpfr_free_str(raw);
  std::string out = digits.substr(0, 1) + "." + digits.substr(1);
  out += "e" + std::to_string(static_cast<long>(e - 1));
  return out;
}

Real& Real::operator+=(const Real& o) {
  if (mpfr_get_prec(v_) < mpfr_get_prec(o.v_))
    mpfr_prec_round(v_, mpfr_get_prec(o.v_), MPFR_RNDN);  // exact widening
  int t = mpfr_add(v_, v_, o.v_, MPFR_RNDN);
  mpfr_add(e_, e_, o.e_, MPFR_RNDU);
  add_ulp(e_, v_, t);
  return *this;
}

Real& Real::operator-=(const Real& o) {
  if (mpfr_get_prec(v_) < mpfr_get_prec(o.v_))
    mpfr_prec_round(v_, mpfr_get_prec(o.v_), MPFR_RNDN);
  int t = mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
  mpfr_add(e_, e_, o.e_, MPFR_RNDU);
  add_ulp(e_, v_, t);
  return *this;
}

Real& Real::operator*=(const Real& o) {
  mpfr_t t1, t2;
  mpfr_init2(t1, kMagPrec);
  mpfr_init2(t2, kMagPrec);
  // new err = |a|*eb + |b|*ea + ea*eb, all rounded up
  ub_abs(t1, v_);
  mpfr_mul(t1, t1, o.e_, MPFR_RNDU);
  ub_abs(t2, o.v_);
  mpfr_mul(t2, t2, e_, MPFR_RNDU);
  mpfr_add(t1, t1, t2, MPFR_RNDU);
  mpfr_mul(t2, e_, o.e_, MPFR_RNDU);
  mpfr_add(t1, t1, t2, MPFR_RNDU);

  if (mpfr_get_prec(v_) < mpfr_get_prec(o.v_))
    mpfr_prec_round(v_, mpfr_get_prec(o.v_), MPFR_RNDN);
  int t = mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
  mpfr_set(e_, t1, MPFR_RNDU);
  add_ulp(e_, v_, t);
  mpfr_clear(t1);
  mpfr_clear(t2);
  return *this;
}

Real& Real::operator/=(const Real& o) {
  mpfr_t lb, t1, uq;
  mpfr_init2(lb, kMagPrec);
  mpfr_init2(t1, kMagPrec);
  mpfr_init2(uq, kMagPrec);
  lb_abs(lb, o.v_);
  mpfr_sub(lb, lb, o.e_, MPFR_RNDD);
  if (!(mpfr_sgn(lb) > 0)) {
    mpfr_clear(lb);
    mpfr_clear(t1);
    mpfr_clear(uq);
    throw InsufficientPrecision("division by a ball containing zero");
  }
  mpfr_prec_t rp = std::max(mpfr_get_prec(v_), mpfr_get_prec(o.v_));
  mpfr_t q;
  mpfr_init2(q, rp);
  int t = mpfr_div(q, v_, o.v_, MPFR_RNDN);
  // err = (ea + (|q|+ulp)*eb) / lb
  ub_abs(uq, q);
  if (!mpfr_zero_p(q)) {
    mpfr_t u;
    mpfr_init2(u, kMagPrec);
    mpfr_set_ui_2exp(u, 1, mpfr_get_exp(q) - mpfr_get_prec(q), MPFR_RNDU);
    mpfr_add(uq, uq, u, MPFR_RNDU);
    mpfr_clear(u);
  }
  mpfr_mul(t1, uq, o.e_, MPFR_RNDU);
  mpfr_add(t1, t1, e_, MPFR_RNDU);
  mpfr_div(t1, t1, lb, MPFR_RNDU);
  mpfr_set_prec(v_, rp);
  mpfr_set(v_, q, MPFR_RNDN);
  mpfr_set(e_, t1, MPFR_RNDU);
  add_ulp(e_, v_, t);
  mpfr_clear(q);
  mpfr_clear(lb);
  mpfr_clear(t1);
  mpfr_clear(uq);
  return *this;
}

Real operator-(const Real& a) {
  Real r(a);
  mpfr_neg(r.v_, r.v_, MPFR_RNDN);  // exact
  return r;
}

Real abs(const Real& a) {
  Real r(a);
  mpfr_abs(r.v_, r.v_, MPFR_RNDN);  // exact
  return r;
}

Real sqrt(const Real& a) {
  if (a.is_exact_zero()) return Real(mpfr_get_prec(a.v_));
  if (mpfr_sgn(a.v_) < 0) throw InvalidInput("sqrt of a negative value");
  mpfr_t lb;
  mpfr_init2(lb, kMagPrec);
  lb_abs(lb, a.v_);
  mpfr_sub(lb, lb, a.e_, MPFR_RNDD);
  if (!(mpfr_sgn(lb) > 0)) {
    mpfr_clear(lb);
    throw InsufficientPrecision("sqrt of a ball containing zero");
  }
  Real r(mpfr_get_prec(a.v_));
  int t = mpfr_sqrt(r.v_, a.v_, MPFR_RNDN);
  // err = ea / (2*sqrt(lb))
  mpfr_t s;
  mpfr_init2(s, kMagPrec);
  mpfr_sqrt(s, lb, MPFR_RNDD);
  mpfr_mul_ui(s, s, 2, MPFR_RNDD);
  mpfr_div(s, a.e_, s, MPFR_RNDU);
  mpfr_set(r.e_, s, MPFR_RNDU);
  add_ulp(r.e_, r.v_, t);
  mpfr_clear(s);
  mpfr_clear(lb);
  return r;
}

Real nth_root(const Real& a, unsigned long n) {
  if (n == 0) throw InvalidInput("nth_root with n = 0");
  if (!a.definitely_positive())
    throw InvalidInput("nth_root requires a strictly positive value");
  Real r(mpfr_get_prec(a.v_));
  int t = mpfr_rootn_ui(r.v_, a.v_, n, MPFR_RNDN);
  // derivative bound: root(lb, n) / (n * lb), evaluated upward
  mpfr_t lb, num, den;
  mpfr_init2(lb, kMagPrec);
  mpfr_init2(num, kMagPrec);
  mpfr_init2(den, kMagPrec);
  lb_abs(lb, a.v_);
  mpfr_sub(lb, lb, a.e_, MPFR_RNDD);
  mpfr_rootn_ui(num, lb, n, MPFR_RNDU);
  mpfr_mul_ui(den, lb, n, MPFR_RNDD);
  mpfr_div(num, num, den, MPFR_RNDU);
  mpfr_mul(num, num, a.e_, MPFR_RNDU);
  mpfr_set(r.e_, num, MPFR_RNDU);
  add_ulp(r.e_, r.v_, t);
  mpfr_clear(lb);
  mpfr_clear(num);
  mpfr_clear(den);
  return r;
}

Real exp(const Real& a) {
  Real r(mpfr_get_prec(a.v_));
  int t = mpfr_exp(r.v_, a.v_, MPFR_RNDN);
  // err = exp(ub(a)) * expm1(ea)
  mpfr_t eub, m;
  mpfr_init2(eub, kMagPrec);
  mpfr_init2(m, kMagPrec);
  mpfr_exp(eub, a.v_, MPFR_RNDU);
  mpfr_expm1(m, a.e_, MPFR_RNDU);
  mpfr_mul(m, m, eub, MPFR_RNDU);
  mpfr_set(r.e_, m, MPFR_RNDU);
  add_ulp(r.e_, r.v_, t);
  mpfr_clear(eub);
  mpfr_clear(m);
  return r;
}

Real log(const Real& a) {
  if (mpfr_sgn(a.v_) <= 0) throw InvalidInput("log of a non-positive value");
  mpfr_t lb;
  mpfr_init2(lb, kMagPrec);
  lb_abs(lb, a.v_);
  mpfr_sub(lb, lb, a.e_, MPFR_RNDD);
  if (!(mpfr_sgn(lb) > 0)) {
    mpfr_clear(lb);
    throw InsufficientPrecision("log of a ball containing zero");
  }
  Real r(mpfr_get_prec(a.v_));
  int t = mpfr_log(r.v_, a.v_, MPFR_RNDN);
  mpfr_t e;
  mpfr_init2(e, kMagPrec);
  mpfr_div(e, a.e_, lb, MPFR_RNDU);
  mpfr_set(r.e_, e, MPFR_RNDU);
  add_ulp(r.e_, r.v_, t);
  mpfr_clear(e);
  mpfr_clear(lb);
  return r;
}

Real sin(const Real& a) {
  Real r(mpfr_get_prec(a.v_));
  int t = mpfr_sin(r.v_, a.v_, MPFR_RNDN);
  mpfr_set(r.e_, a.e_, MPFR_RNDU);
  add_ulp(r.e_, r.v_, t);
  return r;
}

Real pow_si(const Real& a, long n) {
  if (n == 0) {
    Real one(mpfr_get_prec(a.v_));
    mpfr_set_ui(one.v_, 1, MPFR_RNDN);
    return one;
  }
  Real r(mpfr_get_prec(a.v_));
  mpfr_t d, b;
  mpfr_init2(d, kMagPrec);
  mpfr_init2(b, kMagPrec);
  if (n >= 1) {
    // derivative bound: |n| * (|a|+ea)^(n-1)
    ub_abs(b, a.v_);
    mpfr_add(b, b, a.e_, MPFR_RNDU);
    mpfr_pow_si(d, b, n - 1, MPFR_RNDU);
  } else {
    lb_abs(b, a.v_);
    mpfr_sub(b, b, a.e_, MPFR_RNDD);
    if (!(mpfr_sgn(b) > 0)) {
      mpfr_clear(d);
      mpfr_clear(b);
      throw InsufficientPrecision("negative power of a ball containing zero");
    }
    mpfr_pow_si(d, b, n - 1, MPFR_RNDU);
  }
  mpfr_mul_si(d, d, n < 0 ? -n : n, MPFR_RNDU);
  mpfr_mul(d, d, a.e_, MPFR_RNDU);
  int t = mpfr_pow_si(r.v_, a.v_, n, MPFR_RNDN);
  mpfr_set(r.e_, d, MPFR_RNDU);
  add_ulp(r.e_, r.v_, t);
  mpfr_clear(d);
  mpfr_clear(b);
  return r;
}

Real mul_mpz(const Real& a, const mpz_class& k) {
  Real r(mpfr_get_prec(a.v_));
  int t = mpfr_mul_z(r.v_, a.v_, k.get_mpz_t(), MPFR_RNDN);
  mpfr_t ka;
  mpfr_init2(ka, kMagPrec);
  mpfr_set_z(ka, k.get_mpz_t(), MPFR_RNDU);
  mpfr_abs(ka, ka, MPFR_RNDU);
  mpfr_mul(ka, ka, a.e_, MPFR_RNDU);
  mpfr_set(r.e_, ka, MPFR_RNDU);
  add_ulp(r.e_, r.v_, t);
  mpfr_clear(ka);
  return r;
}

Real div_ui(const Real& a, unsigned long k) {
  if (k == 0) throw InvalidInput("division by zero");
  Real r(mpfr_get_prec(a.v_));
  int t = mpfr_div_ui(r.v_, a.v_, k, MPFR_RNDN);
  mpfr_div_ui(r.e_, a.e_, k, MPFR_RNDU);
  add_ulp(r.e_, r.v_, t);
  return r;
}

mpz_class Real::round_to_mpz() const {
  mpz_class z;
  mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDN);
  return z;
}

mpz_class Real::scaled_round(long pow10) const {
  mpz_class p10;
  mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(pow10));
  mpfr_t t;
  mpfr_init2(t, mpfr_get_prec(v_) +
                    static_cast<mpfr_prec_t>(pow10 * 3.33) + 32);
  mpfr_mul_z(t, v_, p10.get_mpz_t(), MPFR_RNDN);
  mpz_class z;
  mpfr_get_z(z.get_mpz_t(), t, MPFR_RNDN);
  mpfr_clear(t);
  return z;
}

void Real::add_err(mpfr_srcptr bound) {
  mpfr_add(e_, e_, bound, MPFR_RNDU);
}

void Real::bump_err_pow10(long exp10) {
  mpfr_t p;
  mpfr_init2(p, kMagPrec);
  pow10_mag(p, exp10, MPFR_RNDU);
  if (mpfr_cmp(e_, p) < 0) mpfr_set(e_, p, MPFR_RNDU);
  mpfr_clear(p);
}

int cmp_abs_value(const Real& a, const Real& b) {
  int c = mpfr_cmpabs(a.value(), b.value());
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

void tail_sum_quadratic(mpfr_ptr out, mpfr_srcptr x_ub, unsigned long N) {
  // Σ_{n>N} n² xⁿ = x^(N+1) [ (N+1)²/(1-x) + 2(N+1)x/(1-x)² + x(1+x)/(1-x)³ ]
  mpfr_t omx, t1, t2, t3, xp;
  mpfr_init2(omx, kMagPrec);
  mpfr_init2(t1, kMagPrec);
  mpfr_init2(t2, kMagPrec);
  mpfr_init2(t3, kMagPrec);
  mpfr_init2(xp, kMagPrec);

  mpfr_ui_sub(omx, 1, x_ub, MPFR_RNDD);
  if (!(mpfr_sgn(omx) > 0)) {
    mpfr_clear(omx);
    mpfr_clear(t1);
    mpfr_clear(t2);
    mpfr_clear(t3);
    mpfr_clear(xp);
    throw InvalidInput("tail bound requires |x| < 1");
  }

  mpfr_set_ui(t1, N + 1, MPFR_RNDU);
  mpfr_mul_ui(t1, t1, N + 1, MPFR_RNDU);
  mpfr_div(t1, t1, omx, MPFR_RNDU);

  mpfr_mul_ui(t2, x_ub, 2 * (N + 1), MPFR_RNDU);
  mpfr_div(t2, t2, omx, MPFR_RNDU);
  mpfr_div(t2, t2, omx, MPFR_RNDU);

  mpfr_add_ui(t3, x_ub, 1, MPFR_RNDU);
  mpfr_mul(t3, t3, x_ub, MPFR_RNDU);
  mpfr_div(t3, t3, omx, MPFR_RNDU);
  mpfr_div(t3, t3, omx, MPFR_RNDU);
  mpfr_div(t3, t3, omx, MPFR_RNDU);

  mpfr_add(t1, t1, t2, MPFR_RNDU);
  mpfr_add(t1, t1, t3, MPFR_RNDU);

  mpfr_pow_ui(xp, x_ub, N + 1, MPFR_RNDU);
  mpfr_mul(out, t1, xp, MPFR_RNDU);

  mpfr_clear(omx);
  mpfr_clear(t1);
  mpfr_clear(t2);
  mpfr_clear(t3);
  mpfr_clear(xp);
}

mpq_class mpq_from_string(const std::string& s) {
  if (s.empty()) throw InvalidInput("empty rational literal");
  std::string t = s;
  bool neg = false;
  if (t[0] == '+' || t[0] == '-') {
    neg = (t[0] == '-');
    t = t.substr(1);
  }
  if (t.empty()) throw InvalidInput("malformed rational literal: " + s);
  mpq_class q;
  auto slash = t.find('/');
  auto dot = t.find('.');
  if (slash != std::string::npos) {
    std::string np = t.substr(0, slash);
    std::string dp = t.substr(slash + 1);
    if (np.empty() || dp.empty() ||
        np.find_first_not_of("0123456789") != std::string::npos ||
        dp.find_first_not_of("0123456789") != std::string::npos)
      throw InvalidInput("malformed rational literal: " + s);
    mpz_class den(dp);
    if (sgn(den) == 0) throw InvalidInput("zero denominator: " + s);
    q = mpq_class(mpz_class(np), den);
    q.canonicalize();
  } else if (dot != std::string::npos) {
    std::string intpart = t.substr(0, dot);
    std::string frac = t.substr(dot + 1);
    if (intpart.empty()) intpart = "0";
    std::string alldigits = intpart + frac;
    if (alldigits.find_first_not_of("0123456789") != std::string::npos)
      throw InvalidInput("malformed rational literal: " + s);
    mpz_class num(alldigits);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
    q = mpq_class(num, den);
    q.canonicalize();
  } else {
    if (t.find_first_not_of("0123456789") != std::string::npos)
      throw InvalidInput("malformed rational literal: " + s);
    q = mpq_class(mpz_class(t));
  }
  return neg ? mpq_class(-q) : q;
}

// ---------------------------------------------------------------------------
// Bernoulli numbers via the tangent-number triangle.

namespace {
std::mutex g_bern_mu;
std::vector<mpq_class> g_b2k;  // g_b2k[k-1] = B_{2k}

void extend_bernoulli_locked(size_t kmax) {
  if (g_b2k.size() >= kmax) return;
  size_t n = kmax;
  // tangent numbers T_1..T_n
  std::vector<mpz_class> t(n + 1);
  t[1] = 1;
  for (size_t k = 2; k <= n; ++k)
    t[k] = mpz_class(static_cast<unsigned long>(k - 1)) * t[k - 1];
  for (size_t k = 2; k <= n; ++k)
    for (size_t j = k; j <= n; ++j)
      t[j] = mpz_class(static_cast<unsigned long>(j - k)) * t[j - 1] +
             mpz_class(static_cast<unsigned long>(j - k + 2)) * t[j];
  g_b2k.resize(n);
  for (size_t k = 1; k <= n; ++k) {
    // |B_2k| = 2k * T_k / (4^k (4^k - 1)), sign (-1)^(k+1)
    mpz_class four_k;
    mpz_ui_pow_ui(four_k.get_mpz_t(), 4, static_cast<unsigned long>(k));
    mpz_class num = mpz_class(static_cast<unsigned long>(2 * k)) * t[k];
    mpz_class den = four_k * (four_k - 1);
    mpq_class b(num, den);
    b.canonicalize();
    if (k % 2 == 0) b = -b;
    g_b2k[k - 1] = b;
  }
}
}  // namespace

mpq_class bernoulli_2k(unsigned k) {
  if (k == 0) throw InvalidInput("bernoulli_2k requires k >= 1");
  std::lock_guard<std::mutex> lock(g_bern_mu);
  if (g_b2k.size() < k) extend_bernoulli_locked(std::max<size_t>(k, 16));
  return g_b2k[k - 1];
}

// ---------------------------------------------------------------------------
// log Γ via Stirling's series after shifting the argument upward.

Real log_gamma(const mpq_class& x, const PrecisionContext& ctx) {
  if (x <= 0) throw InvalidInput("log_gamma requires x > 0");
  if (x > 1) throw InvalidInput("log_gamma requires x <= 1");
  if (x == 1) return Real::from_long(0, ctx);

  // Shift so the Stirling series reaches the target: terms bottom out near
  // e^(-2*pi*y), so y >= L*ln(10)/(2*pi) decimal digits of L suffice.
  long L = ctx.digits() + ctx.guard();
  long ymin = static_cast<long>(std::ceil(0.375 * static_cast<double>(L))) + 8;
  // number of unit shifts: smallest N with x + N >= ymin
  mpq_class need = mpq_class(ymin) - x;
  mpz_class nz;
  mpz_cdiv_q(nz.get_mpz_t(), need.get_num_mpz_t(), need.get_den_mpz_t());
  long N = static_cast<long>(mpz_get_si(nz.get_mpz_t()));
  if (N < 0) N = 0;

  mpq_class yq = x + N;
  Real y = Real::from_mpq(yq, ctx);
  Real lny = log(y);

  // (y - 1/2) ln y - y + ln(2 pi)/2
  Real res = Real::from_mpq(yq - mpq_class(1, 2), ctx) * lny - y;
  Real ln2pi = log(mul_mpz(Real::pi(ctx), mpz_class(2)));
  res += div_ui(ln2pi, 2);

  // + sum_k B_{2k} / ((2k)(2k-1) y^(2k-1)), remainder bounded by the first
  // omitted term (alternating envelope for real y > 0)
  Real inv_y = Real::from_long(1, ctx) / y;
  Real inv_y2 = inv_y * inv_y;
  Real ypow = inv_y;  // y^-(2k-1)

  mpfr_t target, tb, ub_ypow;
  mpfr_init2(target, kMagPrec);
  mpfr_init2(tb, kMagPrec);
  mpfr_init2(ub_ypow, kMagPrec);
  pow10_mag(target, ctx.target_exp10(), MPFR_RNDD);

  bool converged = false;
  for (unsigned k = 1; k <= 100000; ++k) {
    mpq_class coef = bernoulli_2k(k) /
                     mpq_class(static_cast<unsigned long>(2 * k) *
                               static_cast<unsigned long>(2 * k - 1));
    res += Real::from_mpq(coef, ctx) * ypow;
    ypow *= inv_y2;
    // bound the next term
    mpq_class cnext = bernoulli_2k(k + 1) /
                      mpq_class(static_cast<unsigned long>(2 * k + 2) *
                                static_cast<unsigned long>(2 * k + 1));
    mpfr_set_q(tb, cnext.get_mpq_t(), MPFR_RNDU);
    mpfr_abs(tb, tb, MPFR_RNDU);
    mpfr_abs(ub_ypow, ypow.value(), MPFR_RNDU);
    mpfr_add(ub_ypow, ub_ypow, ypow.err(), MPFR_RNDU);
    mpfr_mul(tb, tb, ub_ypow, MPFR_RNDU);
    if (mpfr_cmp(tb, target) < 0) {
      res.add_err(tb);  // fold the truncation bound into the error
      converged = true;
      break;
    }
  }
  mpfr_clear(target);
  mpfr_clear(tb);
  mpfr_clear(ub_ypow);
  if (!converged)
    throw InsufficientPrecision("Stirling series failed to converge");

  // log Γ(x) = log Γ(x+N) - sum_{j=0}^{N-1} log(x+j)
  for (long j = 0; j < N; ++j)
    res -= log(Real::from_mpq(x + j, ctx));
  return res;
}

}  // namespace csp
