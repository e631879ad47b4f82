#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <stdexcept>
#include <string>

namespace csp {

// Domain / validation failure (CLI exit code 2).
class InvalidInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The requested result cannot be certified at the working precision
// (CLI exit code 3).
class InsufficientPrecision : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Decimal working precision.  `digits` is the precision the caller gets to
// rely on; `guard` extra digits are carried internally so that roundoff and
// mild cancellation stay below 10^-digits.
class PrecisionContext {
 public:
  explicit PrecisionContext(int digits, int guard = 20);

  int digits() const { return digits_; }
  int guard() const { return guard_; }

  // Binary precision used for all values created under this context.
  mpfr_prec_t bits() const { return bits_; }

  // Internal accuracy target 10^-(digits+guard), as a decimal exponent.
  int target_exp10() const { return -(digits_ + guard_); }

  PrecisionContext with_digits(int digits) const {
    return PrecisionContext(digits, guard_);
  }

 private:
  int digits_;
  int guard_;
  mpfr_prec_t bits_;
};

// Arbitrary-precision real with a rigorous absolute error bound: the exact
// quantity lies in [value - err, value + err].  The bound is kept in a
// low-precision mpfr value rounded upward, so every operation below returns
// a ball that contains the exact result of the same operation applied to
// any members of the input balls.
class Real {
 public:
  Real();  // exact 0 at minimal precision
  explicit Real(mpfr_prec_t prec);

  Real(const Real& o);
  Real(Real&& o) noexcept;
  Real& operator=(const Real& o);
  Real& operator=(Real&& o) noexcept;
  ~Real();

  static Real from_long(long v, const PrecisionContext& ctx);
  static Real from_mpz(const mpz_class& v, const PrecisionContext& ctx);
  static Real from_mpq(const mpq_class& v, const PrecisionContext& ctx);
  static Real pi(const PrecisionContext& ctx);

  // Parses a decimal literal; the result carries a one-ulp error bound
  // unless the literal is exactly representable.
  static Real from_decimal(const std::string& s, const PrecisionContext& ctx);

  mpfr_srcptr value() const { return v_; }
  mpfr_srcptr err() const { return e_; }
  mpfr_prec_t precision_bits() const { return mpfr_get_prec(v_); }

  bool is_exact_zero() const { return mpfr_zero_p(v_) && mpfr_zero_p(e_); }
  bool contains_zero() const;       // |value| <= err
  bool definitely_positive() const; // value - err > 0
  bool definitely_negative() const; // value + err < 0

  // True when err <= 10^exp10.
  bool err_at_most_pow10(long exp10) const;

  // True when |value| + err < 10^exp10 (conservative: certifies the exact
  // quantity is below the power of ten).
  bool abs_upper_below_pow10(long exp10) const;

  // floor/approx of log10 of the error bound; very negative when err == 0.
  double err_log10() const;
  // log10 of |value| (midpoint); meaningless for zero midpoint.
  double value_log10_abs() const;

  // Midpoint rendered with `sig` significant digits, normalised scientific
  // form ("-1.234e-5").  Exact zero renders as "0".
  std::string to_string(int sig) const;
  // Error bound rendered with 2 significant digits ("~3.1e-310", "0").
  std::string err_string() const;

  Real& operator+=(const Real& o);
  Real& operator-=(const Real& o);
  Real& operator*=(const Real& o);
  Real& operator/=(const Real& o);

  friend Real operator+(Real a, const Real& b) { return a += b; }
  friend Real operator-(Real a, const Real& b) { return a -= b; }
  friend Real operator*(Real a, const Real& b) { return a *= b; }
  friend Real operator/(Real a, const Real& b) { return a /= b; }
  friend Real operator-(const Real& a);

  friend Real abs(const Real& a);
  friend Real sqrt(const Real& a);      // requires value - err > 0, or exact 0
  friend Real nth_root(const Real& a, unsigned long n);  // value - err > 0
  friend Real exp(const Real& a);
  friend Real log(const Real& a);       // requires value - err > 0
  friend Real sin(const Real& a);
  friend Real pow_si(const Real& a, long n);  // integer powers, n != 0 allowed any sign

  friend Real mul_mpz(const Real& a, const mpz_class& k);
  friend Real div_ui(const Real& a, unsigned long k);

  // Nearest integer to the midpoint (ties to even).
  mpz_class round_to_mpz() const;
  // round(value * 10^k) as an integer, for lattice embeddings.
  mpz_class scaled_round(long pow10) const;

  // Inflates the error bound to at least 10^exp10 (used when a quantity is
  // known only to limited accuracy from the outside).
  void bump_err_pow10(long exp10);

  // err += bound (rounded up); for folding truncation-tail bounds into a
  // partial sum.  `bound` must be >= 0.
  void add_err(mpfr_srcptr bound);

 private:
  friend struct RealOps;
  mpfr_t v_;  // midpoint, working precision
  mpfr_t e_;  // error bound >= 0, low precision, always rounded up
};

// Compares |a.value| with |b.value| (midpoints only): -1, 0, +1.
int cmp_abs_value(const Real& a, const Real& b);

// out = upper bound of Σ_{n>N} n² xⁿ for 0 <= x < 1, computed with upward
// rounding at low precision; `out` must be initialized.  This dominates the
// truncation tails of all series in this project whose coefficients are
// bounded by n².
void tail_sum_quadratic(mpfr_ptr out, mpfr_srcptr x_ub, unsigned long N);

// Parses "p/q", integer, or decimal ("10.02136339") into an exact rational.
mpq_class mpq_from_string(const std::string& s);

// log Γ(x) for exact rational 0 < x <= 1, by Stirling's series after an
// argument shift, with the remainder folded into the error bound.
Real log_gamma(const mpq_class& x, const PrecisionContext& ctx);

// Bernoulli number B_{2k} (k >= 1), from the tangent-number triangle;
// results are cached.
mpq_class bernoulli_2k(unsigned k);

}  // namespace csp
