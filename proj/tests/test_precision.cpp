#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <gmpxx.h>
#include <mpfr.h>

#include "csperiod/precision.hpp"
#include "test_util.hpp"

using csp::InsufficientPrecision;
using csp::InvalidInput;
using csp::PrecisionContext;
using csp::Real;

namespace {

const char* kPi50 =
    "3.141592653589793238462643383279502884197169399375106";
const char* kLogGamma13 =
    "0.98542064692776706918717403697796139173555649638588585423475701008940411"
    "891376044768037659832358826059427339070399936529129254369250289877895397"
    "7600902732117494259713319219607720950";
const char* kLogGamma14 =
    "1.28802252469807745737061044021971729592537756511286055049998702253396126"
    "267569883621607381641761386618678876040807516222611115631569418371589095"
    "629394839247181888273749285519158672";
const char* kLogGamma7_148 =
    "3.02580018278883488271273919388290043355736157998047558624073767362157632"
    "862967297333008740891299167962144284310320910632280218571193715269004622"
    "526279394867874160004114607605889580";

}  // namespace

TEST_CASE("context validation and accounting") {
  CHECK_THROWS_AS(PrecisionContext(49), InvalidInput);
  CHECK_THROWS_AS(PrecisionContext(100, -1), InvalidInput);
  PrecisionContext ctx(150);
  CHECK(ctx.digits() == 150);
  CHECK(ctx.guard() == 20);
  CHECK(ctx.target_exp10() == -170);
  // bits must cover digits+guard decimal digits plus slack
  CHECK(ctx.bits() >= static_cast<mpfr_prec_t>((150 + 20) * 3.32));
  PrecisionContext ctx2 = ctx.with_digits(250);
  CHECK(ctx2.digits() == 250);
  CHECK(ctx2.guard() == 20);
}

TEST_CASE("exact construction carries zero error") {
  PrecisionContext ctx(60);
  Real a = Real::from_long(-7, ctx);
  CHECK(mpfr_zero_p(a.err()));
  Real b = Real::from_mpz(mpz_class("123456789123456789123456789"), ctx);
  CHECK(mpfr_zero_p(b.err()));
  Real c = a + b;  // exact integers at this precision
  CHECK(mpfr_zero_p(c.err()));
  Real d = Real::from_decimal("0.125", ctx);  // dyadic, exact
  CHECK(mpfr_zero_p(d.err()));
  Real e = Real::from_decimal("0.1", ctx);  // not dyadic, one-ulp bound
  CHECK_FALSE(mpfr_zero_p(e.err()));
  CHECK(e.err_at_most_pow10(-60));
}

TEST_CASE("pi matches the frozen 50-digit value") {
  PrecisionContext ctx(60);
  CHECK(tu::close_to(Real::pi(ctx), kPi50, -49));
}

TEST_CASE("ball containment under arithmetic") {
  PrecisionContext ctx(80);
  Real third = Real::from_long(1, ctx) / Real::from_long(3, ctx);
  CHECK_FALSE(mpfr_zero_p(third.err()));
  Real one = mul_mpz(third, mpz_class(3)) - Real::from_long(1, ctx);
  CHECK(one.contains_zero());
  Real s = sin(Real::pi(ctx));
  CHECK(s.contains_zero());
  CHECK(s.err_at_most_pow10(-95));
}

TEST_CASE("division by a zero-straddling ball is refused") {
  PrecisionContext ctx(60);
  Real tiny = Real::from_long(1, ctx);
  tiny.bump_err_pow10(-10);
  Real z = tiny - Real::from_long(1, ctx);  // ball around 0
  CHECK(z.contains_zero());
  CHECK_THROWS_AS(Real::from_long(1, ctx) / z, InsufficientPrecision);
}

TEST_CASE("domain checks on sqrt and log") {
  PrecisionContext ctx(60);
  CHECK_THROWS_AS(sqrt(Real::from_long(-2, ctx)), InvalidInput);
  CHECK_THROWS_AS(log(Real::from_long(0, ctx)), InvalidInput);
  Real r = sqrt(Real::from_long(2, ctx));
  Real back = r * r - Real::from_long(2, ctx);
  CHECK(back.contains_zero());
}

TEST_CASE("powers and roots") {
  PrecisionContext ctx(60);
  Real p = pow_si(Real::from_long(2, ctx), 10);
  CHECK(mpfr_cmp_ui(p.value(), 1024) == 0);
  CHECK(mpfr_zero_p(p.err()));
  Real q = pow_si(Real::from_long(2, ctx), -2);
  CHECK(mpfr_cmp_d(q.value(), 0.25) == 0);
  Real nr = nth_root(Real::from_long(1024, ctx), 10);
  CHECK((nr - Real::from_long(2, ctx)).contains_zero());
}

TEST_CASE("log_gamma matches frozen oracles") {
  PrecisionContext ctx(150);
  CHECK(tu::close_to(csp::log_gamma(mpq_class(1, 3), ctx), kLogGamma13, -145));
  CHECK(tu::close_to(csp::log_gamma(mpq_class(1, 4), ctx), kLogGamma14, -145));
  CHECK(tu::close_to(csp::log_gamma(mpq_class(7, 148), ctx), kLogGamma7_148,
                     -145));
  Real lg1 = csp::log_gamma(mpq_class(1), ctx);
  CHECK(lg1.contains_zero());
  CHECK(lg1.err_at_most_pow10(-160));
  CHECK_THROWS_AS(csp::log_gamma(mpq_class(0), ctx), InvalidInput);
  CHECK_THROWS_AS(csp::log_gamma(mpq_class(3, 2), ctx), InvalidInput);
}

TEST_CASE("Bernoulli numbers") {
  CHECK(csp::bernoulli_2k(1) == mpq_class(1, 6));
  CHECK(csp::bernoulli_2k(2) == mpq_class(-1, 30));
  CHECK(csp::bernoulli_2k(3) == mpq_class(1, 42));
  CHECK(csp::bernoulli_2k(4) == mpq_class(-1, 30));
  CHECK(csp::bernoulli_2k(5) == mpq_class(5, 66));
  CHECK(csp::bernoulli_2k(6) == mpq_class(-691, 2730));
}

TEST_CASE("quadratic tail bound dominates the true tail") {
  // For x = 1/2: sum_{n>3} n^2 (1/2)^n = 27/8.
  mpfr_t out, x;
  mpfr_init2(out, 64);
  mpfr_init2(x, 64);
  mpfr_set_d(x, 0.5, MPFR_RNDU);
  csp::tail_sum_quadratic(out, x, 3);
  mpq_class exact(27, 8);
  mpfr_t ex;
  mpfr_init2(ex, 64);
  mpfr_set_q(ex, exact.get_mpq_t(), MPFR_RNDD);
  CHECK(mpfr_cmp(out, ex) >= 0);  // upper bound
  mpfr_mul_d(ex, ex, 1.0001, MPFR_RNDU);
  CHECK(mpfr_cmp(out, ex) <= 0);  // and not wildly loose
  mpfr_clears(out, x, ex, static_cast<mpfr_ptr>(nullptr));
}

TEST_CASE("rational parsing") {
  CHECK(csp::mpq_from_string("1/3") == mpq_class(1, 3));
  CHECK(csp::mpq_from_string("-4") == mpq_class(-4));
  CHECK(csp::mpq_from_string("10.02136339") ==
        mpq_class(1002136339, 100000000));
  CHECK_THROWS_AS(csp::mpq_from_string("abc"), InvalidInput);
  CHECK_THROWS_AS(csp::mpq_from_string("1/0"), InvalidInput);
  CHECK_THROWS_AS(csp::mpq_from_string("1.2.3"), InvalidInput);
  CHECK_THROWS_AS(csp::mpq_from_string(""), InvalidInput);
}

TEST_CASE("rounding helpers") {
  PrecisionContext ctx(60);
  Real x = Real::from_decimal("1.25", ctx);
  CHECK(x.scaled_round(2) == mpz_class(125));
  CHECK(Real::pi(ctx).scaled_round(5) == mpz_class(314159));
  CHECK(Real::from_decimal("2.5", ctx).round_to_mpz() == mpz_class(2));
  CHECK(Real::from_decimal("3.5", ctx).round_to_mpz() == mpz_class(4));
  CHECK(Real::from_decimal("-1.2", ctx).round_to_mpz() == mpz_class(-1));
}

TEST_CASE("string rendering") {
  PrecisionContext ctx(60);
  Real x = Real::from_decimal("-0.0001234", ctx);
  std::string s = x.to_string(4);
  CHECK(s == "-1.234e-4");
  CHECK(Real::from_long(0, ctx).to_string(5) == "0");
  CHECK(Real::from_long(3, ctx).err_string() == "0");
}

TEST_CASE("error bookkeeping helpers") {
  PrecisionContext ctx(60);
  Real x = Real::from_long(1, ctx);
  x.bump_err_pow10(-30);
  CHECK(x.err_at_most_pow10(-29));
  CHECK_FALSE(x.err_at_most_pow10(-31));
  mpfr_t b;
  mpfr_init2(b, 32);
  mpfr_set_d(b, 1e-10, MPFR_RNDU);
  x.add_err(b);
  CHECK_FALSE(x.err_at_most_pow10(-11));
  CHECK(x.err_at_most_pow10(-9));
  mpfr_clear(b);
  CHECK(csp::cmp_abs_value(Real::from_long(-5, ctx),
                           Real::from_long(3, ctx)) > 0);
  CHECK(csp::cmp_abs_value(Real::from_long(2, ctx),
                           Real::from_long(-2, ctx)) == 0);
}
