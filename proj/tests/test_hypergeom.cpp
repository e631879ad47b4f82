#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <gmpxx.h>

#include "csperiod/hypergeom.hpp"
#include "csperiod/precision.hpp"
#include "test_util.hpp"

using csp::coeff;
using csp::CoeffStream;
using csp::eval;
using csp::eval_at;
using csp::HyperParams;
using csp::InvalidInput;
using csp::PrecisionContext;
using csp::Real;
using csp::validate_params;

namespace {

const char* kF0_148 =
    "0.99999987948700570897346388127641620525538711042100885589442830480635214"
    "057372894501577949594076207199666692507870295060141363930347062012599980"
    "791003560584336967853815428199478002262933204709329815855255028762525094"
    "032397064171723423573229217016804170551484517614931977974907586247665168"
    "779920806406080878151198513901595";
const char* kF0_232 =
    "1.00000000097595658762203993352105707784774829461505664482235458424593011"
    "413641325013899233223035361470016642809853431022409111753488397228902455"
    "872860285569861073604560154075529780487255866704530970075949637681284407"
    "301764750260774212024828680890239149149698516378592417770000104182356130"
    "85388516015793622675846669378755";
const char* kF0_267 =
    "0.99999955555629629458924400919939742274561771450282439816944802957223675"
    "692431590549684852776441495214239291887519528155683302964480454866906628"
    "098745923229886630880802872018937906892788514445701259454328056231279689"
    "052326862440040597153333740749423075213743289710654736759997316953530111"
    "860817368385166540019035853383592";
const char* kF0_163 =
    "0.99999999999999954292228755908163062183725367791625550221387133367574538"
    "816515409226610146518819415564890210808310461899405750285502656913921328"
    "357235127319272855243819409831685850466034506297248309525657914552763702"
    "286506732301587091239999254038622575835884300140091204440663083689912416"
    "080419595051571467786650841453266";

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(validate_params({mpq_class(1, 6), 0}));
  CHECK_NOTHROW(validate_params({mpq_class(1, 2), 2}));
  CHECK_THROWS_AS(validate_params({mpq_class(0), 0}), InvalidInput);
  CHECK_THROWS_AS(validate_params({mpq_class(2, 3), 0}), InvalidInput);
  CHECK_THROWS_AS(validate_params({mpq_class(-1, 6), 0}), InvalidInput);
  CHECK_THROWS_AS(validate_params({mpq_class(1, 6), 3}), InvalidInput);
  CHECK_THROWS_AS(validate_params({mpq_class(1, 6), -1}), InvalidInput);
}

TEST_CASE("low-order coefficients are the expected rationals") {
  // b_1 = s(1/2)(1-s) for s = 1/6: (1/6)(1/2)(5/6) = 5/72.
  CHECK(coeff({mpq_class(1, 6), 0}, 1) == mpq_class(5, 72));
  // b_2 = b_1 * (1+s)(3/2)(2-s)/8 = (5/72)(7/6)(3/2)(11/6)/8 = 385/13824;
  // the k = 2 slot multiplies by n^2 = 4, giving 385/3456.
  CHECK(coeff({mpq_class(1, 6), 2}, 2) == mpq_class(385, 3456));
  CHECK(coeff({mpq_class(1, 4), 0}, 1) == mpq_class(3, 32));
  CHECK(coeff({mpq_class(1, 3), 0}, 1) == mpq_class(1, 9));
  CHECK(coeff({mpq_class(1, 2), 0}, 1) == mpq_class(1, 8));
  CHECK(coeff({mpq_class(1, 6), 0}, 0) == 1);
  CHECK(coeff({mpq_class(1, 6), 1}, 0) == 0);  // n^i kills the constant term
  CHECK(coeff({mpq_class(1, 6), 2}, 0) == 0);
}

TEST_CASE("coefficient stream agrees with direct coefficients") {
  for (auto s : {mpq_class(1, 6), mpq_class(1, 4), mpq_class(1, 3),
                 mpq_class(1, 2)}) {
    CoeffStream st(s);
    for (unsigned long n = 0; n <= 40; ++n) {
      CAPTURE(s.get_str());
      CAPTURE(n);
      CHECK(st.index() == n);
      CHECK(st.value() == coeff({s, 0}, n));
      st.advance();
    }
  }
}

TEST_CASE("base coefficients lie in (0,1] and decrease") {
  for (auto s : {mpq_class(1, 6), mpq_class(1, 4), mpq_class(1, 3),
                 mpq_class(1, 2)}) {
    CoeffStream st(s);
    mpq_class prev = st.value();
    CHECK(prev == 1);
    for (unsigned long n = 1; n <= 200; ++n) {
      st.advance();
      CAPTURE(s.get_str());
      CAPTURE(n);
      CHECK(st.value() > 0);
      CHECK(st.value() < prev);
      prev = st.value();
    }
  }
}

TEST_CASE("f0 at the catalog arguments matches frozen oracles") {
  PrecisionContext ctx(300);
  CHECK(tu::close_to(eval({mpq_class(1, 4), 0}, mpz_class(-777924), ctx),
                     kF0_148, -295));
  CHECK(tu::close_to(eval({mpq_class(1, 4), 0}, mpz_class(96059601), ctx),
                     kF0_232, -295));
  CHECK(tu::close_to(eval({mpq_class(1, 3), 0}, mpz_class(-250000), ctx),
                     kF0_267, -295));
  CHECK(tu::close_to(
      eval({mpq_class(1, 6), 0}, mpz_class("-151931373056000"), ctx),
      kF0_163, -295));
}

TEST_CASE("eval and eval_at agree where both apply") {
  PrecisionContext ctx(150);
  mpz_class Z(-250000);
  for (int i = 0; i <= 2; ++i) {
    HyperParams p{mpq_class(1, 3), i};
    Real a = eval(p, Z, ctx);
    Real z = Real::from_long(1, ctx) / Real::from_mpz(Z, ctx);
    Real b = eval_at(p, z, ctx);
    CAPTURE(i);
    CHECK(tu::overlaps(a, b));
    CHECK(a.err_at_most_pow10(-150));
    CHECK(b.err_at_most_pow10(-140));
  }
}

TEST_CASE("argument domain checks") {
  PrecisionContext ctx(100);
  HyperParams p{mpq_class(1, 6), 0};
  CHECK_THROWS_AS(eval(p, mpz_class(0), ctx), InvalidInput);
  CHECK_THROWS_AS(eval(p, mpz_class(1), ctx), InvalidInput);
  CHECK_THROWS_AS(eval(p, mpz_class(-1), ctx), InvalidInput);
  Real big = Real::from_decimal("0.75", ctx);
  CHECK_THROWS_AS(eval_at(p, big, ctx), InvalidInput);
  CHECK_NOTHROW(eval_at(p, Real::from_decimal("0.5", ctx), ctx));
}

TEST_CASE("higher precision refines the same value") {
  PrecisionContext lo(120), hi(220);
  HyperParams p{mpq_class(1, 4), 1};
  Real a = eval(p, mpz_class(-777924), lo);
  Real b = eval(p, mpz_class(-777924), hi);
  CHECK(tu::overlaps(a, b));
  CHECK(b.err_at_most_pow10(-220));
}
