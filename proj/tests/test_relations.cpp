#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <gmpxx.h>

#include <random>
#include <variant>
#include <vector>

#include "csperiod/hypergeom.hpp"
#include "csperiod/identities.hpp"
#include "csperiod/periods.hpp"
#include "csperiod/relations.hpp"
#include "test_util.hpp"

using csp::catalog_case;
using csp::CaseRecord;
using csp::determinant;
using csp::Discriminant;
using csp::find_relation;
using csp::FindResult;
using csp::InsufficientPrecision;
using csp::IntegerRelation;
using csp::InvalidInput;
using csp::LatticeBasis;
using csp::LatticeRow;
using csp::lll_reduce;
using csp::NoRelation;
using csp::normalize_relation;
using csp::PrecisionContext;
using csp::Real;

namespace {

LatticeBasis matmul(const LatticeBasis& a, const LatticeBasis& b) {
  size_t n = a.size(), m = b[0].size(), inner = b.size();
  LatticeBasis r(n, LatticeRow(m, 0));
  for (size_t i = 0; i < n; ++i)
    for (size_t k = 0; k < inner; ++k)
      for (size_t j = 0; j < m; ++j) r[i][j] += a[i][k] * b[k][j];
  return r;
}

// Exact rational Gram-Schmidt: mu[i][j] and squared norms B[i] of b*_i.
void gram_schmidt(const LatticeBasis& b,
                  std::vector<std::vector<mpq_class>>& mu,
                  std::vector<mpq_class>& B) {
  size_t n = b.size(), m = b[0].size();
  std::vector<std::vector<mpq_class>> bs(n, std::vector<mpq_class>(m, 0));
  mu.assign(n, std::vector<mpq_class>(n, 0));
  B.assign(n, 0);
  for (size_t i = 0; i < n; ++i) {
    for (size_t t = 0; t < m; ++t) bs[i][t] = mpq_class(b[i][t]);
    for (size_t j = 0; j < i; ++j) {
      mpq_class num = 0;
      for (size_t t = 0; t < m; ++t) num += mpq_class(b[i][t]) * bs[j][t];
      mu[i][j] = num / B[j];
      for (size_t t = 0; t < m; ++t) bs[i][t] -= mu[i][j] * bs[j][t];
    }
    for (size_t t = 0; t < m; ++t) B[i] += bs[i][t] * bs[i][t];
  }
}

void check_reduced(const LatticeBasis& red) {
  std::vector<std::vector<mpq_class>> mu;
  std::vector<mpq_class> B;
  gram_schmidt(red, mu, B);
  for (size_t i = 1; i < red.size(); ++i) {
    for (size_t j = 0; j < i; ++j) {
      CAPTURE(i);
      CAPTURE(j);
      CHECK(2 * abs(mu[i][j]) <= 1);  // size-reduced
    }
    // Lovász: B_i >= (3/4 - mu^2) B_{i-1}
    mpq_class lhs = B[i];
    mpq_class rhs = (mpq_class(3, 4) - mu[i][i - 1] * mu[i][i - 1]) * B[i - 1];
    CHECK(lhs >= rhs);
  }
}

}  // namespace

TEST_CASE("lll leaves an orthogonal basis alone") {
  LatticeBasis id(3, LatticeRow(3, 0));
  for (size_t i = 0; i < 3; ++i) id[i][i] = 1;
  LatticeBasis U;
  LatticeBasis red = lll_reduce(id, mpq_class(3, 4), &U);
  CHECK(red == id);
  CHECK(U == id);
}

TEST_CASE("lll input validation") {
  LatticeBasis one(1, LatticeRow(2, 1));
  CHECK_THROWS_AS(lll_reduce(one), InvalidInput);
  LatticeBasis ragged = {{mpz_class(1), mpz_class(0)}, {mpz_class(1)}};
  CHECK_THROWS_AS(lll_reduce(ragged), InvalidInput);
  LatticeBasis ok = {{mpz_class(1), mpz_class(0)},
                     {mpz_class(0), mpz_class(1)}};
  CHECK_THROWS_AS(lll_reduce(ok, mpq_class(1, 4)), InvalidInput);
  CHECK_THROWS_AS(lll_reduce(ok, mpq_class(1)), InvalidInput);
  LatticeBasis dep = {{mpz_class(1), mpz_class(2)},
                      {mpz_class(2), mpz_class(4)}};
  CHECK_THROWS_AS(lll_reduce(dep), InvalidInput);
}

TEST_CASE("lll produces a size-reduced unimodular transform") {
  std::mt19937 gen(12345);
  std::uniform_int_distribution<int> dist(-9, 9);
  int done = 0;
  while (done < 6) {
    LatticeBasis b(5, LatticeRow(5, 0));
    for (auto& row : b)
      for (auto& x : row) x = dist(gen);
    if (determinant(b) == 0) continue;
    ++done;
    LatticeBasis U;
    LatticeBasis red = lll_reduce(b, mpq_class(3, 4), &U);
    CHECK(matmul(U, b) == red);
    mpz_class du = determinant(U);
    CHECK((du == 1 || du == -1));
    CHECK(determinant(red) == determinant(b) * du);
    check_reduced(red);
  }
}

TEST_CASE("determinant basics") {
  LatticeBasis a = {{mpz_class(2), mpz_class(0)}, {mpz_class(0), mpz_class(3)}};
  CHECK(determinant(a) == 6);
  LatticeBasis sw = {{mpz_class(0), mpz_class(1)}, {mpz_class(1), mpz_class(0)}};
  CHECK(determinant(sw) == -1);
  LatticeBasis sing = {{mpz_class(1), mpz_class(2)},
                       {mpz_class(2), mpz_class(4)}};
  CHECK(determinant(sing) == 0);
  LatticeBasis rect(2, LatticeRow(3, 0));
  CHECK_THROWS_AS(determinant(rect), InvalidInput);
}

TEST_CASE("normalize_relation") {
  std::vector<mpz_class> v = {mpz_class(-2), mpz_class(-4)};
  normalize_relation(v);
  CHECK(v == std::vector<mpz_class>{mpz_class(1), mpz_class(2)});
  normalize_relation(v);  // idempotent
  CHECK(v == std::vector<mpz_class>{mpz_class(1), mpz_class(2)});
  std::vector<mpz_class> w = {mpz_class(0), mpz_class(-3), mpz_class(6)};
  normalize_relation(w);
  CHECK(w == std::vector<mpz_class>{mpz_class(0), mpz_class(1), mpz_class(-2)});
  std::vector<mpz_class> z = {mpz_class(0), mpz_class(0)};
  CHECK_THROWS_AS(normalize_relation(z), InvalidInput);
}

TEST_CASE("find_relation recovers an algebraic relation") {
  PrecisionContext ctx(100);
  Real r2 = sqrt(Real::from_long(2, ctx));
  std::vector<Real> xs = {Real::from_long(1, ctx), r2,
                          Real::from_long(1, ctx) + r2};
  FindResult fr = find_relation(xs, 3, ctx);
  REQUIRE(std::holds_alternative<IntegerRelation>(fr));
  const auto& rel = std::get<IntegerRelation>(fr);
  CHECK(rel.m == std::vector<mpz_class>{mpz_class(1), mpz_class(1),
                                        mpz_class(-1)});
  CHECK(rel.residual.contains_zero());
  CHECK(rel.confidence >= 1);
}

TEST_CASE("find_relation certifies exclusion for independent values") {
  PrecisionContext ctx(200);
  std::vector<Real> xs = {Real::from_long(1, ctx),
                          sqrt(Real::from_long(2, ctx)),
                          sqrt(Real::from_long(3, ctx))};
  FindResult fr = find_relation(xs, 5, ctx);
  REQUIRE(std::holds_alternative<NoRelation>(fr));
  const auto& none = std::get<NoRelation>(fr);
  CHECK(none.max_coeff_digits == 5);
  CHECK(none.exclusion_threshold.definitely_positive());
  // brute-force sanity over small coefficients: every nonzero form clears
  // the certified threshold
  PrecisionContext wide(300);
  Real s2 = sqrt(Real::from_long(2, wide));
  Real s3 = sqrt(Real::from_long(3, wide));
  for (long a = -10; a <= 10; ++a)
    for (long b = -10; b <= 10; ++b)
      for (long c = -10; c <= 10; ++c) {
        if (a == 0 && b == 0 && c == 0) continue;
        Real f = abs(Real::from_long(a, wide) + mul_mpz(s2, mpz_class(b)) +
                     mul_mpz(s3, mpz_class(c)));
        CHECK((f - none.exclusion_threshold).definitely_positive());
      }
}

TEST_CASE("find_relation precision prerequisites") {
  PrecisionContext ctx(150);
  std::vector<Real> xs(4, Real::from_long(1, ctx));
  // needs 2*4*18 + 40 = 184 digits
  CHECK_THROWS_AS(find_relation(xs, 18, ctx), InsufficientPrecision);
  std::vector<Real> two = {Real::from_long(1, ctx), Real::from_long(1, ctx)};
  CHECK_THROWS_AS(find_relation({two[0]}, 3, ctx), InvalidInput);
  CHECK_THROWS_AS(find_relation(two, 0, ctx), InvalidInput);
  // imprecise inputs are refused rather than silently embedded
  Real fuzzy = sqrt(Real::from_long(2, ctx));
  fuzzy.bump_err_pow10(-50);
  std::vector<Real> bad = {Real::from_long(1, ctx), fuzzy};
  CHECK_THROWS_AS(find_relation(bad, 3, ctx), InsufficientPrecision);
}

TEST_CASE("rediscovery of catalog identities from values alone") {
  struct Probe {
    long D;
    int which;
    int digits;
  };
  for (Probe p : {Probe{-148, 0, 150}, Probe{-148, 1, 150},
                  Probe{-163, 1, 200}}) {
    PrecisionContext ctx(p.digits);
    const CaseRecord& rec = catalog_case(p.D);
    csp::PeriodValues pv =
        csp::span_values(Discriminant::validate(rec.D), rec.d, ctx);
    std::vector<Real> xs;
    for (int i = 0; i <= p.which; ++i)
      xs.push_back(csp::eval({rec.s, i}, rec.Z, ctx));
    xs.push_back(pv.span[p.which + 1]);
    FindResult fr = find_relation(xs, 18, ctx);
    CAPTURE(p.D);
    CAPTURE(p.which);
    REQUIRE(std::holds_alternative<IntegerRelation>(fr));
    const auto& rel = std::get<IntegerRelation>(fr);
    std::vector<mpz_class> expect = rec.rel(p.which);
    expect.push_back(-rec.k(p.which));
    normalize_relation(expect);
    CHECK(rel.m == expect);
    CHECK(rel.residual.contains_zero());
    CHECK(rel.confidence >= 5);

    // soundness: the relation still holds on higher-precision recomputation
    PrecisionContext hi(p.digits + 100);
    csp::PeriodValues pv2 =
        csp::span_values(Discriminant::validate(rec.D), rec.d, hi);
    Real resid = mul_mpz(pv2.span[p.which + 1], rel.m.back());
    for (int i = 0; i <= p.which; ++i)
      resid += mul_mpz(csp::eval({rec.s, i}, rec.Z, hi), rel.m[i]);
    CHECK(resid.contains_zero());
    CHECK(abs(resid).abs_upper_below_pow10(-(p.digits + 60)));
  }
}
