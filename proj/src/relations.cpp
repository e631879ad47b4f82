#include "csperiod/relations.hpp"

#include <algorithm>
#include <numeric>

namespace csp {

namespace {

mpz_class dot(const LatticeRow& a, const LatticeRow& b) {
  mpz_class s = 0;
  for (size_t t = 0; t < a.size(); ++t) s += a[t] * b[t];
  return s;
}

// r = round(num / den) to nearest, den > 0, halves toward +inf
mpz_class round_quotient(const mpz_class& num, const mpz_class& den) {
  mpz_class r, n2 = 2 * num + den, d2 = 2 * den;
  mpz_fdiv_q(r.get_mpz_t(), n2.get_mpz_t(), d2.get_mpz_t());
  return r;
}

}  // namespace

LatticeBasis lll_reduce(LatticeBasis b, const mpq_class& delta,
                        LatticeBasis* change_of_basis) {
  const size_t n = b.size();
  if (n < 2) throw InvalidInput("lattice basis needs at least 2 rows");
  const size_t m = b[0].size();
  for (const auto& row : b)
    if (row.size() != m)
      throw InvalidInput("lattice basis rows must have equal dimension");
  if (delta <= mpq_class(1, 4) || delta >= 1)
    throw InvalidInput("LLL delta must lie in (1/4, 1)");
  mpz_class p = delta.get_num(), q = delta.get_den();

  LatticeBasis U;
  if (change_of_basis) {
    U.assign(n, LatticeRow(n, 0));
    for (size_t i = 0; i < n; ++i) U[i][i] = 1;
  }

  std::vector<mpz_class> d(n + 1, mpz_class(1));
  std::vector<std::vector<mpz_class>> lam(n, std::vector<mpz_class>(n, 0));

  auto incremental_gs = [&](size_t k) {
    for (size_t j = 0; j <= k; ++j) {
      mpz_class u = dot(b[k], b[j]);
      for (size_t i = 0; i < j; ++i)
        u = (d[i + 1] * u - lam[k][i] * lam[j][i]) / d[i];
      if (j < k) {
        lam[k][j] = u;
      } else {
        if (u <= 0)
          throw InvalidInput("lll_reduce requires linearly independent rows");
        d[k + 1] = u;
      }
    }
  };

  auto red = [&](size_t k, size_t l) {
    if (2 * abs(lam[k][l]) > d[l + 1]) {
      mpz_class r = round_quotient(lam[k][l], d[l + 1]);
      for (size_t t = 0; t < m; ++t) b[k][t] -= r * b[l][t];
      if (change_of_basis)
        for (size_t t = 0; t < n; ++t) U[k][t] -= r * U[l][t];
      lam[k][l] -= r * d[l + 1];
      for (size_t i = 0; i < l; ++i) lam[k][i] -= r * lam[l][i];
    }
  };

  size_t kmax = 0;
  auto do_swap = [&](size_t k) {
    std::swap(b[k], b[k - 1]);
    if (change_of_basis) std::swap(U[k], U[k - 1]);
    for (size_t j = 0; j + 1 < k; ++j) std::swap(lam[k][j], lam[k - 1][j]);
    mpz_class lbar = lam[k][k - 1];
    mpz_class B = (d[k - 1] * d[k + 1] + lbar * lbar) / d[k];
    for (size_t i = k + 1; i <= kmax; ++i) {
      mpz_class t = lam[i][k];
      lam[i][k] = (d[k + 1] * lam[i][k - 1] - lbar * t) / d[k];
      lam[i][k - 1] = (B * t + lbar * lam[i][k]) / d[k + 1];
    }
    d[k] = B;
  };

  incremental_gs(0);
  size_t k = 1;
  while (k < n) {
    if (k > kmax) {
      kmax = k;
      incremental_gs(k);
    }
    red(k, k - 1);
    // Lovász test (integral form): swap when
    //   q * d[k+1] * d[k-1] < p * d[k]^2 - q * lam[k][k-1]^2
    if (q * d[k + 1] * d[k - 1] <
        p * d[k] * d[k] - q * lam[k][k - 1] * lam[k][k - 1]) {
      do_swap(k);
      k = std::max<size_t>(1, k - 1);
    } else {
      for (size_t l = k - 1; l-- > 0;) red(k, l);
      ++k;
    }
  }

  if (change_of_basis) *change_of_basis = std::move(U);
  return b;
}

mpz_class determinant(LatticeBasis a) {
  const size_t n = a.size();
  for (const auto& row : a)
    if (row.size() != n) throw InvalidInput("determinant needs a square matrix");
  if (n == 0) return 1;
  // fraction-free Bareiss, with row pivoting tracked by sign
  mpz_class prev = 1;
  int sign = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      size_t piv = k + 1;
      while (piv < n && a[piv][k] == 0) ++piv;
      if (piv == n) return 0;
      std::swap(a[k], a[piv]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i) {
      for (size_t j = k + 1; j < n; ++j)
        a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev;
      a[i][k] = 0;
    }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

void normalize_relation(std::vector<mpz_class>& m) {
  mpz_class g = 0;
  for (const auto& x : m) g = gcd(g, x);
  if (g == 0) throw InvalidInput("relation vector must be nonzero");
  for (auto& x : m) x /= g;
  for (const auto& x : m) {
    if (x != 0) {
      if (x < 0)
        for (auto& y : m) y = -y;
      break;
    }
  }
}

namespace {

// exact conversion of an mpfr value to a rational (mantissa * 2^e)
mpq_class mpfr_to_mpq(mpfr_srcptr x) {
  if (mpfr_zero_p(x)) return mpq_class(0);
  mpz_class man;
  mpfr_exp_t e = mpfr_get_z_2exp(man.get_mpz_t(), x);
  mpq_class r(man);
  if (e >= 0)
    mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
  else
    mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
  return r;
}

}  // namespace

FindResult find_relation(const std::vector<Real>& xs, long max_coeff_digits,
                         const PrecisionContext& ctx) {
  const size_t n = xs.size();
  if (n < 2) throw InvalidInput("find_relation needs at least 2 values");
  if (max_coeff_digits < 1)
    throw InvalidInput("max_coeff_digits must be >= 1");
  long need = 2 * static_cast<long>(n) * max_coeff_digits + 40;
  if (ctx.digits() < need)
    throw InsufficientPrecision(
        "find_relation requires digits >= 2*n*max_coeff_digits + 40 (= " +
        std::to_string(need) + ")");

  const long scale_pow10 = ctx.digits() - ctx.guard();
  // each input must be accurate to the embedding scale: err * 10^scale <= 1
  for (const auto& x : xs)
    if (!x.err_at_most_pow10(-scale_pow10))
      throw InsufficientPrecision(
          "input error exceeds the relation-embedding scale");

  LatticeBasis rows(n, LatticeRow(n + 1, 0));
  for (size_t k = 0; k < n; ++k) {
    rows[k][k] = 1;
    rows[k][n] = xs[k].scaled_round(scale_pow10);
  }

  LatticeBasis red = lll_reduce(rows);

  // rank rows by squared norm, ties by position (deterministic)
  std::vector<size_t> order(n);
  std::vector<mpz_class> nsq(n);
  for (size_t i = 0; i < n; ++i) {
    order[i] = i;
    nsq[i] = dot(red[i], red[i]);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t c) { return nsq[a] < nsq[c]; });

  mpz_class M;
  mpz_ui_pow_ui(M.get_mpz_t(), 10,
                static_cast<unsigned long>(max_coeff_digits));

  for (size_t pos = 0; pos < n; ++pos) {
    const LatticeRow& cand = red[order[pos]];
    std::vector<mpz_class> mvec(cand.begin(), cand.begin() + n);
    bool nonzero = false, small = true;
    for (const auto& x : mvec) {
      if (x != 0) nonzero = true;
      if (abs(x) > M) small = false;
    }
    if (!nonzero || !small) continue;
    Real resid = Real::from_long(0, ctx);
    for (size_t i = 0; i < n; ++i) resid += mul_mpz(xs[i], mvec[i]);
    resid = abs(resid);
    if (!resid.contains_zero()) continue;

    normalize_relation(mvec);
    Real resid_n = Real::from_long(0, ctx);
    for (size_t i = 0; i < n; ++i) resid_n += mul_mpz(xs[i], mvec[i]);
    resid_n = abs(resid_n);

    // margin to the next-smallest reduced row, in decimal digits
    long confidence = 0;
    for (size_t q = 0; q < n; ++q) {
      if (q == pos) continue;
      mpfr_t ra, rb;
      mpfr_init2(ra, 64);
      mpfr_init2(rb, 64);
      mpfr_set_z(ra, nsq[order[pos]].get_mpz_t(), MPFR_RNDN);
      mpfr_set_z(rb, nsq[order[q]].get_mpz_t(), MPFR_RNDN);
      mpfr_div(ra, rb, ra, MPFR_RNDN);
      mpfr_log10(ra, ra, MPFR_RNDN);
      mpfr_div_ui(ra, ra, 2, MPFR_RNDN);  // norms, not squared norms
      mpfr_floor(ra, ra);
      confidence = mpfr_get_si(ra, MPFR_RNDN);
      mpfr_clear(ra);
      mpfr_clear(rb);
      break;  // q runs over sorted positions; first non-pos is next-best
    }

    IntegerRelation rel;
    rel.m = std::move(mvec);
    rel.residual = std::move(resid_n);
    rel.confidence = confidence;
    return rel;
  }

  // No candidate row: certify exclusion.  LLL (delta=3/4) guarantees the
  // shortest reduced row is within 2^{(n-1)/2} of the lattice minimum, so
  //   lambda_min^2 >= |b_1|^2 / 2^{n-1}.
  // Any coefficient vector with max|m| <= M embeds to a lattice vector whose
  // last coordinate therefore satisfies |sum m_k y_k| >= sqrt(lambda^2-n M^2),
  // and unscaling + rounding/ball slack gives the certified threshold.
  mpq_class lam2(nsq[order[0]]);
  mpz_class two_pow;
  mpz_ui_pow_ui(two_pow.get_mpz_t(), 2, static_cast<unsigned long>(n - 1));
  lam2 /= mpq_class(two_pow);
  mpq_class gap = lam2 - mpq_class(static_cast<long>(n)) * mpq_class(M * M);
  if (gap <= 0)
    throw InsufficientPrecision(
        "cannot certify relation exclusion at this precision");

  mpfr_t S, t, emax;
  mpfr_init2(S, 64);
  mpfr_init2(t, 64);
  mpfr_init2(emax, 64);
  mpfr_set_q(S, gap.get_mpq_t(), MPFR_RNDD);
  mpfr_sqrt(S, S, MPFR_RNDD);
  // subtract rounding slack n*M/2
  mpfr_set_z(t, M.get_mpz_t(), MPFR_RNDU);
  mpfr_mul_ui(t, t, static_cast<unsigned long>(n), MPFR_RNDU);
  mpfr_div_ui(t, t, 2, MPFR_RNDU);
  mpfr_sub(S, S, t, MPFR_RNDD);
  // unscale by C = 10^scale_pow10
  mpz_class C;
  mpz_ui_pow_ui(C.get_mpz_t(), 10, static_cast<unsigned long>(scale_pow10));
  mpfr_set_z(t, C.get_mpz_t(), MPFR_RNDU);
  mpfr_div(S, S, t, MPFR_RNDD);
  // subtract the input-ball slack n*M*E_max
  mpfr_set_ui(emax, 0, MPFR_RNDU);
  for (const auto& x : xs)
    if (mpfr_cmp(x.err(), emax) > 0) mpfr_set(emax, x.err(), MPFR_RNDU);
  mpfr_set_z(t, M.get_mpz_t(), MPFR_RNDU);
  mpfr_mul_ui(t, t, static_cast<unsigned long>(n), MPFR_RNDU);
  mpfr_mul(t, t, emax, MPFR_RNDU);
  mpfr_sub(S, S, t, MPFR_RNDD);

  bool ok = mpfr_sgn(S) > 0;
  mpq_class tau = ok ? mpfr_to_mpq(S) : mpq_class(0);
  mpfr_clear(S);
  mpfr_clear(t);
  mpfr_clear(emax);
  if (!ok)
    throw InsufficientPrecision(
        "cannot certify relation exclusion at this precision");

  NoRelation none;
  none.max_coeff_digits = max_coeff_digits;
  none.exclusion_threshold = Real::from_mpq(tau, ctx);
  return none;
}

}  // namespace csp
