#include "csperiod/pade.hpp"

#include <algorithm>
#include <stdexcept>

#include "csperiod/hypergeom.hpp"

namespace csp {

namespace {

// Row t holds the z^t series coefficients of the four slots (1, f0, f1, f2):
// (t == 0 ? 1 : 0), b_t, b_t*t, b_t*t^2.
class SeriesTable {
 public:
  explicit SeriesTable(const mpq_class& s) : stream_(s) {}

  const std::array<mpq_class, 4>& row(long t) {
    while (static_cast<long>(rows_.size()) <= t) {
      long u = static_cast<long>(rows_.size());
      std::array<mpq_class, 4> r;
      r[0] = (u == 0) ? 1 : 0;
      r[1] = stream_.value();
      r[2] = r[1] * u;
      r[3] = r[2] * u;
      rows_.push_back(std::move(r));
      stream_.advance();
    }
    return rows_[static_cast<size_t>(t)];
  }

 private:
  CoeffStream stream_;
  std::vector<std::array<mpq_class, 4>> rows_;
};

mpq_class series_coeff(const PadeForm& form, SeriesTable& table, long m) {
  mpq_class rm = 0;
  for (int k = 0; k < 4; ++k)
    for (long j = 0; j <= form.degrees[static_cast<size_t>(k)]; ++j)
      if (m >= j)
        rm += mpq_class(form.polys[static_cast<size_t>(k)][static_cast<size_t>(j)]) *
              table.row(m - j)[static_cast<size_t>(k)];
  return rm;
}

mpq_class horner(const std::vector<mpz_class>& poly, const mpq_class& z) {
  mpq_class acc = 0;
  for (size_t j = poly.size(); j-- > 0;) acc = acc * z + mpq_class(poly[j]);
  return acc;
}

}  // namespace

PadeForm construct(const mpq_class& s, const std::array<int, 4>& degrees) {
  validate_params(HyperParams{s, 0});
  long total = 0;
  for (int dk : degrees) {
    if (dk < -1) throw InvalidInput("degree bounds must be >= -1");
    total += dk + 1;
  }
  if (total < 2)
    throw InvalidInput("degree bounds must admit at least 2 coefficients");
  const long sigma = total - 1;
  const long ncols = total;
  const long scan_cap = sigma + 64;

  SeriesTable table(s);

  // column order: slot-major, power-minor
  struct Col {
    int k;
    long j;
  };
  std::vector<Col> cols;
  for (int k = 0; k < 4; ++k)
    for (long j = 0; j <= degrees[static_cast<size_t>(k)]; ++j)
      cols.push_back({k, j});

  // rows m = 0..sigma-1 of the vanishing conditions, cleared to integers
  std::vector<std::vector<mpz_class>> a(
      static_cast<size_t>(sigma), std::vector<mpz_class>(static_cast<size_t>(ncols)));
  for (long m = 0; m < sigma; ++m) {
    std::vector<mpq_class> rowq(static_cast<size_t>(ncols));
    mpz_class l = 1;
    for (long col = 0; col < ncols; ++col) {
      const Col& cc = cols[static_cast<size_t>(col)];
      rowq[static_cast<size_t>(col)] =
          (m >= cc.j) ? table.row(m - cc.j)[static_cast<size_t>(cc.k)]
                      : mpq_class(0);
      l = lcm(l, rowq[static_cast<size_t>(col)].get_den());
    }
    for (long col = 0; col < ncols; ++col) {
      mpq_class t = rowq[static_cast<size_t>(col)] * l;
      a[static_cast<size_t>(m)][static_cast<size_t>(col)] = t.get_num();
    }
  }

  // fraction-free echelon elimination (one-step Bareiss), first-nonzero pivot
  std::vector<long> pivot_col;
  mpz_class prev = 1;
  long r = 0;
  for (long col = 0; col < ncols && r < sigma; ++col) {
    long pr = -1;
    for (long i = r; i < sigma; ++i) {
      if (a[static_cast<size_t>(i)][static_cast<size_t>(col)] != 0) {
        pr = i;
        break;
      }
    }
    if (pr < 0) continue;  // free column
    std::swap(a[static_cast<size_t>(r)], a[static_cast<size_t>(pr)]);
    for (long i = r + 1; i < sigma; ++i) {
      auto& ai = a[static_cast<size_t>(i)];
      const auto& ar = a[static_cast<size_t>(r)];
      for (long jj = col + 1; jj < ncols; ++jj)
        ai[static_cast<size_t>(jj)] =
            (ar[static_cast<size_t>(col)] * ai[static_cast<size_t>(jj)] -
             ai[static_cast<size_t>(col)] * ar[static_cast<size_t>(jj)]) /
            prev;
      ai[static_cast<size_t>(col)] = 0;
    }
    prev = a[static_cast<size_t>(r)][static_cast<size_t>(col)];
    pivot_col.push_back(col);
    ++r;
  }

  const long rank = r;
  const long nullity = ncols - rank;  // >= 1 by construction

  long free_col = -1;
  {
    std::vector<char> is_piv(static_cast<size_t>(ncols), 0);
    for (long pc : pivot_col) is_piv[static_cast<size_t>(pc)] = 1;
    for (long col = 0; col < ncols; ++col)
      if (!is_piv[static_cast<size_t>(col)]) {
        free_col = col;
        break;
      }
  }

  // back-substitution with the free variable set to 1, exact rationals
  std::vector<mpq_class> x(static_cast<size_t>(ncols), mpq_class(0));
  x[static_cast<size_t>(free_col)] = 1;
  for (long rr = rank - 1; rr >= 0; --rr) {
    long pc = pivot_col[static_cast<size_t>(rr)];
    mpq_class acc = 0;
    for (long col = pc + 1; col < ncols; ++col)
      if (x[static_cast<size_t>(col)] != 0)
        acc += mpq_class(a[static_cast<size_t>(rr)][static_cast<size_t>(col)]) *
               x[static_cast<size_t>(col)];
    x[static_cast<size_t>(pc)] =
        -acc / mpq_class(a[static_cast<size_t>(rr)][static_cast<size_t>(pc)]);
  }

  // clear to coprime integers with positive first nonzero entry
  mpz_class denl = 1;
  for (const auto& q : x) denl = lcm(denl, q.get_den());
  std::vector<mpz_class> xi(static_cast<size_t>(ncols));
  mpz_class g = 0;
  for (long col = 0; col < ncols; ++col) {
    mpq_class t = x[static_cast<size_t>(col)] * denl;
    xi[static_cast<size_t>(col)] = t.get_num();
    g = gcd(g, xi[static_cast<size_t>(col)]);
  }
  for (auto& v : xi) v /= g;
  for (const auto& v : xi) {
    if (v != 0) {
      if (v < 0)
        for (auto& w : xi) w = -w;
      break;
    }
  }

  PadeForm form;
  form.s = s;
  form.degrees = degrees;
  form.sigma = sigma;
  form.unique = (nullity == 1);
  for (int k = 0; k < 4; ++k)
    if (degrees[static_cast<size_t>(k)] >= 0)
      form.polys[static_cast<size_t>(k)].assign(
          static_cast<size_t>(degrees[static_cast<size_t>(k)]) + 1, mpz_class(0));
  for (long col = 0; col < ncols; ++col) {
    const Col& cc = cols[static_cast<size_t>(col)];
    form.polys[static_cast<size_t>(cc.k)][static_cast<size_t>(cc.j)] =
        xi[static_cast<size_t>(col)];
  }

  // the forced coefficients must vanish exactly; then find the actual order
  for (long m = 0; m < sigma; ++m)
    if (series_coeff(form, table, m) != 0)
      throw std::logic_error("forced series coefficient failed to vanish");
  long order = -1;
  for (long m = sigma; m <= scan_cap; ++m)
    if (series_coeff(form, table, m) != 0) {
      order = m;
      break;
    }
  if (order < 0)
    throw InvalidInput("remainder vanishes beyond the scan window");
  form.order = order;
  return form;
}

DecayReport remainder_decay(const mpq_class& s, long N, const mpz_class& Z,
                            const PrecisionContext& ctx) {
  validate_params(HyperParams{s, 0});
  if (N < 1) throw InvalidInput("decay report needs N >= 1");
  if (abs(Z) < 2) throw InvalidInput("|Z| must be >= 2");

  DecayReport rep;
  rep.s = s;
  rep.Z = Z;
  rep.N = N;
  rep.digits = ctx.digits();

  mpq_class zq(mpz_class(1), Z);
  zq.canonicalize();
  mpq_class zqa = abs(zq);

  const Real f[3] = {eval(HyperParams{s, 0}, Z, ctx),
                     eval(HyperParams{s, 1}, Z, ctx),
                     eval(HyperParams{s, 2}, Z, ctx)};

  mpfr_t xub, tsq, l1f, bnd, sabs, thr, p10;
  mpfr_init2(xub, 64);
  mpfr_init2(tsq, 64);
  mpfr_init2(l1f, 64);
  mpfr_init2(bnd, 64);
  mpfr_init2(sabs, 64);
  mpfr_init2(thr, 64);
  mpfr_init2(p10, 64);
  mpfr_set_q(xub, zqa.get_mpq_t(), MPFR_RNDU);
  mpfr_ui_pow_ui(p10, 10,
                 static_cast<unsigned long>(ctx.digits() + ctx.guard()),
                 MPFR_RNDU);

  Real prev_mag = Real::from_long(0, ctx);
  bool have_prev = false;
  bool strictly = true;

  for (long n = 1; n <= N; ++n) {
    PadeForm form = construct(s, {static_cast<int>(n), static_cast<int>(n),
                                  static_cast<int>(n), static_cast<int>(n)});
    DecayRow row;
    row.n = n;
    row.sigma = form.sigma;
    row.order = form.order;

    // L1 coefficient mass and max-coefficient magnitude
    mpz_class l1 = 0, cmax = 0;
    for (const auto& poly : form.polys)
      for (const auto& ccoef : poly) {
        l1 += abs(ccoef);
        if (abs(ccoef) > cmax) cmax = abs(ccoef);
      }
    mpfr_set_z(l1f, l1.get_mpz_t(), MPFR_RNDU);
    mpfr_set_z(sabs, cmax.get_mpz_t(), MPFR_RNDU);
    mpfr_log10(sabs, sabs, MPFR_RNDN);
    row.log10_coeff_norm = mpfr_get_d(sabs, MPFR_RNDN);

    // exact series tail with relative-precision stopping
    SeriesTable table(s);
    mpq_class sum = 0, zpow = 1;
    for (long i = 0; i < form.sigma; ++i) zpow *= zq;
    bool stopped = false;
    long m = form.sigma;
    const long cap = form.sigma + 5000;
    for (; m <= cap; ++m) {
      sum += series_coeff(form, table, m) * zpow;
      zpow *= zq;
      tail_sum_quadratic(tsq, xub, static_cast<unsigned long>(m));
      mpfr_mul(bnd, tsq, l1f, MPFR_RNDU);
      if (sum != 0) {
        mpfr_set_q(sabs, sum.get_mpq_t(), MPFR_RNDZ);
        mpfr_abs(sabs, sabs, MPFR_RNDD);
        mpfr_div(thr, sabs, p10, MPFR_RNDD);
        if (mpfr_cmp(bnd, thr) <= 0) {
          stopped = true;
          break;
        }
      }
    }
    Real tail_ball = Real::from_mpq(sum, ctx);
    tail_ball.add_err(bnd);

    // polynomial-combination route for consistency
    Real combo = Real::from_mpq(horner(form.polys[0], zq), ctx);
    for (int k = 1; k < 4; ++k)
      combo += Real::from_mpq(horner(form.polys[static_cast<size_t>(k)], zq),
                              ctx) *
               f[k - 1];

    Real mag = abs(tail_ball);
    row.resolved = stopped && !mag.contains_zero();
    row.consistent = (tail_ball - combo).contains_zero();
    row.log10_remainder = row.resolved ? mag.value_log10_abs() : 0.0;

    if (have_prev) {
      if (!(row.resolved && (prev_mag - mag).definitely_positive()))
        strictly = false;
    } else if (!row.resolved) {
      strictly = false;
    }
    prev_mag = mag;
    have_prev = true;

    rep.rows.push_back(row);
  }

  mpfr_clear(xub);
  mpfr_clear(tsq);
  mpfr_clear(l1f);
  mpfr_clear(bnd);
  mpfr_clear(sabs);
  mpfr_clear(thr);
  mpfr_clear(p10);

  rep.strictly_decreasing = strictly;

  // least-squares slopes vs n
  auto slope = [](const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() < 2) return 0.0;
    double mx = 0, my = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
      mx += xs[i];
      my += ys[i];
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double num = 0, den = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
      num += (xs[i] - mx) * (ys[i] - my);
      den += (xs[i] - mx) * (xs[i] - mx);
    }
    return den > 0 ? num / den : 0.0;
  };
  std::vector<double> nsr, ysr, nsc, ysc;
  for (const auto& row : rep.rows) {
    if (row.resolved) {
      nsr.push_back(static_cast<double>(row.n));
      ysr.push_back(row.log10_remainder);
    }
    nsc.push_back(static_cast<double>(row.n));
    ysc.push_back(row.log10_coeff_norm);
  }
  rep.slope_log10_remainder = slope(nsr, ysr);
  rep.slope_log10_coeff = slope(nsc, ysc);
  return rep;
}

}  // namespace csp
