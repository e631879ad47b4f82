#include "csperiod/identities.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <sstream>

#include "csperiod/hypergeom.hpp"
#include "csperiod/relations.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace csp {

namespace {

constexpr mpfr_prec_t kMagPrec = 32;
constexpr long kExhaustiveHeightCap = 50;

std::vector<CaseRecord> build_catalog() {
  std::vector<CaseRecord> v;
  {
    CaseRecord r;
    r.D = -148;
    r.d = 1;
    r.s = mpq_class(1, 4);
    r.Z = mpz_class(-777924);  // -882^2
    r.h = 2;
    r.rel0 = {mpz_class(1)};
    r.k0 = 42;
    r.rel1 = {mpz_class(1123), mpz_class(21460)};
    r.k1 = 3528;
    r.rel2 = {mpz_class(157655), mpz_class(6024969), mpz_class(115132900)};
    r.k2 = 37044;
    r.mu_printed = "57.53011083";
    v.push_back(r);
  }
  {
    CaseRecord r;
    r.D = -232;
    r.d = 2;
    r.s = mpq_class(1, 4);
    r.Z = mpz_class(96059601);  // 99^4
    r.h = 2;
    r.rel0 = {mpz_class(1)};
    r.k0 = 99;
    r.rel1 = {mpz_class(4412), mpz_class(105560)};
    r.k1 = 9801;
    r.rel2 = {mpz_class(77862889), mpz_class(3725845296L),
              mpz_class(89143308800L)};
    r.k2 = 3881196;
    r.mu_printed = "13.93477619";
    v.push_back(r);
  }
  {
    CaseRecord r;
    r.D = -267;
    r.d = 3;
    r.s = mpq_class(1, 3);
    r.Z = mpz_class(-250000);  // -500^2
    r.h = 2;
    r.rel0 = {mpz_class(1)};
    r.k0 = 75;
    r.rel1 = {mpz_class(827), mpz_class(14151)};
    r.k1 = 1500;
    r.rel2 = {mpz_class(684107), mpz_class(23406555), mpz_class(400501602)};
    r.k2 = 30000;
    r.mu_printed = "44.12528464";
    v.push_back(r);
  }
  {
    CaseRecord r;
    r.D = -163;
    r.d = 10005;
    r.s = mpq_class(1, 6);
    r.Z = mpz_class(-151931373056000L);  // -53360^3
    r.h = 1;
    r.rel0 = {mpz_class(1)};
    r.k0 = 2;
    r.rel1 = {mpz_class(13591409), mpz_class(545140134L)};
    r.k1 = 426880;
    r.rel2 = {mpz_class(277089597908329L), mpz_class(22227667570529352L),
              mpz_class(891533297092613868L)};
    r.k2 = 136669900800L;
    r.mu_printed = "10.02136339";
    v.push_back(r);
  }
  return v;
}

}  // namespace

const std::vector<CaseRecord>& catalog() {
  static const std::vector<CaseRecord> cat = build_catalog();
  return cat;
}

const CaseRecord& catalog_case(long D) {
  for (const auto& r : catalog())
    if (r.D == D) return r;
  throw InvalidInput("no catalog case with D = " + std::to_string(D));
}

const std::vector<mpz_class>& CaseRecord::rel(int which) const {
  switch (which) {
    case 0: return rel0;
    case 1: return rel1;
    case 2: return rel2;
    default: throw InvalidInput("identity selector must be 0, 1, or 2");
  }
}

const mpz_class& CaseRecord::k(int which) const {
  switch (which) {
    case 0: return k0;
    case 1: return k1;
    case 2: return k2;
    default: throw InvalidInput("identity selector must be 0, 1, or 2");
  }
}

mpq_class CaseRecord::mu_lower() const { return mpq_from_string(mu_printed); }

mpq_class CaseRecord::mu_upper() const {
  // printed constants are truncated, not rounded; pad the unknown tail
  return mu_lower() + mpq_class(1, 100000000);
}

std::string catalog_fingerprint() {
  std::ostringstream os;
  for (const auto& r : catalog()) {
    os << "D=" << r.D << ";d=" << r.d << ";s=" << r.s.get_str()
       << ";Z=" << r.Z.get_str() << ";h=" << r.h << ";rel0=";
    for (const auto& x : r.rel0) os << x.get_str() << ",";
    os << "k0=" << r.k0.get_str() << ";rel1=";
    for (const auto& x : r.rel1) os << x.get_str() << ",";
    os << "k1=" << r.k1.get_str() << ";rel2=";
    for (const auto& x : r.rel2) os << x.get_str() << ",";
    os << "k2=" << r.k2.get_str() << ";mu=" << r.mu_printed << "|";
  }
  return os.str();
}

IdentityResidual verify_identity(const CaseRecord& rec, int which,
                                 const PrecisionContext& ctx,
                                 EvalPolicy policy) {
  if (which < 0 || which > 2)
    throw InvalidInput("identity selector must be 0, 1, or 2");
  if (ctx.digits() < 100)
    throw InvalidInput("identity verification requires digits >= 100");

  PeriodValues pv =
      span_values(Discriminant::validate(rec.D), rec.d, ctx, policy);

  const auto& cs = rec.rel(which);
  Real lhs = Real::from_long(0, ctx);
  for (size_t i = 0; i < cs.size(); ++i) {
    HyperParams p{rec.s, static_cast<int>(i)};
    lhs += mul_mpz(eval(p, rec.Z, ctx), cs[i]);
  }
  const Real& target =
      which == 0 ? pv.span[1] : (which == 1 ? pv.span[2] : pv.span[3]);
  Real rhs = mul_mpz(target, rec.k(which));

  IdentityResidual out;
  out.D = rec.D;
  out.d = rec.d;
  out.which = which;
  out.digits = ctx.digits();
  out.lhs = lhs;
  out.rhs = rhs;
  out.residual = abs(lhs - rhs);
  out.rel_residual = out.residual / abs(rhs);
  out.tolerance_exp10 = -(ctx.digits() - 50);
  out.pass = out.rel_residual.abs_upper_below_pow10(out.tolerance_exp10);
  return out;
}

// ---------------------------------------------------------------------------
// Probe

namespace {

struct BlockOut {
  bool has_min = false;
  long argmin[4] = {0, 0, 0, 0};
  long below = 0;
  // slice outputs are produced only by the m1 = 0 block
  bool has_slice_min = false;
  long argmin_slice[4] = {0, 0, 0, 0};
  long below_slice = 0;
};

// |q0 + q1 v1 + q2 v2 + q3 v3| midpoint, at full precision, into out.
void form_mid(mpfr_ptr out, const long q[4], mpfr_srcptr v1, mpfr_srcptr v2,
              mpfr_srcptr v3) {
  mpfr_t t;
  mpfr_init2(t, mpfr_get_prec(out));
  mpfr_mul_si(out, v1, q[1], MPFR_RNDN);
  mpfr_add_si(out, out, q[0], MPFR_RNDN);
  mpfr_mul_si(t, v2, q[2], MPFR_RNDN);
  mpfr_add(out, out, t, MPFR_RNDN);
  mpfr_mul_si(t, v3, q[3], MPFR_RNDN);
  mpfr_add(out, out, t, MPFR_RNDN);
  mpfr_abs(out, out, MPFR_RNDN);
  mpfr_clear(t);
}

bool lex_less(const long a[4], const long b[4]) {
  for (int i = 0; i < 4; ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

// 64-bit certified lower bound of h^expo for h >= 1 and expo < 0.
void bound_lower(mpfr_ptr out, long h, const mpq_class& expo) {
  mpfr_t lnh, ex;
  mpfr_init2(lnh, 64);
  mpfr_init2(ex, 64);
  mpfr_set_ui(lnh, static_cast<unsigned long>(h), MPFR_RNDU);
  mpfr_log(lnh, lnh, MPFR_RNDU);
  mpfr_set_q(ex, expo.get_mpq_t(), MPFR_RNDD);
  mpfr_mul(ex, ex, lnh, MPFR_RNDD);
  mpfr_exp(out, ex, MPFR_RNDD);
  mpfr_clear(lnh);
  mpfr_clear(ex);
}

// Scans every sign-class representative with this m1; tracks the minimal
// |form| and the count of classes certified below their height's bound.
void scan_block(long m1, long H, mpfr_prec_t bits, mpfr_srcptr v1,
                mpfr_srcptr v2, mpfr_srcptr v3, mpfr_srcptr eglob,
                const std::vector<mpfr_t>& bound_lo, BlockOut& out) {
  mpfr_t t1, t12, t, f, fmin, fmin_slice, fub;
  mpfr_init2(t1, bits);
  mpfr_init2(t12, bits);
  mpfr_init2(t, bits);
  mpfr_init2(f, bits);
  mpfr_init2(fmin, bits);
  mpfr_init2(fmin_slice, bits);
  mpfr_init2(fub, kMagPrec);

  // seed both minima with the pure-integer class (1,0,0,0), |form| = 1
  mpfr_set_ui(fmin, 1, MPFR_RNDN);
  out.argmin[0] = 1;
  out.argmin[1] = out.argmin[2] = out.argmin[3] = 0;
  out.has_min = true;
  if (m1 == 0) {
    mpfr_set_ui(fmin_slice, 1, MPFR_RNDN);
    out.argmin_slice[0] = 1;
    out.argmin_slice[1] = out.argmin_slice[2] = out.argmin_slice[3] = 0;
    out.has_slice_min = true;
  }

  mpfr_mul_si(t1, v1, m1, MPFR_RNDN);
  long m2_lo = (m1 > 0) ? -H : 0;
  for (long m2 = m2_lo; m2 <= H; ++m2) {
    mpfr_mul_si(t12, v2, m2, MPFR_RNDN);
    mpfr_add(t12, t12, t1, MPFR_RNDN);
    long m3_lo = (m1 != 0 || m2 != 0) ? -H : 0;
    for (long m3 = m3_lo; m3 <= H; ++m3) {
      if (m1 == 0 && m2 == 0 && m3 == 0) continue;  // handled by the seed
      mpfr_mul_si(t, v3, m3, MPFR_RNDN);
      mpfr_add(t, t, t12, MPFR_RNDN);
      // best integer offsets: round(-t) and its neighbours, clamped
      mpfr_neg(f, t, MPFR_RNDN);
      long m0c = 0;
      if (mpfr_fits_slong_p(f, MPFR_RNDN))
        m0c = mpfr_get_si(f, MPFR_RNDN);
      else
        m0c = (mpfr_sgn(f) > 0) ? H : -H;
      m0c = std::max(-H, std::min(H, m0c));
      long lo = std::max(-H, m0c - 1), hi = std::min(H, m0c + 1);
      for (long m0 = lo; m0 <= hi; ++m0) {
        mpfr_add_si(f, t, m0, MPFR_RNDN);
        mpfr_abs(f, f, MPFR_RNDN);
        long q[4] = {m0, m1, m2, m3};
        long h = std::max(std::max(std::labs(m0), std::labs(m1)),
                          std::max(std::labs(m2), std::labs(m3)));
        // certified below-bound check: |f| + E < bound_lo[h]
        mpfr_set(fub, f, MPFR_RNDU);
        mpfr_add(fub, fub, eglob, MPFR_RNDU);
        if (mpfr_cmp(fub, bound_lo[static_cast<size_t>(h)]) < 0) {
          ++out.below;
          if (m1 == 0) ++out.below_slice;
        }
        int c = mpfr_cmp(f, fmin);
        if (c < 0 || (c == 0 && lex_less(q, out.argmin))) {
          mpfr_set(fmin, f, MPFR_RNDN);
          for (int i = 0; i < 4; ++i) out.argmin[i] = q[i];
        }
        if (m1 == 0) {
          c = mpfr_cmp(f, fmin_slice);
          if (c < 0 || (c == 0 && lex_less(q, out.argmin_slice))) {
            mpfr_set(fmin_slice, f, MPFR_RNDN);
            for (int i = 0; i < 4; ++i) out.argmin_slice[i] = q[i];
          }
        }
      }
    }
  }

  mpfr_clear(t1);
  mpfr_clear(t12);
  mpfr_clear(t);
  mpfr_clear(f);
  mpfr_clear(fmin);
  mpfr_clear(fmin_slice);
  mpfr_clear(fub);
}

Real ball_form(const long q[4], const Real& x1, const Real& x2, const Real& x3,
               const PrecisionContext& ctx) {
  Real f = Real::from_long(q[0], ctx);
  f += mul_mpz(x1, mpz_class(q[1]));
  f += mul_mpz(x2, mpz_class(q[2]));
  f += mul_mpz(x3, mpz_class(q[3]));
  return abs(f);
}

// q^(1 - mu_upper - eps) as a ball, for integer height q >= 1.
Real height_bound(long h, const mpq_class& expo, const PrecisionContext& ctx) {
  Real lh = log(Real::from_long(h, ctx));
  return exp(Real::from_mpq(expo, ctx) * lh);
}

long height_of(const long q[4]) {
  return std::max(std::max(std::labs(q[0]), std::labs(q[1])),
                  std::max(std::labs(q[2]), std::labs(q[3])));
}

// Canonical sign-class representative: first nonzero of (m1, m2, m3)
// positive, or for pure-integer vectors m0 positive.
std::array<long, 4> canonical_class(std::array<long, 4> q) {
  long lead = q[1] != 0 ? q[1] : (q[2] != 0 ? q[2] : (q[3] != 0 ? q[3] : q[0]));
  if (lead < 0)
    for (auto& x : q) x = -x;
  return q;
}

// Candidate quadruples for the above-cutoff search: LLL-reduced rows of the
// scaled embedding (e_k | round(x_k * 10^t)) over a ladder of scales t.
std::set<std::array<long, 4>> lattice_candidates(const Real& x1,
                                                 const Real& x2,
                                                 const Real& x3, long height,
                                                 const PrecisionContext& ctx) {
  std::set<std::array<long, 4>> cands;
  // the four unit vectors are always candidates (height 1)
  cands.insert({1, 0, 0, 0});
  cands.insert({0, 1, 0, 0});
  cands.insert({0, 0, 1, 0});
  cands.insert({0, 0, 0, 1});
  const Real one = Real::from_long(1, ctx);
  const std::array<const Real*, 4> xs = {&one, &x1, &x2, &x3};
  const long tmax = ctx.digits() - ctx.guard();
  for (long t = 4; t <= tmax; t += 4) {
    bool representable = true;
    for (const Real* x : xs)
      if (!x->err_at_most_pow10(-t)) representable = false;
    if (!representable) break;
    LatticeBasis rows(4, LatticeRow(5, 0));
    for (size_t k = 0; k < 4; ++k) {
      rows[k][k] = 1;
      rows[k][4] = xs[k]->scaled_round(t);
    }
    LatticeBasis red = lll_reduce(rows);
    for (const auto& row : red) {
      std::array<long, 4> q{};
      bool ok = true, nonzero = false;
      for (size_t i = 0; i < 4; ++i) {
        if (!row[i].fits_slong_p()) {
          ok = false;
          break;
        }
        q[i] = row[i].get_si();
        if (q[i] != 0) nonzero = true;
        if (std::labs(q[i]) > height) ok = false;
      }
      if (ok && nonzero) cands.insert(canonical_class(q));
    }
  }
  return cands;
}

}  // namespace

ProbeReport probe_linear_forms(const CaseRecord& rec, long height,
                               const mpq_class& eps,
                               const PrecisionContext& ctx,
                               EvalPolicy policy) {
  if (height < 1) throw InvalidInput("probe height must be >= 1");
  if (sgn(eps) <= 0) throw InvalidInput("probe eps must be positive");

  PeriodValues pv =
      span_values(Discriminant::validate(rec.D), rec.d, ctx, policy);
  const Real& x1 = pv.pi_sqrt_d;
  const Real& x2 = pv.omega_over_pi;
  const Real& x3 = pv.pi_over_omega;

  // exponent 1 - mu_upper - eps (the weakest asserted bound)
  mpq_class expo = mpq_class(1) - rec.mu_upper() - eps;

  // global additive midpoint error: H*(e1+e2+e3) plus rounding slack
  mpfr_t eglob, s;
  mpfr_init2(eglob, kMagPrec);
  mpfr_init2(s, kMagPrec);
  mpfr_add(eglob, x1.err(), x2.err(), MPFR_RNDU);
  mpfr_add(eglob, eglob, x3.err(), MPFR_RNDU);
  mpfr_mul_si(eglob, eglob, height, MPFR_RNDU);
  mpfr_abs(s, x1.value(), MPFR_RNDU);
  mpfr_add(s, s, x2.value(), MPFR_RNDU);
  mpfr_abs(s, s, MPFR_RNDU);
  mpfr_add(s, s, x3.value(), MPFR_RNDU);
  mpfr_abs(s, s, MPFR_RNDU);
  mpfr_add_ui(s, s, 1, MPFR_RNDU);
  mpfr_mul_si(s, s, height, MPFR_RNDU);
  mpfr_set_ui_2exp(s, 1, mpfr_get_exp(s) + 6 - ctx.bits(), MPFR_RNDU);
  mpfr_add(eglob, eglob, s, MPFR_RNDU);

  long best[4] = {1, 0, 0, 0};
  long best_slice[4] = {1, 0, 0, 0};
  long below = 0, below_slice = 0;
  const bool exhaustive = height <= kExhaustiveHeightCap;

  if (exhaustive) {
    // per-height certified lower bounds of h^expo, for violation counting
    std::vector<mpfr_t> bound_lo(static_cast<size_t>(height) + 1);
    mpfr_init2(bound_lo[0], 64);
    mpfr_set_ui(bound_lo[0], 0, MPFR_RNDN);
    for (long h = 1; h <= height; ++h) {
      mpfr_init2(bound_lo[static_cast<size_t>(h)], 64);
      bound_lower(bound_lo[static_cast<size_t>(h)], h, expo);
    }

    std::vector<BlockOut> blocks(static_cast<size_t>(height) + 1);
    if (policy == EvalPolicy::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
      for (long m1 = 0; m1 <= height; ++m1)
        scan_block(m1, height, ctx.bits(), x1.value(), x2.value(), x3.value(),
                   eglob, bound_lo, blocks[static_cast<size_t>(m1)]);
    } else {
      for (long m1 = 0; m1 <= height; ++m1)
        scan_block(m1, height, ctx.bits(), x1.value(), x2.value(), x3.value(),
                   eglob, bound_lo, blocks[static_cast<size_t>(m1)]);
    }

    // deterministic merge in m1 order, comparing recomputed midpoints
    mpfr_t fbest, fcur;
    mpfr_init2(fbest, ctx.bits());
    mpfr_init2(fcur, ctx.bits());
    form_mid(fbest, best, x1.value(), x2.value(), x3.value());
    for (const auto& b : blocks) {
      below += b.below;
      if (!b.has_min) continue;
      form_mid(fcur, b.argmin, x1.value(), x2.value(), x3.value());
      int c = mpfr_cmp(fcur, fbest);
      if (c < 0 || (c == 0 && lex_less(b.argmin, best))) {
        mpfr_set(fbest, fcur, MPFR_RNDN);
        for (int i = 0; i < 4; ++i) best[i] = b.argmin[i];
      }
    }
    mpfr_clear(fbest);
    mpfr_clear(fcur);
    for (int i = 0; i < 4; ++i) best_slice[i] = blocks[0].argmin_slice[i];
    below_slice = blocks[0].below_slice;
    for (auto& bl : bound_lo) mpfr_clear(bl);
  } else {
    // candidate search via lattice reduction: not exhaustive, but the
    // reduced rows are where any violating short form would surface
    auto cands = lattice_candidates(x1, x2, x3, height, ctx);
    mpfr_t fbest, fbest_sl, fcur, fub, blo;
    mpfr_init2(fbest, ctx.bits());
    mpfr_init2(fbest_sl, ctx.bits());
    mpfr_init2(fcur, ctx.bits());
    mpfr_init2(fub, kMagPrec);
    mpfr_init2(blo, 64);
    mpfr_set_ui(fbest, 1, MPFR_RNDN);
    mpfr_set_ui(fbest_sl, 1, MPFR_RNDN);
    for (const auto& qa : cands) {
      long q[4] = {qa[0], qa[1], qa[2], qa[3]};
      if (q[0] == 1 && q[1] == 0 && q[2] == 0 && q[3] == 0) continue;
      form_mid(fcur, q, x1.value(), x2.value(), x3.value());
      bound_lower(blo, height_of(q), expo);
      mpfr_set(fub, fcur, MPFR_RNDU);
      mpfr_add(fub, fub, eglob, MPFR_RNDU);
      if (mpfr_cmp(fub, blo) < 0) {
        ++below;
        if (q[1] == 0) ++below_slice;
      }
      int c = mpfr_cmp(fcur, fbest);
      if (c < 0 || (c == 0 && lex_less(q, best))) {
        mpfr_set(fbest, fcur, MPFR_RNDN);
        for (int i = 0; i < 4; ++i) best[i] = q[i];
      }
      if (q[1] == 0) {
        c = mpfr_cmp(fcur, fbest_sl);
        if (c < 0 || (c == 0 && lex_less(q, best_slice))) {
          mpfr_set(fbest_sl, fcur, MPFR_RNDN);
          for (int i = 0; i < 4; ++i) best_slice[i] = q[i];
        }
      }
    }
    mpfr_clear(fbest);
    mpfr_clear(fbest_sl);
    mpfr_clear(fcur);
    mpfr_clear(fub);
    mpfr_clear(blo);
  }

  mpfr_clear(eglob);
  mpfr_clear(s);

  ProbeReport rep;
  rep.D = rec.D;
  rep.d = rec.d;
  rep.height = height;
  rep.eps = eps;
  rep.digits = ctx.digits();
  rep.method = exhaustive ? "exhaustive" : "lattice";

  auto fill_slice = [&](ProbeSlice& sl, const long arg[4], long cnt) {
    sl.min_form = ball_form(arg, x1, x2, x3, ctx);
    if (sl.min_form.contains_zero())
      throw InsufficientPrecision(
          "minimal form not separable from zero at this precision");
    for (int i = 0; i < 4; ++i) sl.argmin[i] = arg[i];
    sl.argmin_height = height_of(arg);
    sl.bound = height_bound(sl.argmin_height, expo, ctx);
    Real diff = sl.min_form - sl.bound;
    if (diff.definitely_positive())
      sl.bound_satisfied = true;
    else if (diff.definitely_negative())
      sl.bound_satisfied = false;
    else
      throw InsufficientPrecision(
          "bound comparison ambiguous at this precision");
    sl.below_threshold_count = cnt;
  };

  fill_slice(rep.full, best, below);
  fill_slice(rep.m1_zero, best_slice, below_slice);
  return rep;
}

}  // namespace csp
