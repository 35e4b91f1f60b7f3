#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "partfun/cospi.hpp"
#include "partfun/expsum.hpp"
#include "partfun/modarith.hpp"
#include "partfun/numeric.hpp"

namespace partfun {

namespace detail {

// p(0)..p(127): everything below 2^32, the series is bypassed here.
inline constexpr std::uint32_t kSmallPartitionTable[128] = {
    1,          1,          2,          3,          5,          7,
    11,         15,         22,         30,         42,         56,
    77,         101,        135,        176,        231,        297,
    385,        490,        627,        792,        1002,       1255,
    1575,       1958,       2436,       3010,       3718,       4565,
    5604,       6842,       8349,       10143,      12310,      14883,
    17977,      21637,      26015,      31185,      37338,      44583,
    53174,      63261,      75175,      89134,      105558,     124754,
    147273,     173525,     204226,     239943,     281589,     329931,
    386155,     451276,     526823,     614154,     715220,     831820,
    966467,     1121505,    1300156,    1505499,    1741630,    2012558,
    2323520,    2679689,    3087735,    3554345,    4087968,    4697205,
    5392783,    6185689,    7089500,    8118264,    9289091,    10619863,
    12132164,   13848650,   15796476,   18004327,   20506255,   23338469,
    26543660,   30167357,   34262962,   38887673,   44108109,   49995925,
    56634173,   64112359,   72533807,   82010177,   92669720,   104651419,
    118114304,  133230930,  150198136,  169229875,  190569292,  214481126,
    241265379,  271248950,  304801365,  342325709,  384276336,  431149389,
    483502844,  541946240,  607163746,  679903203,  761002156,  851376628,
    952050665,  1064144451, 1188908248, 1327710076, 1482074143, 1653668665,
    1844349560, 2056148051, 2291320912, 2552338241, 2841940500, 3163127352,
    3519222692, 3913864295};

}  // namespace detail

/// Everything fixed before the term loop: term count N with remainder
/// below 1/4, the constant C(n) = (pi/6) sqrt(24n-1) and exp(C) at
/// r1 + 3 bits, where r1 is the term-1 working precision.
struct HrrPlan {
  Integer n;
  u64 terms = 0;
  Precision r1 = kMinPrecision;
  Real C;
  Real exp_C;
};

struct PartitionResult {
  Integer value;
  Integer n;
  u64 terms_used = 0;
  double residual = 0.0;
};

struct HrrStats {
  double first_term_seconds = 0.0;
  double total_seconds = 0.0;
};

struct HrrOptions {
  bool amortized = true;   // two-variable summation of Algorithm 4
  bool force_arb = false;  // never drop to hardware doubles (test mode)
  HrrStats* stats = nullptr;
};

/// Rademacher's bound M(n,N) on the truncation error |R(n,N)|,
/// computed with upward-directed rounding so the returned value is a
/// true upper bound.
inline Real remainder_bound(const Integer& n, u64 N) {
  if (n < 2) throw std::domain_error("remainder_bound: n must be >= 2");
  if (N == 0) throw std::domain_error("remainder_bound: N must be positive");
  const Precision wp = 64;
  Real pi_u(wp);
  mpfr_const_pi(pi_u.raw(), MPFR_RNDU);

  // 44 pi^2 / (225 sqrt(3)) * N^(-1/2)
  Real t1(wp);
  mpfr_sqr(t1.raw(), pi_u.raw(), MPFR_RNDU);
  mpfr_mul_ui(t1.raw(), t1.raw(), 44, MPFR_RNDU);
  Real den(wp), tmp(wp);
  mpfr_sqrt_ui(den.raw(), 3, MPFR_RNDD);
  mpfr_sqrt_ui(tmp.raw(), N, MPFR_RNDD);
  mpfr_mul(den.raw(), den.raw(), tmp.raw(), MPFR_RNDD);
  mpfr_mul_ui(den.raw(), den.raw(), 225, MPFR_RNDD);
  mpfr_div(t1.raw(), t1.raw(), den.raw(), MPFR_RNDU);

  // pi sqrt(2)/75 * sqrt(N/(n-1)) * sinh(pi/N sqrt(2n/3))
  Real t2(wp);
  mpfr_sqrt_ui(t2.raw(), 2, MPFR_RNDU);
  mpfr_mul(t2.raw(), t2.raw(), pi_u.raw(), MPFR_RNDU);
  mpfr_div_ui(t2.raw(), t2.raw(), 75, MPFR_RNDU);

  Integer nm1 = n - 1;
  Real q(wp);
  mpfr_set_ui(q.raw(), N, MPFR_RNDU);
  mpfr_set_z(tmp.raw(), nm1.get_mpz_t(), MPFR_RNDD);
  mpfr_div(q.raw(), q.raw(), tmp.raw(), MPFR_RNDU);
  mpfr_sqrt(q.raw(), q.raw(), MPFR_RNDU);
  mpfr_mul(t2.raw(), t2.raw(), q.raw(), MPFR_RNDU);

  Integer n2 = 2 * n;
  Real arg(wp);
  mpfr_set_z(arg.raw(), n2.get_mpz_t(), MPFR_RNDU);
  mpfr_div_ui(arg.raw(), arg.raw(), 3, MPFR_RNDU);
  mpfr_sqrt(arg.raw(), arg.raw(), MPFR_RNDU);
  mpfr_mul(arg.raw(), arg.raw(), pi_u.raw(), MPFR_RNDU);
  mpfr_div_ui(arg.raw(), arg.raw(), N, MPFR_RNDU);
  mpfr_sinh(arg.raw(), arg.raw(), MPFR_RNDU);
  mpfr_mul(t2.raw(), t2.raw(), arg.raw(), MPFR_RNDU);

  Real out(wp);
  mpfr_add(out.raw(), t1.raw(), t2.raw(), MPFR_RNDU);
  return out;
}

namespace detail {

// Quantities shared by the per-term precision formula, derived once
// per evaluation.
struct PrecisionParams {
  double log2_N = 0.0;
  double log2_n = 0.0;
  double log2_24n1 = 0.0;
  double C_nat = 0.0;  // C(n) = (pi/6) sqrt(24n-1)
};

inline PrecisionParams precision_params(const Integer& n, u64 N) {
  PrecisionParams p;
  Integer m24 = 24 * n - 1;
  const Precision wp = 64;
  Real t(wp);
  mpfr_set_z(t.raw(), m24.get_mpz_t(), MPFR_RNDN);
  mpfr_log2(t.raw(), t.raw(), MPFR_RNDN);
  p.log2_24n1 = t.to_double();
  mpfr_set_z(t.raw(), n.get_mpz_t(), MPFR_RNDN);
  mpfr_log2(t.raw(), t.raw(), MPFR_RNDN);
  p.log2_n = t.to_double();
  p.log2_N = std::log2(static_cast<double>(N));
  mpfr_set_z(t.raw(), m24.get_mpz_t(), MPFR_RNDN);
  mpfr_sqrt(t.raw(), t.raw(), MPFR_RNDN);
  mpfr_mul(t.raw(), t.raw(), const_pi(NumericContext(wp)).raw(), MPFR_RNDN);
  mpfr_div_ui(t.raw(), t.raw(), 6, MPFR_RNDN);
  p.C_nat = t.to_double();
  return p;
}

constexpr double kLn2 = 0.6931471805599453;

// Bound (18) on log2 |t_k|.
inline double term_magnitude_bound_params(u64 k, const PrecisionParams& p) {
  double kd = static_cast<double>(k);
  double nat = p.C_nat / kd + 0.5 * std::log(kd) - p.log2_24n1 * kLn2 +
               (std::log(2.0) + 0.5 * std::log(3.0));
  return nat / kLn2;
}

// Theorem-3 working precision for term k, clamped at the hardware
// floor.
inline Precision term_precision_params(u64 k, const PrecisionParams& p) {
  double x = p.C_nat / static_cast<double>(k);
  double m = k == 1 ? 0.0 : std::log2(static_cast<double>(k));
  double r = p.log2_N + term_magnitude_bound_params(k, p) +
             std::log2(10.0 * x + 7.0 * m + 22.0) + 3.0;
  r = std::max(r, 0.5 * p.log2_n + 5.0);
  r = std::max(r, 11.0);
  Precision bits = static_cast<Precision>(std::ceil(r));
  return std::max(bits, kMinPrecision);
}

}  // namespace detail

/// Bound (18) on log2 |t_k| from |A_k| <= k and U(x) < e^x / 2.
inline double term_magnitude_bound(u64 k, const Integer& n) {
  if (k == 0) throw std::domain_error("term_magnitude_bound: k >= 1");
  return detail::term_magnitude_bound_params(k, detail::precision_params(n, 1));
}

/// Working precision for term k per Theorem 3 (never below 53 bits).
inline Precision term_precision(u64 k, const Integer& n, u64 N) {
  if (k == 0 || k > N) throw std::domain_error("term_precision: 1 <= k <= N");
  return detail::term_precision_params(k, detail::precision_params(n, N));
}

/// Pick N (smallest with M(n,N) < 1/4 via geometric bracketing, then a
/// short linear scan), the initial precision r1, and precompute C and
/// exp(C) at r1 + 3 bits.
inline HrrPlan choose_plan(const Integer& n) {
  if (n < 128) throw std::domain_error("choose_plan: n must be >= 128");
  HrrPlan plan;
  plan.n = n;

  auto below = [&](u64 N) { return remainder_bound(n, N).cmp(0.25) < 0; };
  u64 N;
  if (below(1)) {
    N = 1;
  } else {
    u64 lo = 1, hi = 2;
    while (!below(hi)) {
      lo = hi;
      hi *= 2;
    }
    while (hi - lo > 64) {
      u64 mid = lo + (hi - lo) / 2;
      if (below(mid))
        hi = mid;
      else
        lo = mid;
    }
    N = lo + 1;
    while (!below(N)) ++N;
  }
  plan.terms = N;
  plan.r1 = detail::term_precision_params(1, detail::precision_params(n, N));

  // C = pi/6 sqrt(24n-1), relative error within 2^(2-r1-3) of exact:
  // intermediates carry 8 guard bits before the final rounding.
  const Precision cp = plan.r1 + 3;
  Real c(cp + 8);
  Integer m24 = 24 * n - 1;
  mpfr_set_z(c.raw(), m24.get_mpz_t(), MPFR_RNDN);
  mpfr_sqrt(c.raw(), c.raw(), MPFR_RNDN);
  mpfr_mul(c.raw(), c.raw(), const_pi(NumericContext(cp + 8)).raw(), MPFR_RNDN);
  mpfr_div_ui(c.raw(), c.raw(), 6, MPFR_RNDN);
  plan.C = c.rounded_to(cp);
  plan.exp_C = exp(plan.C, NumericContext(cp));
  return plan;
}

/// U(x) = cosh(x) - sinh(x)/x at x = C/k. Small k recovers the
/// hyperbolics from the cached exp(C) by a k-th root; larger k calls
/// the context hyperbolics.
inline Real eval_U(const HrrPlan& plan, u64 k, Precision r) {
  const Precision wp = r + 8;
  Real x(wp);
  mpfr_div_ui(x.raw(), plan.C.raw(), k, MPFR_RNDN);
  Real ch(wp), sh(wp);
  if (k < 35) {
    Real ek(wp), inv(wp);
    mpfr_rootn_ui(ek.raw(), plan.exp_C.raw(), k, MPFR_RNDN);
    mpfr_ui_div(inv.raw(), 1, ek.raw(), MPFR_RNDN);
    mpfr_add(ch.raw(), ek.raw(), inv.raw(), MPFR_RNDN);
    mpfr_div_2ui(ch.raw(), ch.raw(), 1, MPFR_RNDN);
    mpfr_sub(sh.raw(), ek.raw(), inv.raw(), MPFR_RNDN);
    mpfr_div_2ui(sh.raw(), sh.raw(), 1, MPFR_RNDN);
  } else {
    auto [s, c] = sinh_cosh(x, NumericContext(wp));
    sh = std::move(s);
    ch = std::move(c);
  }
  Real u(wp);
  mpfr_div(u.raw(), sh.raw(), x.raw(), MPFR_RNDN);
  mpfr_sub(u.raw(), ch.raw(), u.raw(), MPFR_RNDN);
  return u.rounded_to(r);
}

namespace detail {

// cos(pi p/q) in hardware doubles with the argument folded into
// [0, pi/4] first. 0 < p < q.
inline double cos_pi_double(u64 p, u64 q) {
  double s = 1.0;
  if (2 * p > q) {
    p = q - p;
    s = -1.0;
  }
  if (4 * p > q)
    return s * std::sin(M_PI * (static_cast<double>(q - 2 * p) /
                                static_cast<double>(2 * q)));
  return s * std::cos(M_PI * (static_cast<double>(p) / static_cast<double>(q)));
}

}  // namespace detail

/// Exact p(n) by the Hardy-Ramanujan-Rademacher series (Algorithm 4
/// shape: factored A_k(n), per-term precision schedule, amortized
/// two-variable summation, hardware-double tail).
inline PartitionResult partition_hrr(const Integer& n,
                                     const HrrOptions& opts = {}) {
  using clock = std::chrono::steady_clock;
  const auto t_start = clock::now();
  auto seconds_since = [](clock::time_point t0) {
    return std::chrono::duration<double>(clock::now() - t0).count();
  };

  if (n < 0) throw std::domain_error("partition_hrr: n must be nonnegative");
  PartitionResult res;
  res.n = n;
  if (n < 128) {
    res.value = detail::kSmallPartitionTable[n.get_ui()];
    if (opts.stats) {
      opts.stats->first_term_seconds = seconds_since(t_start);
      opts.stats->total_seconds = opts.stats->first_term_seconds;
    }
    return res;
  }

  HrrPlan plan = choose_plan(n);
  const u64 N = plan.terms;
  res.terms_used = N;
  const auto params = detail::precision_params(n, N);

  const Integer m24 = 24 * n - 1;
  const double C_d = plan.C.to_double();
  const double inv_24n1_d = 1.0 / mpz_get_d(m24.get_mpz_t());

  Real s1(plan.r1 + 32);
  Real s2(plan.r1);
  Precision s2_prec = plan.r1;
  Real t(plan.r1);

  Precision prev_r = plan.r1;
  double first_term_seconds = 0.0;

  for (u64 k = 1; k <= N; ++k) {
    const u64 nk = mpz_fdiv_ui(n.get_mpz_t(), k);
    TermFactorization fac = ak_factor(k, nk);
    if (!fac.zero) {
      Precision rk = std::min(detail::term_precision_params(k, params), prev_r);
      prev_r = rk;  // keep the schedule non-increasing

      if (rk > kMinPrecision || opts.force_arb) {
        // assemble sign * sqrt(3a/(k b)) * prod cos * U(C/k) * 4/(24n-1)
        u64 num = 3 * fac.surd_num, den = k * fac.surd_den;
        u64 g = gcd(num, den);
        num /= g;
        den /= g;
        t.reset(rk);
        mpfr_set_ui(t.raw(), num, MPFR_RNDN);
        mpfr_div_ui(t.raw(), t.raw(), den, MPFR_RNDN);
        mpfr_sqrt(t.raw(), t.raw(), MPFR_RNDN);
        for (const auto& a : fac) {
          Real c = cos_pi_rational(static_cast<i64>(a.p), a.q, rk);
          mpfr_mul(t.raw(), t.raw(), c.raw(), MPFR_RNDN);
        }
        Real u = eval_U(plan, k, rk);
        mpfr_mul(t.raw(), t.raw(), u.raw(), MPFR_RNDN);
        Real m24r(rk);
        mpfr_set_z(m24r.raw(), m24.get_mpz_t(), MPFR_RNDN);
        mpfr_div(t.raw(), t.raw(), m24r.raw(), MPFR_RNDN);
        mpfr_mul_2ui(t.raw(), t.raw(), 2, MPFR_RNDN);  // times 4, exact
        if (fac.sign < 0) mpfr_neg(t.raw(), t.raw(), MPFR_RNDN);

        if (opts.amortized) {
          mpfr_add(s2.raw(), s2.raw(), t.raw(), MPFR_RNDN);
        } else {
          mpfr_add(s1.raw(), s1.raw(), t.raw(), MPFR_RNDN);
        }
      } else {
        // hardware-double tail
        double td = std::sqrt(static_cast<double>(3 * fac.surd_num) /
                              static_cast<double>(k * fac.surd_den));
        for (const auto& a : fac) td *= detail::cos_pi_double(a.p, a.q);
        double x = C_d / static_cast<double>(k);
        double ex = std::exp(x);
        double iex = 1.0 / ex;
        td *= 0.5 * ((ex + iex) - (ex - iex) / x);
        td *= 4.0 * inv_24n1_d;
        if (fac.sign < 0) td = -td;
        if (opts.amortized) {
          mpfr_add_d(s2.raw(), s2.raw(), td, MPFR_RNDN);
        } else {
          mpfr_add_d(s1.raw(), s1.raw(), td, MPFR_RNDN);
        }
      }

      if (opts.amortized && 2 * rk < s2_prec) {
        mpfr_add(s1.raw(), s1.raw(), s2.raw(), MPFR_RNDN);
        s2.reset(rk);
        s2_prec = rk;
      }
    }
    if (k == 1) first_term_seconds = seconds_since(t_start);
  }

  if (opts.amortized) mpfr_add(s1.raw(), s1.raw(), s2.raw(), MPFR_RNDN);
  res.value = round_to_integer(s1);
  Real resid(64);
  mpfr_sub_z(resid.raw(), s1.raw(), res.value.get_mpz_t(), MPFR_RNDN);
  res.residual = resid.to_double();

  if (opts.stats) {
    opts.stats->first_term_seconds = first_term_seconds;
    opts.stats->total_seconds = seconds_since(t_start);
  }
  return res;
}

}  // namespace partfun
