#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "partfun/modarith.hpp"
#include "partfun/numeric.hpp"

namespace partfun {

struct unsupported_error : std::domain_error {
  using std::domain_error::domain_error;
};

/// Largest n for which cos_minpoly will generate a polynomial.
inline constexpr u64 kCosMinpolyMaxN = 512;

/// Scaled minimal polynomial 2^d * Phi_n(x) of cos(2*pi/n), degree
/// d = phi(n)/2, integer coefficients (coeffs[0] constant term,
/// coeffs[d] = 2^d). coeff_bound bounds all |coefficients| by 2^b.
struct MinPolyData {
  u64 n = 0;
  unsigned degree = 0;
  std::vector<Integer> coeffs;
  long coeff_bound = 0;
};

namespace detail {

// 2^d * Phi_n for n = 3..32, constant term first.
inline const std::vector<long>& minpoly_table_entry(u64 n) {
  static const std::vector<long> table[] = {
      /* n= 3 */ {1, 2},
      /* n= 4 */ {0, 2},
      /* n= 5 */ {-1, 2, 4},
      /* n= 6 */ {-1, 2},
      /* n= 7 */ {-1, -4, 4, 8},
      /* n= 8 */ {-2, 0, 4},
      /* n= 9 */ {1, -6, 0, 8},
      /* n=10 */ {-1, -2, 4},
      /* n=11 */ {1, 6, -12, -32, 16, 32},
      /* n=12 */ {-3, 0, 4},
      /* n=13 */ {-1, 6, 24, -32, -80, 32, 64},
      /* n=14 */ {1, -4, -4, 8},
      /* n=15 */ {1, 8, -16, -8, 16},
      /* n=16 */ {2, 0, -16, 0, 16},
      /* n=17 */ {1, -8, -40, 80, 240, -192, -448, 128, 256},
      /* n=18 */ {-1, -6, 0, 8},
      /* n=19 */ {1, 10, -40, -160, 240, 672, -448, -1024, 256, 512},
      /* n=20 */ {5, 0, -20, 0, 16},
      /* n=21 */ {1, -16, 32, 48, -96, -32, 64},
      /* n=22 */ {-1, 6, 12, -32, -16, 32},
      /* n=23 */ {-1, -12, 60, 280, -560, -1792, 1792, 4608, -2304, -5120,
                  1024, 2048},
      /* n=24 */ {1, 0, -16, 0, 16},
      /* n=25 */ {-1, 10, 100, -40, -800, 32, 2240, 0, -2560, 0, 1024},
      /* n=26 */ {-1, -6, 24, 32, -80, -32, 64},
      /* n=27 */ {1, 18, 0, -240, 0, 864, 0, -1152, 0, 512},
      /* n=28 */ {-7, 0, 56, 0, -112, 0, 64},
      /* n=29 */ {-1, 14, 112, -448, -2016, 4032, 13440, -15360, -42240,
                  28160, 67584, -24576, -53248, 8192, 16384},
      /* n=30 */ {1, -8, -16, 8, 16},
      /* n=31 */ {-1, -16, 112, 672, -2016, -8064, 13440, 42240, -42240,
                  -112640, 67584, 159744, -53248, -114688, 16384, 32768},
      /* n=32 */ {2, 0, -64, 0, 320, 0, -512, 0, 256},
  };
  return table[n - 3];
}

inline unsigned euler_phi(u64 n) {
  unsigned r = 1;
  for (const auto& f : factorize(n)) {
    r *= static_cast<unsigned>(f.value / f.p * (f.p - 1));
  }
  return r;
}

inline long ceil_log2(const Integer& x) {
  std::size_t bits = mpz_sizeinbase(x.get_mpz_t(), 2);
  Integer pow2 = Integer(1) << (bits - 1);
  return static_cast<long>(pow2 == x ? bits - 1 : bits);
}

// Round v / 2^s to the nearest integer (half up).
inline Integer round_shift(const Integer& v, unsigned long s) {
  Integer t = v + (Integer(1) << (s - 1));
  Integer r;
  mpz_fdiv_q_2exp(r.get_mpz_t(), t.get_mpz_t(), s);
  return r;
}

// Balanced product of monic linear factors (x - root_j) over
// fixed-point coefficients with scale 2^wp.
inline std::vector<Integer> minpoly_product_tree(
    const std::vector<Integer>& roots, std::size_t lo, std::size_t hi,
    unsigned long wp) {
  if (hi - lo == 1) {
    return {-roots[lo], Integer(1) << wp};
  }
  std::size_t mid = lo + (hi - lo) / 2;
  auto a = minpoly_product_tree(roots, lo, mid, wp);
  auto b = minpoly_product_tree(roots, mid, hi, wp);
  std::vector<Integer> c(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  for (auto& v : c) v = round_shift(v, wp);
  return c;
}

// Tree construction at base precision + extra_bits guard (the extra
// bits exist so tests can confirm the rounded coefficients are stable
// under recomputation at higher precision).
inline MinPolyData cos_minpoly_generate(u64 n, unsigned long extra_bits = 0) {
  MinPolyData out;
  out.n = n;
  out.degree = euler_phi(n) / 2;
  const unsigned d = out.degree;
  Integer central;
  mpz_bin_uiui(central.get_mpz_t(), d, d / 2);
  out.coeff_bound =
      std::max<long>(ceil_log2(Integer(static_cast<unsigned long>(d))) +
                         ceil_log2(central),
                     static_cast<long>(d) + 1);

  const unsigned long wp =
      static_cast<unsigned long>(out.coeff_bound) +
      4 * static_cast<unsigned long>(ceil_log2(Integer(d + 1))) + 16 +
      extra_bits;

  // Conjugate roots cos(2*pi*j/n), gcd(j, n) = 1, 1 <= j < n/2, as
  // fixed-point integers at scale 2^wp.
  std::vector<Integer> roots;
  roots.reserve(d);
  const Precision rp =
      std::max<Precision>(static_cast<Precision>(wp) + 16, kMinPrecision);
  Real pi = const_pi(NumericContext(rp));
  for (u64 j = 1; 2 * j < n; ++j) {
    if (gcd(j, n) != 1) continue;
    Real t(rp);
    mpfr_mul_ui(t.raw(), pi.raw(), 2 * j, MPFR_RNDN);
    mpfr_div_ui(t.raw(), t.raw(), n, MPFR_RNDN);
    mpfr_cos(t.raw(), t.raw(), MPFR_RNDN);
    mpfr_mul_2ui(t.raw(), t.raw(), wp, MPFR_RNDN);
    Integer fx;
    mpfr_get_z(fx.get_mpz_t(), t.raw(), MPFR_RNDN);
    roots.push_back(fx);
  }
  if (roots.size() != d)
    throw std::logic_error("cos_minpoly: conjugate root count mismatch");

  auto fixed = minpoly_product_tree(roots, 0, roots.size(), wp);
  out.coeffs.reserve(d + 1);
  for (auto& c : fixed) out.coeffs.push_back(round_shift(c << d, wp));
  if (out.coeffs.back() != (Integer(1) << d))
    throw std::logic_error("cos_minpoly: leading coefficient not 2^d");
  return out;
}

}  // namespace detail

/// Integer polynomial 2^d Phi_n(x) with root cos(2*pi/n). Small n come
/// from a table; larger n are generated from floating-point conjugate
/// roots via a balanced product tree and rounded to integers.
inline MinPolyData cos_minpoly(u64 n, u64 n_bound = kCosMinpolyMaxN) {
  if (n < 3) throw std::domain_error("cos_minpoly: n must be >= 3");
  if (n > n_bound)
    throw unsupported_error("cos_minpoly: n beyond configured bound");
  if (n <= 32) {
    MinPolyData out;
    out.n = n;
    out.degree = detail::euler_phi(n) / 2;
    const unsigned d = out.degree;
    Integer central;
    mpz_bin_uiui(central.get_mpz_t(), d, d / 2);
    out.coeff_bound = std::max<long>(
        detail::ceil_log2(Integer(static_cast<unsigned long>(d))) +
            detail::ceil_log2(central),
        static_cast<long>(d) + 1);
    for (long c : detail::minpoly_table_entry(n)) out.coeffs.emplace_back(c);
    return out;
  }
  return detail::cos_minpoly_generate(n);
}

enum class CosPath { generic, minpoly };

/// Threshold rule from the timing crossover: the minimal-polynomial
/// path wins for q < 250 once the precision exceeds 400 + 4q^2 bits.
inline CosPath select_cos_path(u64 q, Precision r) {
  if (q >= 3 && q < 250 && 2 * q <= kCosMinpolyMaxN &&
      r > static_cast<Precision>(400 + 4 * q * q))
    return CosPath::minpoly;
  return CosPath::generic;
}

namespace detail {

// cos(pi*p/q) for 0 < 2p <= q, gcd(p,q) = 1, via the float context:
// exact fold to (0, pi/4], then three roundings for the argument and a
// correctly rounded sin or cos.
inline Real cos_pi_generic(u64 p, u64 q, Precision r) {
  const Precision wp = r + 8;
  Real t(wp);
  Real pi = const_pi(NumericContext(wp));
  bool use_sin = 4 * p > q;
  u64 num = use_sin ? q - 2 * p : p;
  u64 den = use_sin ? 2 * q : q;
  mpfr_mul_ui(t.raw(), pi.raw(), num, MPFR_RNDN);
  mpfr_div_ui(t.raw(), t.raw(), den, MPFR_RNDN);
  if (use_sin)
    mpfr_sin(t.raw(), t.raw(), MPFR_RNDN);
  else
    mpfr_cos(t.raw(), t.raw(), MPFR_RNDN);
  return t.rounded_to(r);
}

// Newton iteration on 2^d Phi_n over the halving precision ladder
// r + 8, r/2 + 8, ..., seeded with a 53-bit value from the generic
// path. Horner evaluations run at r_i + coeff_bound bits.
inline Real cos_pi_minpoly(u64 p, u64 q, Precision r) {
  const u64 n = (1 + (p & 1)) * q;
  MinPolyData poly = cos_minpoly(n);
  std::vector<Precision> ladder{r + 8};
  while (ladder.back() / 2 + 8 > kMinPrecision)
    ladder.push_back(ladder.back() / 2 + 8);

  Real x = cos_pi_generic(p, q, kMinPrecision);
  const int d = static_cast<int>(poly.degree);
  for (std::size_t step = ladder.size(); step-- > 0;) {
    const Precision wp = ladder[step] + poly.coeff_bound;
    Real y(wp), dy(wp), t(wp);
    mpfr_set_z(y.raw(), poly.coeffs[d].get_mpz_t(), MPFR_RNDN);
    for (int i = d - 1; i >= 0; --i) {
      mpfr_mul(t.raw(), dy.raw(), x.raw(), MPFR_RNDN);
      mpfr_add(dy.raw(), t.raw(), y.raw(), MPFR_RNDN);
      mpfr_mul(t.raw(), y.raw(), x.raw(), MPFR_RNDN);
      mpfr_add_z(y.raw(), t.raw(), poly.coeffs[i].get_mpz_t(), MPFR_RNDN);
    }
    mpfr_div(t.raw(), y.raw(), dy.raw(), MPFR_RNDN);
    Real xn(wp);
    mpfr_sub(xn.raw(), x.raw(), t.raw(), MPFR_RNDN);
    x = std::move(xn);
  }
  return x.rounded_to(r);
}

}  // namespace detail

/// cos(p*pi/q) to r bits. Exact for q in {1, 2, 3}; elsewhere routed
/// between the Newton/minimal-polynomial path and the generic context
/// cosine by select_cos_path.
inline Real cos_pi_rational(i64 p, u64 q, Precision r) {
  if (q == 0) throw std::domain_error("cos_pi_rational: q must be positive");
  {
    u64 pa = static_cast<u64>(p < 0 ? -p : p);
    if (gcd(pa, q) != 1 && pa != 0)
      throw std::domain_error("cos_pi_rational: p, q not coprime");
  }
  i64 two_q = 2 * static_cast<i64>(q);
  i64 pr = p % two_q;
  if (pr < 0) pr += two_q;
  u64 pp = static_cast<u64>(pr);
  int sign = 1;
  if (pp >= q) {
    sign = -sign;
    pp -= q;
  }
  if (2 * pp > q) {  // cos(pi(1 - t)) = -cos(pi t)
    sign = -sign;
    pp = q - pp;
  }
  // angle now pi*pp/q with pp/q in [0, 1/2]
  if (pp == 0) return Real::of(static_cast<long>(sign), r);
  if (2 * pp == q) return Real(r);  // cos(pi/2) = 0
  if (3 * pp == q) {                 // cos(pi/3) = 1/2
    Real h = Real::pow2(-1, r);
    if (sign < 0) mpfr_neg(h.raw(), h.raw(), MPFR_RNDN);
    return h;
  }
  Real v = select_cos_path(q, r) == CosPath::minpoly
               ? detail::cos_pi_minpoly(pp, q, r)
               : detail::cos_pi_generic(pp, q, r);
  if (sign < 0) mpfr_neg(v.raw(), v.raw(), MPFR_RNDN);
  return v;
}

/// cos(pi*t) for an exact rational t (used by the brute-force A_k
/// oracle, whose Dedekind-sum phases have big numerators). Exact
/// symmetry folds, then the generic path.
inline Real cos_pi_rational_exact_arg(Rational t, Precision r) {
  // reduce mod 2
  Integer whole = t.get_num() / t.get_den();
  t -= 2 * (whole / 2);
  if (t < 0) t += 2;
  int sign = 1;
  if (t >= 1) {
    t -= 1;
    sign = -sign;
  }
  if (t > Rational(1, 2)) {
    t = 1 - t;
    sign = -sign;
  }
  bool use_sin = t > Rational(1, 4);
  if (use_sin) t = Rational(1, 2) - t;
  const Precision wp = r + 8;
  Real arg = Real::of(t, wp);
  Real pi = const_pi(NumericContext(wp));
  mpfr_mul(arg.raw(), arg.raw(), pi.raw(), MPFR_RNDN);
  if (use_sin)
    mpfr_sin(arg.raw(), arg.raw(), MPFR_RNDN);
  else
    mpfr_cos(arg.raw(), arg.raw(), MPFR_RNDN);
  if (sign < 0) mpfr_neg(arg.raw(), arg.raw(), MPFR_RNDN);
  return arg.rounded_to(r);
}

}  // namespace partfun
