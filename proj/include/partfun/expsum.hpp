#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>

#include "partfun/cospi.hpp"
#include "partfun/modarith.hpp"
#include "partfun/numeric.hpp"

namespace partfun {

// ---- Dedekind sums ------------------------------------------------------

/// s(h,k) straight from the defining sum; exact rational. O(k) terms.
inline Rational dedekind_sum_naive(i64 h, u64 k) {
  if (k == 0) throw std::domain_error("dedekind_sum_naive: k must be positive");
  // sum_i i*(2*((h*i) mod k) - k) / (2k^2)
  Integer num = 0;
  Integer kk(static_cast<unsigned long>(k));
  for (u64 i = 1; i < k; ++i) {
    Integer hi = Integer(static_cast<long>(h)) * static_cast<unsigned long>(i);
    Integer r = hi % kk;
    if (r < 0) r += kk;
    num += Integer(static_cast<unsigned long>(i)) * (2 * r - kk);
  }
  Rational s(num, 2 * kk * kk);
  s.canonicalize();
  return s;
}

/// s(h,k) via the reciprocity law in O(log k) steps. Requires gcd(h,k)=1.
inline Rational dedekind_sum(i64 h, u64 k) {
  if (k == 0) throw std::domain_error("dedekind_sum: k must be positive");
  i64 hm = h % static_cast<i64>(k);
  if (hm < 0) hm += static_cast<i64>(k);
  u64 a = static_cast<u64>(hm), b = k;
  if (gcd(a, b) != 1) throw std::domain_error("dedekind_sum: h, k not coprime");
  // s(a,b) = (a^2 + b^2 + 1)/(12ab) - 1/4 - s(b mod a, a)
  Rational s = 0;
  int sign = 1;
  const Rational quarter(1, 4);
  while (a != 0) {
    Integer A(static_cast<unsigned long>(a)), B(static_cast<unsigned long>(b));
    Rational term(A * A + B * B + 1, 12 * A * B);
    term.canonicalize();
    term -= quarter;
    if (sign > 0)
      s += term;
    else
      s -= term;
    sign = -sign;
    u64 r = b % a;
    b = a;
    a = r;
  }
  return s;
}

// ---- A_k(n) three ways ---------------------------------------------------

/// Definition (5): sum over h coprime to k of exp(pi*i*(s(h,k) - 2hn/k)).
/// The imaginary parts cancel, so this evaluates the matching cosine sum.
/// Brute-force oracle; O(k^2 log k) work.
inline Real ak_naive(u64 k, const Integer& n, NumericContext ctx) {
  if (k == 0) throw std::domain_error("ak_naive: k must be positive");
  const Precision wp = ctx.precision_bits + 32;
  Real acc(wp);
  for (u64 h = 0; h < k; ++h) {
    if (gcd(h, k) != 1) continue;
    Rational theta = dedekind_sum_naive(static_cast<i64>(h), k);
    theta -= Rational(2 * Integer(static_cast<unsigned long>(h)) * n,
                      Integer(static_cast<unsigned long>(k)));
    theta.canonicalize();
    // reduce mod 2 so the angle stays small
    Integer half_turns = theta.get_num() / theta.get_den();
    theta -= 2 * (half_turns / 2);
    if (theta < 0) theta += 2;
    Real c = cos_pi_rational_exact_arg(theta, wp);
    mpfr_add(acc.raw(), acc.raw(), c.raw(), MPFR_RNDN);
  }
  return acc.rounded_to(ctx.precision_bits);
}

/// Selberg's formula (8) by brute-force search over the quadratic
/// condition, with the two coupled linear recurrences generating the
/// successive values of (3l^2+l)/2 mod k without multiplications.
inline Real ak_selberg(u64 k, const Integer& n, NumericContext ctx) {
  if (k == 0) throw std::domain_error("ak_selberg: k must be positive");
  const Precision wp = ctx.precision_bits + 32;
  if (k == 1) return Real::of(1ul, ctx.precision_bits);
  if (k == 2) {
    return Real::of(mpz_odd_p(n.get_mpz_t()) ? -1l : 1l, ctx.precision_bits);
  }
  u64 m = mpz_fdiv_ui(n.get_mpz_t(), k);
  u64 r = 2 % k;
  Real s(wp);
  for (u64 l = 0; l < 2 * k; ++l) {
    if (m == 0) {
      u64 pnum = 6 * l + 1, pden = 6 * k;
      u64 g = gcd(pnum, pden);
      Real c = cos_pi_rational(static_cast<i64>(pnum / g), pden / g, wp);
      if (l & 1)
        mpfr_sub(s.raw(), s.raw(), c.raw(), MPFR_RNDN);
      else
        mpfr_add(s.raw(), s.raw(), c.raw(), MPFR_RNDN);
    }
    m += r;
    if (m >= k) m -= k;
    r += 3;
    if (r >= k) r -= k;
  }
  NumericContext wctx(wp);
  Real scale = sqrt(div(Real::of(static_cast<unsigned long>(k), wp),
                        Real::of(3ul, wp), wctx),
                    wctx);
  mpfr_mul(s.raw(), s.raw(), scale.raw(), MPFR_RNDN);
  return s.rounded_to(ctx.precision_bits);
}

/// One angle p*pi/q of a term factorization, normalized to
/// 0 < p < q with gcd(p, q) = 1.
struct CosineAngle {
  u64 p = 0;
  u64 q = 1;

  friend bool operator==(const CosineAngle&, const CosineAngle&) = default;
};

/// Symbolic value of A_k(n): sign * sqrt(surd_num/surd_den) * prod cos.
/// At most one cosine per prime-power factor of k.
struct TermFactorization {
  static constexpr int kMaxAngles = 24;

  bool zero = false;
  int sign = 1;
  u64 surd_num = 1;
  u64 surd_den = 1;
  int angle_count = 0;
  std::array<CosineAngle, kMaxAngles> angles{};

  const CosineAngle* begin() const { return angles.data(); }
  const CosineAngle* end() const { return angles.data() + angle_count; }

  /// Fold cos(pi * p/q) into the factorization: reduce the fraction,
  /// take p mod 2q, fold [q, 2q) down with cos(pi + t) = -cos(t), and
  /// drop angles that collapse to +-1.
  void push_angle(i64 p, u64 q) {
    u64 pa = static_cast<u64>(p < 0 ? -p : p);
    u64 g = gcd(pa, q);  // q >= 1, so g >= 1 (p = 0 gives g = q)
    u64 qq = q / g;
    i64 two_q = 2 * static_cast<i64>(qq);
    i64 pr = (p / static_cast<i64>(g)) % two_q;
    if (pr < 0) pr += two_q;
    u64 pp = static_cast<u64>(pr);
    if (pp >= qq) {
      sign = -sign;
      pp -= qq;
    }
    if (pp == 0) return;
    if (angle_count == kMaxAngles)
      throw std::logic_error("TermFactorization: angle capacity exceeded");
    angles[angle_count++] = CosineAngle{pp, qq};
  }
};

namespace detail {

// Prime-power case, equations (9)-(12): k = p^lambda, n already reduced
// mod k. Appends the symbolic factor of A_k(n) or marks the whole term
// zero.
inline void ak_prime_power(const PrimePower& pp, u64 n, TermFactorization& f) {
  const u64 K = pp.value;
  if (K == 1) return;
  if (K == 2) {
    if (n & 1) f.sign = -f.sign;  // A_2(n) = (-1)^n
    return;
  }
  if (pp.p == 2) {
    // A_k = (-1)^lambda (-1|m2) sqrt(k) sin(4 pi m2 / 8k),
    // (3 m2)^2 = 1 - 24n mod 8k
    const u64 M = 8 * K;
    u64 v = (1 + M - (24 % M) * (n % M) % M) % M;
    auto w = sqrt_mod_prime_power(v, PrimePower{2, pp.lambda + 3, M});
    if (!w) throw std::logic_error("ak_prime_power: 1-24n not square mod 8k");
    u64 m2 = mul_mod(*w, mod_inv(3, M), M);
    if (pp.lambda & 1) f.sign = -f.sign;
    if ((m2 & 3) == 3) f.sign = -f.sign;  // (-1|m2)
    // sin(pi m2/(2k)) = cos(pi (k - m2)/(2k))
    f.push_angle(static_cast<i64>(K) - static_cast<i64>(m2), 2 * K);
    f.surd_num *= K;
    return;
  }
  if (pp.p == 3) {
    // A_k = 2 (-1)^(lambda+1) (m3|3) sqrt(k/3) sin(4 pi m3 / 3k),
    // (8 m3)^2 = 1 - 24n mod 3k
    const u64 M = 3 * K;
    u64 v = (1 + M - (24 % M) * (n % M) % M) % M;
    auto w = sqrt_mod_prime_power(v, PrimePower{3, pp.lambda + 1, M});
    if (!w) throw std::logic_error("ak_prime_power: 1-24n not square mod 3k");
    u64 m3 = mul_mod(*w, mod_inv(8, M), M);
    if ((pp.lambda & 1) == 0) f.sign = -f.sign;
    if (jacobi(static_cast<i64>(m3), 3) < 0) f.sign = -f.sign;
    // sin(4 pi m3/(3k)) = cos(pi (3k - 8 m3)/(6k))
    f.push_angle(3 * static_cast<i64>(K) - 8 * static_cast<i64>(m3), 6 * K);
    f.surd_num *= 4 * K;
    f.surd_den *= 3;
    return;
  }
  // p > 3: A_k = 2 (3|k) sqrt(k) cos(4 pi m_p / k), (24 m_p)^2 = v mod k,
  // provided gcd(v, k) = 1 and v is a quadratic residue.
  u64 v = (1 + K - (24 % K) * (n % K) % K) % K;
  if (v % pp.p == 0) {
    if (pp.lambda == 1) {
      if (jacobi(3, K) < 0) f.sign = -f.sign;
      f.surd_num *= K;
    } else {
      f.zero = true;
    }
    return;
  }
  auto w = sqrt_mod_prime_power(v, pp);
  if (!w) {
    f.zero = true;
    return;
  }
  u64 mp = mul_mod(*w, mod_inv(24, K), K);
  if (jacobi(3, K) < 0) f.sign = -f.sign;
  f.surd_num *= 4 * K;
  f.push_angle(4 * static_cast<i64>(mp), K);
}

// Splitting equations (13)-(16): k = k1 * k2 with k1 a prime power
// coprime to k2; returns (n1, n2) with A_k(n) = A_k1(n1) * A_k2(n2).
inline std::pair<u64, u64> ak_split(u64 k1, u64 k2, u64 n) {
  if (k1 == 2) {
    u64 n2 = mul_mod((8 * (n % k2) + 1) % k2, mod_inv(32 % k2, k2), k2);
    u64 t = static_cast<u64>(((u128)k2 * k2 - 1) / 8);
    u64 n1 = (n & 1) ^ (t & 1);
    return {n1, n2};
  }
  if (k1 == 4) {
    u64 n2 = mul_mod((8 * (n % k2) + 5) % k2, mod_inv(128 % k2, k2), k2);
    u64 t = static_cast<u64>(((u128)k2 * k2 - 1) / 8 % 4);
    u64 n1 = (n % 4 + 4 - t) % 4;  // n - (k2^2-1)/8 mod 4
    return {n1, n2};
  }
  // k1 odd or divisible by 8
  u64 d1 = gcd(24, k1), d2 = gcd(24, k2);
  u64 e = 24 / (d1 * d2);
  u64 n1, n2;
  {
    u64 k2m = k2 % k1;
    u64 lhs = mul_mod(mul_mod(k2m, k2m, k1), (d2 * e) % k1, k1);
    u64 rhs = (mul_mod((d2 * e) % k1, n % k1, k1) +
               static_cast<u64>(((u128)k2 * k2 - 1) / d1 % k1)) %
              k1;
    n1 = mul_mod(rhs, mod_inv(static_cast<i64>(lhs), k1), k1);
  }
  {
    u64 k1m = k1 % k2;
    u64 lhs = mul_mod(mul_mod(k1m, k1m, k2), (d1 * e) % k2, k2);
    u64 rhs = (mul_mod((d1 * e) % k2, n % k2, k2) +
               static_cast<u64>(((u128)k1 * k1 - 1) / d2 % k2)) %
              k2;
    n2 = mul_mod(rhs, mod_inv(static_cast<i64>(lhs), k2), k2);
  }
  return {n1, n2};
}

}  // namespace detail

/// Multiplicative factorization of A_k(n) (the fast path): exact
/// symbolic output, zero detection included. n is reduced mod k on
/// entry.
inline TermFactorization ak_factor(u64 k, u64 n) {
  if (k == 0) throw std::domain_error("ak_factor: k must be positive");
  TermFactorization f;
  n %= k;
  if (k == 1) return f;
  auto factors = factorize(k);
  u64 cur_k = k, cur_n = n;
  for (std::size_t i = 0; i + 1 < factors.size(); ++i) {
    const u64 k1 = factors[i].value;
    const u64 k2 = cur_k / k1;
    auto [n1, n2] = detail::ak_split(k1, k2, cur_n);
    detail::ak_prime_power(factors[i], n1 % k1, f);
    if (f.zero) return f;
    cur_k = k2;
    cur_n = n2 % k2;
  }
  detail::ak_prime_power(factors.back(), cur_n, f);
  if (f.zero) return f;
  u64 g = gcd(f.surd_num, f.surd_den);
  f.surd_num /= g;
  f.surd_den /= g;
  return f;
}

inline TermFactorization ak_factor(u64 k, const Integer& n) {
  if (k == 0) throw std::domain_error("ak_factor: k must be positive");
  return ak_factor(k, mpz_fdiv_ui(n.get_mpz_t(), k));
}

/// Numeric value of a factorization at context precision.
inline Real term_factorization_value(const TermFactorization& f,
                                     NumericContext ctx) {
  if (f.zero) return Real(ctx.precision_bits);
  const Precision wp = ctx.precision_bits + 16;
  NumericContext wctx(wp);
  Real v = sqrt(div(Real::of(static_cast<unsigned long>(f.surd_num), wp),
                    Real::of(static_cast<unsigned long>(f.surd_den), wp), wctx),
                wctx);
  for (const auto& a : f) {
    Real c = cos_pi_rational(static_cast<i64>(a.p), a.q, wp);
    mpfr_mul(v.raw(), v.raw(), c.raw(), MPFR_RNDN);
  }
  if (f.sign < 0) mpfr_neg(v.raw(), v.raw(), MPFR_RNDN);
  return v.rounded_to(ctx.precision_bits);
}

}  // namespace partfun
