#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

namespace partfun {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

/// p^lambda with everything word-size.
struct PrimePower {
  u64 p = 0;
  unsigned lambda = 0;
  u64 value = 0;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

inline u64 gcd(u64 a, u64 b) { return std::gcd(a, b); }

/// (a * b) mod m. Single-word product when m allows it.
inline u64 mul_mod(u64 a, u64 b, u64 m) {
  if (m <= 0xffffffffu) return (a * b) % m;
  return static_cast<u64>((u128)a * b % m);
}

inline u64 pow_mod(u64 a, u64 e, u64 m) {
  u64 r = m > 1 ? 1 % m : 0;
  a %= m;
  while (e) {
    if (e & 1) r = mul_mod(r, a, m);
    a = mul_mod(a, a, m);
    e >>= 1;
  }
  return r;
}

struct no_inverse_error : std::domain_error {
  using std::domain_error::domain_error;
};

/// Inverse of a modulo m, in [0, m). Throws no_inverse_error when
/// gcd(a, m) != 1.
inline u64 mod_inv(i64 a, u64 m) {
  if (m < 2) throw std::domain_error("mod_inv: modulus must be >= 2");
  i64 mm = static_cast<i64>(m);
  i64 r0 = mm, r1 = a % mm;
  if (r1 < 0) r1 += mm;
  i64 t0 = 0, t1 = 1;
  while (r1 != 0) {
    i64 q = r0 / r1;
    r0 -= q * r1;
    std::swap(r0, r1);
    t0 -= q * t1;
    std::swap(t0, t1);
  }
  if (r0 != 1) throw no_inverse_error("mod_inv: arguments not coprime");
  return static_cast<u64>(t0 < 0 ? t0 + mm : t0);
}

/// Jacobi symbol (a|m) for odd positive m; 0 iff gcd(a, m) > 1.
inline int jacobi(i64 a, u64 m) {
  if (m == 0 || (m & 1) == 0)
    throw std::domain_error("jacobi: modulus must be odd and positive");
  int s = 1;
  if (a < 0) {
    a = -a;
    if (m % 4 == 3) s = -s;
  }
  u64 x = static_cast<u64>(a) % m;
  while (x != 0) {
    while ((x & 1) == 0) {
      x >>= 1;
      u64 m8 = m & 7;
      if (m8 == 3 || m8 == 5) s = -s;
    }
    std::swap(x, m);
    if ((x & 3) == 3 && (m & 3) == 3) s = -s;
    x %= m;
  }
  return m == 1 ? s : 0;
}

/// Deterministic Miller-Rabin for 64-bit operands.
inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                29ull, 31ull, 37ull}) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

/// Square root of a modulo an odd prime p (Tonelli-Shanks), or nullopt
/// when a is a nonresidue. The nonresidue needed by the algorithm is
/// searched incrementally starting from 2.
inline std::optional<u64> sqrt_mod_prime(u64 a, u64 p) {
  a %= p;
  if (p == 2 || a == 0) return a;
  if (jacobi(static_cast<i64>(a), p) != 1) return std::nullopt;
  u64 x;
  if ((p & 3) == 3) {
    x = pow_mod(a, (p + 1) >> 2, p);
  } else {
    // Tonelli-Shanks: p - 1 = q * 2^s with q odd.
    u64 q = p - 1;
    int s = 0;
    while ((q & 1) == 0) {
      q >>= 1;
      ++s;
    }
    u64 z = 2;
    while (jacobi(static_cast<i64>(z), p) != -1) ++z;
    u64 c = pow_mod(z, q, p);
    x = pow_mod(a, (q + 1) >> 1, p);
    u64 t = pow_mod(a, q, p);
    int m = s;
    while (t != 1) {
      u64 t2 = t;
      int i = 0;
      while (t2 != 1) {
        t2 = mul_mod(t2, t2, p);
        ++i;
      }
      u64 b = c;
      for (int j = 0; j < m - i - 1; ++j) b = mul_mod(b, b, p);
      x = mul_mod(x, b, p);
      c = mul_mod(b, b, p);
      t = mul_mod(t, c, p);
      m = i;
    }
  }
  return std::min(x, p - x);
}

/// Square root of a modulo p^lambda, or nullopt if none exists.
/// Tonelli-Shanks modulo p followed by Hensel lifting; p = 2 uses the
/// bitwise lifting special case. 0 <= a < p^lambda.
inline std::optional<u64> sqrt_mod_prime_power(u64 a, const PrimePower& pp) {
  const u64 m = pp.value;
  if (a == 0) return 0;
  // Strip the p-content: a = p^e * a0.
  unsigned e = 0;
  u64 a0 = a;
  while (a0 % pp.p == 0) {
    a0 /= pp.p;
    ++e;
  }
  if (e & 1) return std::nullopt;
  unsigned target = pp.lambda - e;  // solve y^2 = a0 mod p^target
  u64 mt = pp.value;
  for (unsigned i = 0; i < e; ++i) mt /= pp.p;

  u64 y;
  if (pp.p == 2) {
    if (target == 1) {
      y = 1;
    } else if (target == 2) {
      if ((a0 & 3) != 1) return std::nullopt;
      y = 1;
    } else {
      if ((a0 & 7) != 1) return std::nullopt;
      y = 1;
      for (unsigned t = 3; t < target; ++t) {
        u64 mask = (u64(1) << (t + 1)) - 1;
        if ((static_cast<u64>((u128)y * y - a0) & mask) != 0)
          y += u64(1) << (t - 1);
      }
      y &= mt - 1;
    }
  } else {
    auto y0 = sqrt_mod_prime(a0 % pp.p, pp.p);
    if (!y0) return std::nullopt;
    y = *y0;
    // Quadratic Hensel steps: double the exponent until >= target.
    u64 mod_cur = pp.p;
    unsigned t = 1;
    while (t < target) {
      t = std::min(2 * t, target);
      u64 mod_next = 1;
      for (unsigned i = 0; i < t; ++i) mod_next *= pp.p;
      u64 inv2y = mod_inv(static_cast<i64>(mul_mod(2 % mod_next, y, mod_next)),
                          mod_next);
      u64 y2 = mul_mod(y, y, mod_next);
      u64 diff = (y2 >= a0 % mod_next) ? y2 - a0 % mod_next
                                       : y2 + mod_next - a0 % mod_next;
      y = (y + mod_next - mul_mod(diff, inv2y, mod_next)) % mod_next;
      mod_cur = mod_next;
    }
    (void)mod_cur;
  }
  // x = p^(e/2) * y mod p^lambda; canonicalize to the smaller of +-x.
  u64 scale = 1;
  for (unsigned i = 0; i < e / 2; ++i) scale *= pp.p;
  u64 x = mul_mod(y % m, scale, m);
  return std::min(x, m - x);
}

/// Prime factorization by trial division over a 2/3/5 wheel; factors
/// returned in increasing order of p.
inline std::vector<PrimePower> factorize(u64 k) {
  if (k == 0) throw std::domain_error("factorize: k must be positive");
  std::vector<PrimePower> out;
  auto strip = [&](u64 p) {
    if (k % p != 0) return;
    PrimePower f{p, 0, 1};
    while (k % p == 0) {
      k /= p;
      ++f.lambda;
      f.value *= p;
    }
    out.push_back(f);
  };
  strip(2);
  strip(3);
  strip(5);
  static constexpr unsigned wheel[8] = {4, 2, 4, 2, 4, 6, 2, 6};
  u64 d = 7;
  unsigned w = 0;
  while (d * d <= k) {
    strip(d);
    d += wheel[w];
    w = (w + 1) & 7;
  }
  if (k > 1) out.push_back(PrimePower{k, 1, k});
  return out;
}

}  // namespace partfun
