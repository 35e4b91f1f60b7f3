#pragma once

#include <random>

#include "partfun/numeric.hpp"

namespace partfun::test {

// |a - b| <= 2^(-bits), for quantities of order one.
inline bool abs_close(const Real& a, const Real& b, long bits) {
  Real d(std::max(a.precision(), b.precision()));
  mpfr_sub(d.raw(), a.raw(), b.raw(), MPFR_RNDN);
  mpfr_abs(d.raw(), d.raw(), MPFR_RNDN);
  Real tol = Real::pow2(-bits);
  return mpfr_cmp(d.raw(), tol.raw()) <= 0;
}

// |a - b| <= 2^(-bits) * max(|a|, 1).
inline bool rel_close(const Real& a, const Real& b, long bits) {
  Real d(std::max(a.precision(), b.precision()));
  mpfr_sub(d.raw(), a.raw(), b.raw(), MPFR_RNDN);
  mpfr_abs(d.raw(), d.raw(), MPFR_RNDN);
  Real scale(64);
  mpfr_abs(scale.raw(), a.raw(), MPFR_RNDN);
  if (mpfr_cmp_ui(scale.raw(), 1) < 0) mpfr_set_ui(scale.raw(), 1, MPFR_RNDN);
  mpfr_mul_2si(scale.raw(), scale.raw(), -bits, MPFR_RNDN);
  return mpfr_cmp(d.raw(), scale.raw()) <= 0;
}

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(0x5eed1234abcdefULL);
  return gen;
}

}  // namespace partfun::test
