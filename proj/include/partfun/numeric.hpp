#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace partfun {

using Integer = mpz_class;
using Rational = mpq_class;
using Precision = mpfr_prec_t;

// Minimum working precision: never drop below IEEE double.
inline constexpr Precision kMinPrecision = 53;

/// Precision contract for all floating-point operations: r bits,
/// unit roundoff 2^(-r), correct rounding to nearest.
struct NumericContext {
  Precision precision_bits;

  explicit NumericContext(Precision r) : precision_bits(r) {
    if (r < kMinPrecision)
      throw std::domain_error("NumericContext: precision below 53 bits");
  }

  long unit_roundoff_log2() const { return -static_cast<long>(precision_bits); }
};

/// Arbitrary-precision binary float with value semantics. Thin RAII
/// wrapper over mpfr_t; the precision travels with the value.
class Real {
 public:
  explicit Real(Precision prec = kMinPrecision) {
    mpfr_init2(v_, prec);
    mpfr_set_zero(v_, 1);
  }
  Real(const Real& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Real(Real&& o) noexcept {
    mpfr_init2(v_, kMinPrecision);
    mpfr_swap(v_, o.v_);
  }
  Real& operator=(const Real& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  static Real of(double x, Precision prec) {
    Real r(prec);
    mpfr_set_d(r.v_, x, MPFR_RNDN);
    return r;
  }
  static Real of(unsigned long x, Precision prec) {
    Real r(prec);
    mpfr_set_ui(r.v_, x, MPFR_RNDN);
    return r;
  }
  static Real of(long x, Precision prec) {
    Real r(prec);
    mpfr_set_si(r.v_, x, MPFR_RNDN);
    return r;
  }
  static Real of(const Integer& z, Precision prec) {
    Real r(prec);
    mpfr_set_z(r.v_, z.get_mpz_t(), MPFR_RNDN);
    return r;
  }
  static Real of(const Rational& q, Precision prec) {
    Real r(prec);
    mpfr_set_q(r.v_, q.get_mpq_t(), MPFR_RNDN);
    return r;
  }
  /// Exact power of two, 2^e.
  static Real pow2(long e, Precision prec = kMinPrecision) {
    Real r(prec);
    mpfr_set_ui_2exp(r.v_, 1, e, MPFR_RNDN);
    return r;
  }

  Precision precision() const { return mpfr_get_prec(v_); }

  /// Re-round to a (usually lower) precision.
  Real rounded_to(Precision prec) const {
    Real r(prec);
    mpfr_set(r.v_, v_, MPFR_RNDN);
    return r;
  }

  /// Reset to zero at a new precision (old value discarded).
  void reset(Precision prec) {
    mpfr_set_prec(v_, prec);
    mpfr_set_zero(v_, 1);
  }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  int cmp(const Real& o) const { return mpfr_cmp(v_, o.v_); }
  int cmp(double d) const { return mpfr_cmp_d(v_, d); }
  bool operator<(const Real& o) const { return cmp(o) < 0; }
  bool operator==(const Real& o) const { return mpfr_equal_p(v_, o.v_) != 0; }

  /// Exponent e with |x| in [2^(e-1), 2^e); only valid for nonzero finite x.
  long exponent() const { return static_cast<long>(mpfr_get_exp(v_)); }

  std::string str(std::size_t digits = 20) const {
    mpfr_exp_t e;
    char* s = mpfr_get_str(nullptr, &e, 10, digits, v_, MPFR_RNDN);
    std::string out = s ? s : "nan";
    mpfr_free_str(s);
    out += "e" + std::to_string(e);
    return out;
  }

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

 private:
  mpfr_t v_;
};

namespace detail {
inline void check_finite(const Real& r, const char* what) {
  if (!r.is_finite())
    throw std::range_error(std::string(what) + ": result exceeded exponent range");
}
}  // namespace detail

// ---- arith: correct rounding to nearest, relative error <= eps --------

inline Real add(const Real& a, const Real& b, NumericContext ctx) {
  Real r(ctx.precision_bits);
  mpfr_add(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
  detail::check_finite(r, "add");
  return r;
}

inline Real sub(const Real& a, const Real& b, NumericContext ctx) {
  Real r(ctx.precision_bits);
  mpfr_sub(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
  detail::check_finite(r, "sub");
  return r;
}

inline Real mul(const Real& a, const Real& b, NumericContext ctx) {
  Real r(ctx.precision_bits);
  mpfr_mul(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
  detail::check_finite(r, "mul");
  return r;
}

inline Real div(const Real& a, const Real& b, NumericContext ctx) {
  if (b.is_zero()) throw std::domain_error("div: zero divisor");
  Real r(ctx.precision_bits);
  mpfr_div(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
  detail::check_finite(r, "div");
  return r;
}

inline Real sqrt(const Real& a, NumericContext ctx) {
  if (a.sign() < 0) throw std::domain_error("sqrt: negative operand");
  Real r(ctx.precision_bits);
  mpfr_sqrt(r.raw(), a.raw(), MPFR_RNDN);
  return r;
}

// ---- transcend: relative error <= 2 eps --------------------------------

inline Real exp(const Real& x, NumericContext ctx) {
  Real r(ctx.precision_bits);
  mpfr_exp(r.raw(), x.raw(), MPFR_RNDN);
  detail::check_finite(r, "exp");
  return r;
}

inline Real sin(const Real& x, NumericContext ctx) {
  Real r(ctx.precision_bits);
  mpfr_sin(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

inline Real cos(const Real& x, NumericContext ctx) {
  Real r(ctx.precision_bits);
  mpfr_cos(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

inline Real sinh(const Real& x, NumericContext ctx) {
  Real r(ctx.precision_bits);
  mpfr_sinh(r.raw(), x.raw(), MPFR_RNDN);
  detail::check_finite(r, "sinh");
  return r;
}

inline Real cosh(const Real& x, NumericContext ctx) {
  Real r(ctx.precision_bits);
  mpfr_cosh(r.raw(), x.raw(), MPFR_RNDN);
  detail::check_finite(r, "cosh");
  return r;
}

/// cosh(x) and sinh(x) together. For |x| >= 1 both come from a single
/// exponential: e = exp(x) at 8 guard bits, then (e +- 1/e)/2, which
/// keeps the relative error under 2^(1-r) while costing one exp instead
/// of two. Below |x| = 1 the subtraction in sinh cancels, so fall back
/// to the library routines.
inline std::pair<Real, Real> sinh_cosh(const Real& x, NumericContext ctx) {
  Real s(ctx.precision_bits), c(ctx.precision_bits);
  if (mpfr_cmpabs_ui(x.raw(), 1) < 0) {
    mpfr_sinh_cosh(s.raw(), c.raw(), x.raw(), MPFR_RNDN);
  } else {
    Precision wp = ctx.precision_bits + 8;
    Real e(wp), inv(wp), t(wp);
    mpfr_exp(e.raw(), x.raw(), MPFR_RNDN);
    detail::check_finite(e, "sinh_cosh");
    mpfr_ui_div(inv.raw(), 1, e.raw(), MPFR_RNDN);
    mpfr_add(t.raw(), e.raw(), inv.raw(), MPFR_RNDN);
    mpfr_div_2ui(t.raw(), t.raw(), 1, MPFR_RNDN);
    mpfr_set(c.raw(), t.raw(), MPFR_RNDN);
    mpfr_sub(t.raw(), e.raw(), inv.raw(), MPFR_RNDN);
    mpfr_div_2ui(t.raw(), t.raw(), 1, MPFR_RNDN);
    mpfr_set(s.raw(), t.raw(), MPFR_RNDN);
  }
  return {std::move(s), std::move(c)};
}

/// pi to r bits, relative error <= eps. MPFR caches the value per
/// thread at the largest precision seen, so repeated calls at the same
/// or lower precision are table lookups.
inline Real const_pi(NumericContext ctx) {
  Real r(ctx.precision_bits);
  mpfr_const_pi(r.raw(), MPFR_RNDN);
  return r;
}

/// k-th root, x >= 0.
inline Real root_n(const Real& x, unsigned long k, NumericContext ctx) {
  if (x.sign() < 0) throw std::domain_error("root_n: negative operand");
  Real r(ctx.precision_bits);
  mpfr_rootn_ui(r.raw(), x.raw(), k, MPFR_RNDN);
  return r;
}

/// Nearest integer to x (ties cannot occur for the callers in this
/// library, which guarantee a distance < 1/2 to the true integer).
inline Integer round_to_integer(const Real& x) {
  Integer z;
  mpfr_get_z(z.get_mpz_t(), x.raw(), MPFR_RNDN);
  return z;
}

}  // namespace partfun
