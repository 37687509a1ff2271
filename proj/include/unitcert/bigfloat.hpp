#pragma once

// Minimal value-semantic wrapper over an MPFR real with explicit precision.

#include <gmpxx.h>
#include <mpfr.h>

#include <string>
#include <utility>

namespace unitcert {

class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t precision = 64) { mpfr_init2(value_, precision); mpfr_set_zero(value_, 1); }

  BigFloat(const mpz_class& z, mpfr_prec_t precision) {
    mpfr_init2(value_, precision);
    mpfr_set_z(value_, z.get_mpz_t(), MPFR_RNDN);
  }

  BigFloat(const mpq_class& q, mpfr_prec_t precision) {
    mpfr_init2(value_, precision);
    mpfr_set_q(value_, q.get_mpq_t(), MPFR_RNDN);
  }

  BigFloat(long v, mpfr_prec_t precision) {
    mpfr_init2(value_, precision);
    mpfr_set_si(value_, v, MPFR_RNDN);
  }

  BigFloat(const BigFloat& other) {
    mpfr_init2(value_, mpfr_get_prec(other.value_));
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }

  BigFloat(BigFloat&& other) noexcept {
    mpfr_init2(value_, MPFR_PREC_MIN);
    mpfr_swap(value_, other.value_);
  }

  BigFloat& operator=(BigFloat other) noexcept {
    mpfr_swap(value_, other.value_);
    return *this;
  }

  ~BigFloat() { mpfr_clear(value_); }

  mpfr_prec_t precision() const { return mpfr_get_prec(value_); }

  /// Copy rounded to a different precision.
  BigFloat rounded(mpfr_prec_t precision) const {
    BigFloat r(precision);
    mpfr_set(r.value_, value_, MPFR_RNDN);
    return r;
  }

  static BigFloat sqrt(const BigFloat& x) {
    BigFloat r(x.precision());
    mpfr_sqrt(r.value_, x.value_, MPFR_RNDN);
    return r;
  }

  static BigFloat sqrt(const mpz_class& n, mpfr_prec_t precision) {
    BigFloat r(precision);
    mpfr_set_z(r.value_, n.get_mpz_t(), MPFR_RNDN);
    mpfr_sqrt(r.value_, r.value_, MPFR_RNDN);
    return r;
  }

  BigFloat abs() const {
    BigFloat r(precision());
    mpfr_abs(r.value_, value_, MPFR_RNDN);
    return r;
  }

  BigFloat& operator+=(const BigFloat& o) { mpfr_add(value_, value_, o.value_, MPFR_RNDN); return *this; }
  BigFloat& operator-=(const BigFloat& o) { mpfr_sub(value_, value_, o.value_, MPFR_RNDN); return *this; }
  BigFloat& operator*=(const BigFloat& o) { mpfr_mul(value_, value_, o.value_, MPFR_RNDN); return *this; }
  BigFloat& operator/=(const BigFloat& o) { mpfr_div(value_, value_, o.value_, MPFR_RNDN); return *this; }

  friend BigFloat operator+(BigFloat a, const BigFloat& b) { return a += b; }
  friend BigFloat operator-(BigFloat a, const BigFloat& b) { return a -= b; }
  friend BigFloat operator*(BigFloat a, const BigFloat& b) { return a *= b; }
  friend BigFloat operator/(BigFloat a, const BigFloat& b) { return a /= b; }
  BigFloat operator-() const {
    BigFloat r(precision());
    mpfr_neg(r.value_, value_, MPFR_RNDN);
    return r;
  }

  /// Multiplies by 2^e exactly.
  BigFloat ldexp(long e) const {
    BigFloat r(precision());
    mpfr_mul_2si(r.value_, value_, e, MPFR_RNDN);
    return r;
  }

  int sign() const { return mpfr_sgn(value_); }
  friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_less_p(a.value_, b.value_); }
  friend bool operator>(const BigFloat& a, const BigFloat& b) { return mpfr_greater_p(a.value_, b.value_); }
  friend bool operator<=(const BigFloat& a, const BigFloat& b) { return mpfr_lessequal_p(a.value_, b.value_); }

  mpz_class round() const {
    mpz_class z;
    mpfr_get_z(z.get_mpz_t(), value_, MPFR_RNDN);
    return z;
  }

  mpz_class floor() const {
    mpz_class z;
    mpfr_get_z(z.get_mpz_t(), value_, MPFR_RNDD);
    return z;
  }

  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }

  /// Base-2 exponent e with 2^(e-1) <= |x| < 2^e; very negative for zero.
  long exponent() const { return mpfr_zero_p(value_) ? -(1L << 40) : mpfr_get_exp(value_); }

  /// Decimal rendering with the given number of significant digits.
  std::string to_string(int digits) const {
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*Rg", digits, value_);
    std::string s(buf);
    mpfr_free_str(buf);
    return s;
  }

 private:
  mpfr_t value_;
};

}  // namespace unitcert
