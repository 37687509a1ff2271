#pragma once

// Modular arithmetic primitives: Jacobi symbols, primality, square roots
// modulo odd primes and quadratic Hilbert symbols over Q_p and R.

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "unitcert/errors.hpp"

namespace unitcert {

using Integer = mpz_class;
using Rational = mpq_class;

namespace arith {

inline Integer mod(const Integer& a, const Integer& n) {
  Integer r;
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), n.get_mpz_t());
  return r;
}

inline Integer powmod(const Integer& base, const Integer& exp, const Integer& n) {
  Integer r;
  mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), n.get_mpz_t());
  return r;
}

/// Inverse of a modulo n, or nullopt when gcd(a, n) != 1.
inline std::optional<Integer> invmod(const Integer& a, const Integer& n) {
  Integer r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), n.get_mpz_t()) == 0) return std::nullopt;
  return r;
}

/// Jacobi symbol (a/n) for odd n >= 1.
inline int jacobi(const Integer& a, const Integer& n) {
  if (n < 1 || mpz_even_p(n.get_mpz_t())) {
    throw invalid_argument("jacobi: modulus must be odd and positive, got " + n.get_str());
  }
  return mpz_jacobi(a.get_mpz_t(), n.get_mpz_t());
}

namespace detail {

inline bool miller_rabin_round(const Integer& n, const Integer& d, unsigned s, const Integer& a) {
  const Integer n_minus_1 = n - 1;
  Integer x = powmod(a, d, n);
  if (x == 1 || x == n_minus_1) return true;
  for (unsigned r = 1; r < s; ++r) {
    x = x * x % n;
    if (x == n_minus_1) return true;
  }
  return false;
}

}  // namespace detail

/// Deterministic below 2^64 (first twelve prime bases), 40 seeded random
/// Miller-Rabin rounds above.
inline bool is_prime(const Integer& n) {
  if (n < 2) return false;
  static constexpr std::array<unsigned, 12> kBases{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (unsigned p : kBases) {
    if (n == p) return true;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
  }
  Integer d = n - 1;
  unsigned s = 0;
  while (mpz_even_p(d.get_mpz_t())) {
    d >>= 1;
    ++s;
  }
  if (mpz_sizeinbase(n.get_mpz_t(), 2) <= 64) {
    for (unsigned a : kBases) {
      if (!detail::miller_rabin_round(n, d, s, Integer(a))) return false;
    }
    return true;
  }
  gmp_randclass rng(gmp_randinit_mt);
  rng.seed(0x5eed);
  const Integer span = n - 3;
  for (int round = 0; round < 40; ++round) {
    Integer a = rng.get_z_range(span) + 2;
    if (!detail::miller_rabin_round(n, d, s, a)) return false;
  }
  return true;
}

/// An odd rational prime.
class OddPrime {
 public:
  explicit OddPrime(Integer value) : value_(std::move(value)) {
    if (value_ == 2 || !is_prime(value_)) {
      throw invalid_argument("not an odd prime: " + value_.get_str());
    }
  }
  explicit OddPrime(unsigned long value) : OddPrime(Integer(value)) {}

  const Integer& value() const noexcept { return value_; }
  unsigned long ulong() const { return value_.get_ui(); }

  friend bool operator==(const OddPrime& a, const OddPrime& b) { return a.value_ == b.value_; }
  friend bool operator<(const OddPrime& a, const OddPrime& b) { return a.value_ < b.value_; }

 private:
  Integer value_;
};

/// Canonical square root of a modulo t: the root r with r <= (t-1)/2.
/// Returns 0 when t | a and nullopt when a is a nonresidue.
inline std::optional<Integer> sqrt_mod(const Integer& a, const OddPrime& prime) {
  const Integer& t = prime.value();
  const Integer n = mod(a, t);
  if (n == 0) return Integer(0);
  if (jacobi(n, t) != 1) return std::nullopt;

  // Tonelli-Shanks: t - 1 = q * 2^s with q odd.
  Integer q = t - 1;
  unsigned s = 0;
  while (mpz_even_p(q.get_mpz_t())) {
    q >>= 1;
    ++s;
  }
  Integer r;
  if (s == 1) {
    r = powmod(n, (t + 1) / 4, t);
  } else {
    Integer z = 2;
    while (jacobi(z, t) != -1) ++z;
    Integer c = powmod(z, q, t);
    r = powmod(n, (q + 1) / 2, t);
    Integer u = powmod(n, q, t);
    unsigned m = s;
    while (u != 1) {
      unsigned i = 0;
      Integer u2 = u;
      while (u2 != 1) {
        u2 = u2 * u2 % t;
        ++i;
      }
      Integer b = c;
      for (unsigned j = 0; j + i + 1 < m; ++j) b = b * b % t;
      m = i;
      c = b * b % t;
      u = u * c % t;
      r = r * b % t;
    }
  }
  const Integer other = t - r;
  return r <= other ? r : other;
}

/// A place of Q: the archimedean place or a rational prime.
struct RealPlace {
  friend bool operator==(RealPlace, RealPlace) { return true; }
};
using Place = std::variant<RealPlace, Integer>;

namespace detail {

/// Splits a nonzero integer as p^v * u with p not dividing u.
inline std::pair<unsigned long, Integer> split_valuation(const Integer& n, const Integer& p) {
  Integer u;
  unsigned long v = mpz_remove(u.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
  return {v, u};
}

/// An integer in the same squareclass as the rational a.
inline Integer squareclass_integer(const Rational& a) {
  return a.get_num() * a.get_den();
}

}  // namespace detail

/// Quadratic Hilbert symbol (a, b)_v over Q_v. Returns +1 or -1.
inline int hilbert_symbol(const Rational& a, const Rational& b, const Place& place) {
  if (a == 0 || b == 0) throw invalid_argument("hilbert_symbol: arguments must be nonzero");
  if (std::holds_alternative<RealPlace>(place)) return (a < 0 && b < 0) ? -1 : 1;

  const Integer& p = std::get<Integer>(place);
  if (!is_prime(p)) throw invalid_argument("hilbert_symbol: not a prime place: " + p.get_str());

  auto [alpha, u] = detail::split_valuation(detail::squareclass_integer(a), p);
  auto [beta, v] = detail::split_valuation(detail::squareclass_integer(b), p);
  alpha &= 1;
  beta &= 1;

  if (p == 2) {
    const unsigned long u8 = mpz_fdiv_ui(u.get_mpz_t(), 8);
    const unsigned long v8 = mpz_fdiv_ui(v.get_mpz_t(), 8);
    auto eps = [](unsigned long x) { return ((x - 1) / 2) & 1; };
    auto omega = [](unsigned long x) { return ((x * x - 1) / 8) & 1; };
    const unsigned long e = eps(u8) * eps(v8) + alpha * omega(v8) + beta * omega(u8);
    return (e & 1) ? -1 : 1;
  }

  int result = 1;
  if (alpha && beta && mpz_fdiv_ui(p.get_mpz_t(), 4) == 3) result = -result;
  if (beta) result *= jacobi(u, p);
  if (alpha) result *= jacobi(v, p);
  return result;
}

/// Representatives of an F2-basis of Q_t^x / Q_t^x2 for odd t.
struct LocalBasis {
  Integer uniformizer;
  Integer nonresidue;  ///< smallest positive quadratic nonresidue mod t
};

inline LocalBasis local_basis(const OddPrime& t) {
  Integer u = 2;
  while (jacobi(u, t.value()) != -1) ++u;
  return {t.value(), u};
}

}  // namespace arith
}  // namespace unitcert
