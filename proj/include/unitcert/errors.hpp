#pragma once

#include <stdexcept>
#include <string>

namespace unitcert {

/// Base class for every error raised by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class invalid_argument : public error {
 public:
  using error::error;
};

/// The triple is outside the congruence/Legendre configuration the residual
/// bit is defined for.
class hypothesis_violation : public error {
 public:
  using error::error;
};

/// A bounded search (primes, places, functionals) ran out of candidates.
class search_exhausted : public error {
 public:
  using error::error;
};

class denominator_not_invertible : public error {
 public:
  using error::error;
};

/// The square-root precision schedule hit its cap without a decision.
class precision_exhausted : public error {
 public:
  using error::error;
};

/// eps_d * eps_2d has no square root in Q(sqrt2, sqrt d).
class not_a_square_in_biquad : public error {
 public:
  using error::error;
};

class non_unit_residue : public error {
 public:
  using error::error;
};

class invalid_place : public error {
 public:
  using error::error;
};

class rank_deficient : public error {
 public:
  using error::error;
};

class inseparable : public error {
 public:
  inseparable(const std::string& what, std::size_t first, std::size_t second)
      : error(what), first_(first), second_(second) {}
  std::size_t first() const noexcept { return first_; }
  std::size_t second() const noexcept { return second_; }

 private:
  std::size_t first_;
  std::size_t second_;
};

/// Two independent decision routes disagree. Never expected to fire.
class verification_failure : public error {
 public:
  using error::error;
};

}  // namespace unitcert
