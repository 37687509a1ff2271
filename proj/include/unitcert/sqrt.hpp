#pragma once

// Exact square roots in multiquadratic fields.
//
// The root beta of alpha is recovered from its real conjugates: with
// chi_s(i) the sign of sqrt(r_i) under embedding s,
//
//   beta_i = (1 / (N sqrt(r_i))) * sum_s chi_s(i) * beta(s),
//
// and beta(s) = +-sqrt(alpha(s)). Every sign pattern (beta(iota0) > 0) is
// tried; coordinates are recovered by bounded continued-fraction
// reconstruction and accepted only after exact squaring. A pattern is
// discarded once some N r_i beta_i is provably far from an integer: for an
// algebraic integer beta, Tr(beta sqrt r_i) = N r_i beta_i is in Z.

#include <optional>
#include <vector>

#include "unitcert/radical_field.hpp"

namespace unitcert {

struct SqrtOptions {
  mpfr_prec_t initial_bits = 256;
  mpfr_prec_t max_bits = 16384;
};

namespace detail {

/// Best approximation of x with denominator <= max_den from the continued
/// fraction convergents; nullopt if it misses x by more than tol.
inline std::optional<Rational> reconstruct_rational(const BigFloat& x, const Integer& max_den, const BigFloat& tol) {
  const mpfr_prec_t prec = x.precision();
  BigFloat rem = x;
  Integer h_prev = 1, h = rem.floor();
  Integer k_prev = 0, k = 1;
  rem -= BigFloat(h, prec);
  Rational best(h, k);
  for (int step = 0; step < 64 && rem.sign() != 0; ++step) {
    rem = BigFloat(1L, prec) / rem;
    Integer a = rem.floor();
    rem -= BigFloat(a, prec);
    Integer h_next = a * h + h_prev;
    Integer k_next = a * k + k_prev;
    if (k_next > max_den) break;
    h_prev = h;
    h = h_next;
    k_prev = k;
    k = k_next;
    best = Rational(h, k);
  }
  best.canonicalize();
  BigFloat err = (x - BigFloat(best, prec)).abs();
  if (tol < err) return std::nullopt;
  return best;
}

inline Integer coordinate_denominator_lcm(const auto& coords) {
  Integer m = 1;
  for (const auto& c : coords) m = lcm(m, c.get_den());
  return m;
}

}  // namespace detail

/// Square root of alpha positive under iota0, or nullopt if alpha is not a
/// square in its field. Throws precision_exhausted when max_bits is reached
/// before a decision.
template <unsigned K>
std::optional<RadicalElement<K>> algebraic_sqrt(const RadicalElement<K>& alpha, const SqrtOptions& opts = {}) {
  constexpr std::size_t N = RadicalElement<K>::kDegree;
  if (alpha.is_zero()) throw invalid_argument("algebraic_sqrt: zero has no normalized square root");
  const auto& tower = alpha.tower();

  // Scale to integer coordinates: m^2 alpha = (m beta)^2 with m beta integral.
  const Integer m = detail::coordinate_denominator_lcm(alpha.coords());
  const RadicalElement<K> target = alpha * Rational(m * m);

  std::array<Integer, N> trace_scale;  // N r_i
  for (std::size_t i = 0; i < N; ++i) trace_scale[i] = Integer(static_cast<unsigned long>(N)) * tower->radicand(i);

  for (mpfr_prec_t prec = opts.initial_bits; prec <= opts.max_bits; prec *= 2) {
    std::array<BigFloat, N> root_radicand;
    for (std::size_t i = 0; i < N; ++i) root_radicand[i] = BigFloat::sqrt(tower->radicand(i), prec);

    // Conjugates alpha(s) with absolute error bounds.
    std::array<BigFloat, N> conj_root, conj_err;
    bool undecided_sign = false;
    for (unsigned s = 0; s < N; ++s) {
      const RealEmbedding<K> e{s};
      BigFloat value(0L, prec), magnitude(0L, prec);
      for (std::size_t i = 0; i < N; ++i) {
        if (target[i] == 0) continue;
        BigFloat term = BigFloat(target[i], prec) * root_radicand[i];
        magnitude += term.abs();
        value += e.sign_of(i) < 0 ? -term : term;
      }
      BigFloat err = magnitude.ldexp(8 - static_cast<long>(prec));
      if (value < -err) return std::nullopt;  // negative at a real place
      if (value <= err) {
        undecided_sign = true;
        break;
      }
      conj_root[s] = BigFloat::sqrt(value);
      BigFloat lower = BigFloat::sqrt(value - err);
      conj_err[s] = err / lower + conj_root[s].ldexp(4 - static_cast<long>(prec));
    }
    if (undecided_sign) continue;

    BigFloat err_sum(0L, prec);
    for (unsigned s = 0; s < N; ++s) err_sum += conj_err[s];

    bool all_excluded = true;
    const unsigned patterns = 1U << (N - 1);
    for (unsigned pattern = 0; pattern < patterns; ++pattern) {
      // Bit (s - 1) of pattern set: beta(s) = -sqrt(alpha(s)).
      auto beta_at = [&](unsigned s) -> BigFloat {
        if (s == 0 || !((pattern >> (s - 1)) & 1U)) return conj_root[s];
        return -conj_root[s];
      };
      std::array<BigFloat, N> coord;
      std::array<BigFloat, N> coord_err;
      bool excluded = false;
      for (std::size_t i = 0; i < N && !excluded; ++i) {
        BigFloat acc(0L, prec);
        for (unsigned s = 0; s < N; ++s) {
          const RealEmbedding<K> e{s};
          acc += e.sign_of(i) < 0 ? -beta_at(s) : beta_at(s);
        }
        const BigFloat denom = BigFloat(static_cast<long>(N), prec) * root_radicand[i];
        coord[i] = acc / denom;
        coord_err[i] = (err_sum / denom).ldexp(2) + coord[i].abs().ldexp(8 - static_cast<long>(prec));
        // Integrality of the trace: N r_i beta_i in Z.
        const BigFloat scale(trace_scale[i], prec);
        const BigFloat scaled = coord[i] * scale;
        const BigFloat miss = (scaled - BigFloat(scaled.round(), prec)).abs();
        if ((coord_err[i] * scale).ldexp(1) < miss) excluded = true;
      }
      if (excluded) continue;
      all_excluded = false;

      // Denominator bound 2, then 4, then the trace bound N r_i.
      for (int stage = 0; stage < 3; ++stage) {
        RadicalElement<K> candidate(tower);
        bool ok = true;
        for (std::size_t i = 0; i < N && ok; ++i) {
          const Integer bound = stage == 0 ? Integer(2) : stage == 1 ? Integer(4) : trace_scale[i];
          BigFloat tol = coord_err[i].ldexp(1);
          auto q = detail::reconstruct_rational(coord[i], bound, tol);
          if (!q) ok = false;
          else candidate[i] = *q;
        }
        if (!ok) continue;
        if (candidate.squared() == target) {
          return candidate * Rational(1, m);
        }
      }
    }
    if (all_excluded) return std::nullopt;
  }
  throw precision_exhausted("algebraic_sqrt: no decision within " + std::to_string(opts.max_bits) + " bits");
}

}  // namespace unitcert
