#pragma once

// The concrete towers: biquadratic Q(sqrt2, sqrt d) and the octic field
// L+ = Q(sqrt2, sqrt pq, sqrt ps), with the normalized element Theta.

#include <optional>

#include "unitcert/sqrt.hpp"

namespace unitcert {

using BiquadTower = RadicalTower<2>;
using OcticTower = RadicalTower<3>;
using BiquadElement = RadicalElement<2>;
using OcticElement = RadicalElement<3>;
using OcticEmbedding = RealEmbedding<3>;

struct Triple {
  Integer p, q, s;
  friend bool operator==(const Triple&, const Triple&) = default;
  std::string to_string() const { return "(" + p.get_str() + "," + q.get_str() + "," + s.get_str() + ")"; }
};

/// Q(sqrt2, sqrt d) for odd squarefree d > 1, basis {1, r2, rd, r2d}.
inline TowerPtr<2> biquad_tower(const Integer& d) {
  if (mpz_even_p(d.get_mpz_t()) || d <= 1 || !is_squarefree(d)) {
    throw invalid_argument("biquadratic field needs odd squarefree d > 1, got " + d.get_str());
  }
  return std::make_shared<const BiquadTower>(std::array<Integer, 2>{Integer(2), d},
                                             std::array<std::string, 4>{"1", "r2", "rd", "r2d"}, "biquad",
                                             std::vector<Integer>{d});
}

inline void require_distinct_odd_primes(const Triple& t) {
  for (const Integer* x : {&t.p, &t.q, &t.s}) {
    if (*x == 2 || !arith::is_prime(*x)) throw invalid_argument("not an odd prime: " + x->get_str());
  }
  if (t.p == t.q || t.p == t.s || t.q == t.s) throw invalid_argument("primes must be distinct: " + t.to_string());
}

/// L+ for distinct odd primes, basis {1, r2, rpq, r2pq, rps, r2ps, rqs, r2qs}.
inline TowerPtr<3> octic_tower(const Triple& t) {
  require_distinct_odd_primes(t);
  return std::make_shared<const OcticTower>(
      std::array<Integer, 3>{Integer(2), t.p * t.q, t.p * t.s},
      std::array<std::string, 8>{"1", "r2", "rpq", "r2pq", "rps", "r2ps", "rqs", "r2qs"}, "octic",
      std::vector<Integer>{t.p, t.q, t.s});
}

inline std::optional<BiquadElement> sqrt_biquad(const BiquadElement& a, const SqrtOptions& o = {}) {
  return algebraic_sqrt(a, o);
}

inline std::optional<OcticElement> sqrt_octic(const OcticElement& a, const SqrtOptions& o = {}) {
  return algebraic_sqrt(a, o);
}

/// The iota0-positive root of eps_d * eps_2d inside Q(sqrt2, sqrt d).
inline BiquadElement sqrt_eps_product(const Integer& d, PellCache* cache, const SqrtOptions& opts = {}) {
  auto tower = biquad_tower(d);
  const BiquadElement product =
      to_element(pell_unit(d, cache), tower) * to_element(pell_unit(2 * d, cache), tower);
  auto root = sqrt_biquad(product, opts);
  if (!root) {
    throw not_a_square_in_biquad("eps_" + d.get_str() + " * eps_" + Integer(2 * d).get_str() +
                                 " is not a square in Q(sqrt2, sqrt" + d.get_str() + ")");
  }
  return *root;
}

struct ThetaData {
  BiquadElement root_pq;  ///< sqrt(eps_pq eps_2pq) in Q(sqrt2, sqrt pq)
  BiquadElement root_ps;  ///< sqrt(eps_ps eps_2ps) in Q(sqrt2, sqrt ps)
  OcticElement theta;
};

inline ThetaData theta(const Triple& t, PellCache* cache = nullptr, const SqrtOptions& opts = {}) {
  auto octic = octic_tower(t);
  BiquadElement f1 = sqrt_eps_product(t.p * t.q, cache, opts);
  BiquadElement f2 = sqrt_eps_product(t.p * t.s, cache, opts);
  OcticElement th = lift(f1, octic) * lift(f2, octic);
  return {std::move(f1), std::move(f2), std::move(th)};
}

struct UnitIndexResult {
  int index = 1;
  std::optional<std::array<int, 3>> exponents;  ///< (e_a, e_b, e_ab)
  std::optional<BiquadElement> root;
};

/// Unit index [E_F : U] of F = Q(sqrt a, sqrt b) over the subgroup generated
/// by the quadratic subfield units, by testing eps_a^e1 eps_b^e2 eps_ab^e3
/// for squareness in F.
inline UnitIndexResult biquad_unit_index(const Integer& a, const Integer& b, PellCache* cache = nullptr,
                                         const SqrtOptions& opts = {}) {
  if (a <= 1 || b <= 1 || a == b || !is_squarefree(a) || !is_squarefree(b) || !is_squarefree(a * b)) {
    throw invalid_argument("biquad_unit_index: need squarefree a, b > 1 with ab squarefree");
  }
  auto tower = std::make_shared<const BiquadTower>(std::array<Integer, 2>{a, b});
  const std::array<BiquadElement, 3> eps{to_element(pell_unit(a, cache), tower),
                                         to_element(pell_unit(b, cache), tower),
                                         to_element(pell_unit(a * b, cache), tower)};
  for (unsigned v = 1; v < 8; ++v) {
    const std::array<int, 3> e{int((v >> 2) & 1U), int((v >> 1) & 1U), int(v & 1U)};
    BiquadElement prod = BiquadElement::constant(tower, 1);
    for (int k = 0; k < 3; ++k) {
      if (e[k]) prod *= eps[k];
    }
    if (auto r = sqrt_biquad(prod, opts)) return {2, e, *r};
  }
  return {};
}

}  // namespace unitcert
