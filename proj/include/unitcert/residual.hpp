#pragma once

// The residual bit delta(p, q, s): hypothesis checks, split places of L+,
// residues at a place, and the certificate of the split-prime decision.

#include <string>
#include <vector>

#include "unitcert/fields.hpp"

namespace unitcert {

/// D(p,q,s) = (p mod 8, q mod 8, s mod 8, (q/p), (s/p), (q/s)).
struct ClassicalDatum {
  unsigned long p_mod8 = 0, q_mod8 = 0, s_mod8 = 0;
  int q_over_p = 0, s_over_p = 0, q_over_s = 0;

  std::array<long, 6> tuple() const {
    return {long(p_mod8), long(q_mod8), long(s_mod8), q_over_p, s_over_p, q_over_s};
  }
  friend bool operator==(const ClassicalDatum&, const ClassicalDatum&) = default;
  std::string to_string() const {
    std::string out = "(";
    auto t = tuple();
    for (std::size_t i = 0; i < t.size(); ++i) out += (i ? "," : "") + std::to_string(t[i]);
    return out + ")";
  }
};

inline ClassicalDatum classical_datum(const Triple& t) {
  require_distinct_odd_primes(t);
  return {mpz_fdiv_ui(t.p.get_mpz_t(), 8),
          mpz_fdiv_ui(t.q.get_mpz_t(), 8),
          mpz_fdiv_ui(t.s.get_mpz_t(), 8),
          arith::jacobi(t.q, t.p),
          arith::jacobi(t.s, t.p),
          arith::jacobi(t.q, t.s)};
}

/// p = 7 (mod 8), q = s = 3 (mod 8) and Legendre pattern (1,1,1) or (-1,-1,1).
struct TripleHypothesis {
  Triple triple;
  std::array<int, 3> branch;
};

/// Checks the hypotheses; returns the reason for failure, empty when they hold.
inline std::string hypothesis_failure(const Triple& t) {
  const ClassicalDatum d = classical_datum(t);
  if (d.p_mod8 != 7) return "p = " + t.p.get_str() + " is not 7 mod 8";
  if (d.q_mod8 != 3) return "q = " + t.q.get_str() + " is not 3 mod 8";
  if (d.s_mod8 != 3) return "s = " + t.s.get_str() + " is not 3 mod 8";
  const std::array<int, 3> pattern{d.q_over_p, d.s_over_p, d.q_over_s};
  if (pattern != std::array<int, 3>{1, 1, 1} && pattern != std::array<int, 3>{-1, -1, 1}) {
    return "Legendre pattern ((q/p),(s/p),(q/s)) = (" + std::to_string(pattern[0]) + "," +
           std::to_string(pattern[1]) + "," + std::to_string(pattern[2]) + ") is neither (1,1,1) nor (-1,-1,1)";
  }
  return {};
}

inline TripleHypothesis validate_hypothesis(const Triple& t) {
  if (auto why = hypothesis_failure(t); !why.empty()) {
    throw hypothesis_violation("triple " + t.to_string() + " violates the hypotheses: " + why);
  }
  const ClassicalDatum d = classical_datum(t);
  return {t, {d.q_over_p, d.s_over_p, d.q_over_s}};
}

/// A place of L+ above a completely split odd prime t, realized as signed
/// roots of 2, pq and ps modulo t.
struct SplitPlace {
  ResidueMap<3> map;
  std::array<int, 3> signs;  ///< +1: canonical root, -1: its negative

  const Integer& t() const { return map.modulus(); }
  const Integer& r2() const { return map.generator_roots()[0]; }
  const Integer& rpq() const { return map.generator_roots()[1]; }
  const Integer& rps() const { return map.generator_roots()[2]; }
  const Integer& residue_of_basis(std::size_t i) const { return map.basis_residue(i); }

  std::string label() const {
    return "t=" + t().get_str() + " (r2,rpq,rps)=(" + r2().get_str() + "," + rpq().get_str() + "," +
           rps().get_str() + ")";
  }
  friend bool operator==(const SplitPlace& a, const SplitPlace& b) {
    return a.t() == b.t() && a.map.generator_roots() == b.map.generator_roots();
  }
};

/// Whether t is an odd prime not dividing the generators at which every
/// generator is a nonzero square.
template <unsigned K>
bool splits_completely(const RadicalTower<K>& tower, const Integer& t) {
  if (t == 2 || !arith::is_prime(t)) return false;
  for (const auto& g : tower.generators()) {
    if (arith::jacobi(g, t) != 1) return false;
  }
  return true;
}

/// Ascending completely split primes t <= bound, at most `count` of them.
template <unsigned K>
std::vector<arith::OddPrime> split_primes(const RadicalTower<K>& tower, std::size_t count, const Integer& bound) {
  std::vector<arith::OddPrime> out;
  for (Integer t = 3; t <= bound && out.size() < count; t += 2) {
    if (splits_completely(tower, t)) out.emplace_back(t);
  }
  return out;
}

/// Like split_primes, but fewer than `count` primes is an error.
inline std::vector<arith::OddPrime> find_split_primes(const Triple& triple, std::size_t count, const Integer& bound) {
  auto tower = octic_tower(triple);
  auto primes = split_primes(*tower, count, bound);
  if (primes.size() < count) {
    throw search_exhausted("only " + std::to_string(primes.size()) + " split primes <= " + bound.get_str() +
                           " for " + triple.to_string() + ", wanted " + std::to_string(count));
  }
  return primes;
}

/// The 8 places above t: sign choices on the canonical roots in
/// lexicographic order (+ before -; r2, then rpq, then rps).
inline std::vector<SplitPlace> enumerate_places(const RadicalTower<3>& tower, const arith::OddPrime& t) {
  if (!splits_completely(tower, t.value())) {
    throw invalid_argument(t.value().get_str() + " does not split completely");
  }
  std::array<Integer, 3> canonical;
  for (unsigned j = 0; j < 3; ++j) canonical[j] = *arith::sqrt_mod(tower.generators()[j], t);
  std::vector<SplitPlace> places;
  for (unsigned k = 0; k < 8; ++k) {
    std::array<int, 3> signs{};
    std::array<Integer, 3> roots;
    for (unsigned j = 0; j < 3; ++j) {
      const bool flip = (k >> (2 - j)) & 1U;
      signs[j] = flip ? -1 : 1;
      roots[j] = flip ? Integer(t.value() - canonical[j]) : canonical[j];
    }
    places.push_back(SplitPlace{ResidueMap<3>(tower, t, roots), signs});
  }
  return places;
}

inline std::vector<SplitPlace> enumerate_places(const arith::OddPrime& t, const Triple& triple) {
  return enumerate_places(*octic_tower(triple), t);
}

inline Integer residue_at(const OcticElement& x, const SplitPlace& place) { return place.map(x); }

template <unsigned K>
Integer residue_at(const RadicalElement<K>& x, const SplitPlace& place, const TowerPtr<3>& octic) {
  return place.map(lift(x, octic));
}

inline Integer residue_at(const QuadUnit& u, const SplitPlace& place, const TowerPtr<3>& octic) {
  return place.map(to_element(u, octic));
}

/// One generator of the fundamental system of units.
struct FsuGenerator {
  std::string name;    ///< eta1 .. eta7
  std::string symbol;  ///< e.g. "sqrt(eps_133*eps_21)"
  enum class Status { exact, symbolic, not_a_square } status = Status::exact;
  std::optional<OcticElement> value;
  std::optional<OcticElement> square;  ///< the unit product value^2 equals, for roots
};

inline const char* to_string(FsuGenerator::Status s) {
  switch (s) {
    case FsuGenerator::Status::exact: return "exact";
    case FsuGenerator::Status::symbolic: return "symbolic-precision-cap";
    case FsuGenerator::Status::not_a_square: return "not-a-square";
  }
  return "?";
}

struct PlaceEvaluation {
  SplitPlace place;
  Integer theta_residue;
  Integer eps_pq_residue;
  int legendre_theta = 0;
  int legendre_eps = 0;
  bool valid() const { return legendre_eps == -1; }
  int delta() const { return legendre_theta == 1 ? 0 : 1; }
};

struct Certificate {
  Triple triple;
  bool hypotheses_verified = true;
  ClassicalDatum datum;
  std::string epsilon_convention = kEpsilonConvention;
  std::optional<SplitPlace> place;
  Integer theta_residue;
  Integer eps_pq_residue;
  int legendre_theta = 0;
  int legendre_eps = 0;
  int delta = 0;
  std::string mu;  ///< "1" or "eps_pq"
  std::vector<FsuGenerator> fsu;
  bool oracle_checked = false;
  std::vector<std::string> warnings;
  std::vector<PlaceEvaluation> other_places;  ///< filled when all places are requested
};

struct DeltaOptions {
  Integer prime_bound = 100000;
  std::size_t max_primes = 50;
  bool force = false;
  bool oracle_check = false;
  bool compute_fsu = true;
  bool all_places = false;
  SqrtOptions sqrt;
  PellCache* cache = nullptr;
};

/// Everything the place loop needs, computed once per triple.
struct ResidualContext {
  Triple triple;
  TowerPtr<3> octic;
  ThetaData theta;
  QuadUnit eps_pq;
  OcticElement eps_pq_element;

  static ResidualContext build(const Triple& t, const DeltaOptions& opts) {
    auto octic = octic_tower(t);
    ThetaData th = unitcert::theta(t, opts.cache, opts.sqrt);
    QuadUnit e = pell_unit(t.p * t.q, opts.cache);
    OcticElement ee = to_element(e, octic);
    return {t, octic, std::move(th), std::move(e), std::move(ee)};
  }
};

/// Residues and Legendre symbols of Theta and eps_pq at one place; nullopt
/// when some residue is zero or a denominator is not invertible.
inline std::optional<PlaceEvaluation> evaluate_place(const ResidualContext& ctx, const SplitPlace& place) {
  try {
    PlaceEvaluation ev{place, residue_at(ctx.theta.theta, place), residue_at(ctx.eps_pq_element, place), 0, 0};
    if (ev.theta_residue == 0 || ev.eps_pq_residue == 0) return std::nullopt;
    ev.legendre_theta = arith::jacobi(ev.theta_residue, place.t());
    ev.legendre_eps = arith::jacobi(ev.eps_pq_residue, place.t());
    return ev;
  } catch (const denominator_not_invertible&) {
    return std::nullopt;
  }
}

/// Every valid place among the first `max_primes` split primes, in
/// (ascending t, lexicographic sign) order.
inline std::vector<PlaceEvaluation> valid_places(const ResidualContext& ctx, const DeltaOptions& opts,
                                                 std::size_t limit = SIZE_MAX) {
  std::vector<PlaceEvaluation> out;
  for (const auto& t : split_primes(*ctx.octic, opts.max_primes, opts.prime_bound)) {
    for (const auto& place : enumerate_places(*ctx.octic, t)) {
      auto ev = evaluate_place(ctx, place);
      if (ev && ev->valid()) {
        out.push_back(std::move(*ev));
        if (out.size() >= limit) return out;
      }
    }
  }
  return out;
}

namespace detail {

inline std::string eps_name(const Integer& d) { return "eps_" + d.get_str(); }

inline FsuGenerator root_generator(std::string name, std::string symbol, const OcticElement& square,
                                   const std::optional<BiquadElement>& biquad_square, const TowerPtr<3>& octic,
                                   const SqrtOptions& opts, std::vector<std::string>& warnings) {
  FsuGenerator g{std::move(name), std::move(symbol), FsuGenerator::Status::exact, std::nullopt, square};
  try {
    std::optional<OcticElement> root;
    if (biquad_square) {
      if (auto r = sqrt_biquad(*biquad_square, opts)) root = lift(*r, octic);
    }
    if (!root) root = sqrt_octic(square, opts);
    if (root) {
      g.value = *root;
    } else {
      g.status = FsuGenerator::Status::not_a_square;
      warnings.push_back(g.name + " = " + g.symbol + ": argument is not a square in L+");
    }
  } catch (const precision_exhausted&) {
    g.status = FsuGenerator::Status::symbolic;
    warnings.push_back(g.name + " = " + g.symbol + ": square root exceeded the precision cap");
  }
  return g;
}

}  // namespace detail

/// The seven generators eps_2, eps_pq, sqrt(eps_pq eps_ps), sqrt(eps_pq eps_qs),
/// sqrt(eps_2qs), sqrt(eps_pq eps_2pq), xi = sqrt(mu Theta).
inline std::vector<FsuGenerator> build_fsu(const ResidualContext& ctx, int delta, const DeltaOptions& opts,
                                           std::vector<std::string>& warnings,
                                           std::optional<OcticElement> known_xi = std::nullopt) {
  const Triple& t = ctx.triple;
  const auto& octic = ctx.octic;
  const Integer pq = t.p * t.q, ps = t.p * t.s, qs = t.q * t.s;
  auto unit = [&](const Integer& d) { return pell_unit(d, opts.cache); };
  auto unit_elem = [&](const Integer& d) { return to_element(unit(d), octic); };

  std::vector<FsuGenerator> out;
  out.push_back({"eta1", detail::eps_name(2), FsuGenerator::Status::exact, unit_elem(2), std::nullopt});
  out.push_back({"eta2", detail::eps_name(pq), FsuGenerator::Status::exact, ctx.eps_pq_element, std::nullopt});
  out.push_back(detail::root_generator("eta3", "sqrt(" + detail::eps_name(pq) + "*" + detail::eps_name(ps) + ")",
                                       ctx.eps_pq_element * unit_elem(ps), std::nullopt, octic, opts.sqrt, warnings));
  out.push_back(detail::root_generator("eta4", "sqrt(" + detail::eps_name(pq) + "*" + detail::eps_name(qs) + ")",
                                       ctx.eps_pq_element * unit_elem(qs), std::nullopt, octic, opts.sqrt, warnings));
  {
    auto bq = biquad_tower(qs);
    out.push_back(detail::root_generator("eta5", "sqrt(" + detail::eps_name(2 * qs) + ")", unit_elem(2 * qs),
                                         to_element(unit(2 * qs), bq), octic, opts.sqrt, warnings));
  }
  out.push_back({"eta6", "sqrt(" + detail::eps_name(pq) + "*" + detail::eps_name(2 * pq) + ")",
                 FsuGenerator::Status::exact, lift(ctx.theta.root_pq, octic),
                 ctx.eps_pq_element * unit_elem(2 * pq)});
  const OcticElement mu_theta = delta ? ctx.eps_pq_element * ctx.theta.theta : ctx.theta.theta;
  const std::string xi_symbol = delta ? "sqrt(" + detail::eps_name(pq) + "*Theta)" : "sqrt(Theta)";
  if (known_xi) {
    out.push_back({"eta7", xi_symbol, FsuGenerator::Status::exact, std::move(known_xi), mu_theta});
  } else {
    out.push_back(detail::root_generator("eta7", xi_symbol, mu_theta, std::nullopt, octic, opts.sqrt, warnings));
  }
  return out;
}

/// delta(p,q,s) from the first valid split place, with the full audit trail.
inline Certificate delta(const Triple& triple, DeltaOptions opts = {}) {
  require_distinct_odd_primes(triple);
  Certificate cert;
  cert.triple = triple;
  cert.datum = classical_datum(triple);
  if (auto why = hypothesis_failure(triple); !why.empty()) {
    if (!opts.force) {
      throw hypothesis_violation("triple " + triple.to_string() + " violates the hypotheses: " + why);
    }
    cert.hypotheses_verified = false;
    opts.oracle_check = true;
    cert.warnings.push_back("hypotheses not satisfied (" + why + "); decision cross-checked by exact square roots");
  }

  const ResidualContext ctx = ResidualContext::build(triple, opts);
  auto places = valid_places(ctx, opts, opts.all_places ? SIZE_MAX : 1);
  if (places.empty()) {
    throw search_exhausted("no valid split place for " + triple.to_string() + " among the first " +
                           std::to_string(opts.max_primes) + " split primes <= " + opts.prime_bound.get_str());
  }
  const PlaceEvaluation& chosen = places.front();
  cert.place = chosen.place;
  cert.theta_residue = chosen.theta_residue;
  cert.eps_pq_residue = chosen.eps_pq_residue;
  cert.legendre_theta = chosen.legendre_theta;
  cert.legendre_eps = chosen.legendre_eps;
  cert.delta = chosen.delta();
  cert.mu = cert.delta ? "eps_pq" : "1";
  if (opts.all_places) cert.other_places.assign(places.begin() + 1, places.end());
  for (const auto& ev : cert.other_places) {
    if (ev.delta() != cert.delta) {
      throw verification_failure("delta differs between " + chosen.place.label() + " and " + ev.place.label());
    }
  }

  std::optional<OcticElement> xi;
  if (opts.oracle_check) {
    const OcticElement& th = ctx.theta.theta;
    const OcticElement other = cert.delta ? th : ctx.eps_pq_element * th;
    const OcticElement chosen_candidate = cert.delta ? ctx.eps_pq_element * th : th;
    xi = sqrt_octic(chosen_candidate, opts.sqrt);
    const bool other_square = sqrt_octic(other, opts.sqrt).has_value();
    if (!xi || other_square) {
      throw verification_failure("exact square-root oracle disagrees with the split-prime decision for " +
                                 triple.to_string());
    }
    cert.oracle_checked = true;
  }
  if (opts.compute_fsu) cert.fsu = build_fsu(ctx, cert.delta, opts, cert.warnings, xi);
  return cert;
}

/// The fundamental system of units with xi = sqrt(mu Theta).
inline std::vector<FsuGenerator> fsu(const Triple& triple, DeltaOptions opts = {}) {
  opts.compute_fsu = true;
  return delta(triple, opts).fsu;
}

/// Hilbert-symbol route to mu at a single place.
struct HilbertDecision {
  int delta = 0;
  arith::LocalBasis basis;
  std::array<int, 2> theta_symbols{};  ///< (Theta, t)_w and (Theta, u)_w
  Integer functional;                  ///< b with (eps_pq, b)_w = -1
  int theta_symbol_at_functional = 0;
};

inline HilbertDecision decide_mu_hilbert(const ResidualContext& ctx, const SplitPlace& place) {
  auto ev = evaluate_place(ctx, place);
  if (!ev || !ev->valid()) throw invalid_place("eps_pq is a local square at " + place.label());
  const Integer& t = place.t();
  HilbertDecision out;
  out.basis = arith::local_basis(place.map.prime());
  const Rational theta_class(ev->theta_residue), eps_class(ev->eps_pq_residue);
  out.theta_symbols = {arith::hilbert_symbol(theta_class, Rational(out.basis.uniformizer), t),
                       arith::hilbert_symbol(theta_class, Rational(out.basis.nonresidue), t)};
  out.delta = (out.theta_symbols[0] == 1 && out.theta_symbols[1] == 1) ? 0 : 1;
  for (const Integer& b : {out.basis.nonresidue, out.basis.uniformizer}) {
    if (arith::hilbert_symbol(eps_class, Rational(b), t) == -1) {
      out.functional = b;
      out.theta_symbol_at_functional = arith::hilbert_symbol(theta_class, Rational(b), t);
      break;
    }
  }
  return out;
}

inline HilbertDecision decide_mu_hilbert(const Triple& triple, const SplitPlace& place, const DeltaOptions& opts = {}) {
  return decide_mu_hilbert(ResidualContext::build(triple, opts), place);
}

struct NoncollapseReport {
  bool noncollapse = false;
  Certificate first;
  Certificate second;
};

/// True iff the two triples share D(p,q,s) but have different delta.
inline NoncollapseReport noncollapse_check(const Triple& a, const Triple& b, DeltaOptions opts = {}) {
  opts.compute_fsu = false;
  NoncollapseReport r{false, delta(a, opts), delta(b, opts)};
  r.noncollapse = r.first.datum == r.second.datum && r.first.delta != r.second.delta;
  return r;
}

}  // namespace unitcert
