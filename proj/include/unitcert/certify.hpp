#pragma once

// Local Hilbert-symbol test functionals at split places of L+, affine
// certification of candidate cosets, and separation of finite candidate
// families in L+^x / L+^x2.

#include <string>
#include <vector>

#include "unitcert/gf2.hpp"
#include "unitcert/residual.hpp"

namespace unitcert {

/// lambda_{w,b}(x) = 0 iff (x, b)_w = +1, for x with unit residue at w.
struct TestFunctional {
  enum class Kind { nonresidue, uniformizer };
  SplitPlace place;
  Kind kind;
  Integer b;

  int operator()(const OcticElement& x) const {
    Integer r;
    try {
      r = residue_at(x, place);
    } catch (const denominator_not_invertible& e) {
      throw non_unit_residue(std::string("non-unit residue at ") + place.label() + ": " + e.what());
    }
    if (r == 0) throw non_unit_residue("zero residue at " + place.label());
    return arith::hilbert_symbol(Rational(r), Rational(b), place.t()) == -1 ? 1 : 0;
  }

  std::string kind_name() const { return kind == Kind::uniformizer ? "uniformizer" : "nonresidue"; }
};

/// Hilbert test vector of x against the local basis (t, u), as bits.
inline std::array<int, 2> test_vector(const OcticElement& x, const SplitPlace& place) {
  const auto basis = arith::local_basis(place.map.prime());
  const TestFunctional by_t{place, TestFunctional::Kind::uniformizer, basis.uniformizer};
  const TestFunctional by_u{place, TestFunctional::Kind::nonresidue, basis.nonresidue};
  return {by_t(x), by_u(x)};
}

namespace detail {

/// Whether every element has a nonzero residue with invertible denominators.
inline bool all_units_at(const std::vector<const OcticElement*>& elems, const SplitPlace& place) {
  try {
    for (const auto* e : elems) {
      if (residue_at(*e, place) == 0) return false;
    }
    return true;
  } catch (const denominator_not_invertible&) {
    return false;
  }
}

/// Calls visit(functional) for each candidate functional in search order:
/// ascending split t, lexicographic places, nonresidue u before uniformizer t.
/// Places where some element is not a unit are skipped. Stops when visit
/// returns true. Returns the number of usable places seen.
template <typename Visit>
std::size_t scan_functionals(const TowerPtr<3>& tower, const std::vector<const OcticElement*>& elems,
                             const Integer& bound, Visit&& visit) {
  std::size_t usable = 0;
  for (Integer t = 3; t <= bound; t += 2) {
    if (!splits_completely(*tower, t)) continue;
    const arith::OddPrime prime(t);
    const auto basis = arith::local_basis(prime);
    for (const auto& place : enumerate_places(*tower, prime)) {
      if (!all_units_at(elems, place)) continue;
      ++usable;
      if (visit(TestFunctional{place, TestFunctional::Kind::nonresidue, basis.nonresidue})) return usable;
      if (visit(TestFunctional{place, TestFunctional::Kind::uniformizer, basis.uniformizer})) return usable;
    }
  }
  return usable;
}

}  // namespace detail

/// Functionals lambda_1..lambda_r whose value matrix on the generators is
/// invertible, so each candidate u0 * prod w_k^{e_k} is decoded from r bits.
struct AffineCertificate {
  std::vector<TestFunctional> functionals;
  gf2::BitVector base_image;  ///< lambda_i(u0)
  gf2::Matrix matrix;         ///< matrix[i][k] = lambda_i(w_k)

  std::size_t rank() const { return functionals.size(); }

  /// Bits of the candidate with exponent vector e.
  gf2::BitVector encode(const gf2::BitVector& e) const {
    gf2::BitVector v = gf2::multiply(matrix, e);
    gf2::add_into(v, base_image);
    return v;
  }

  /// Exponent vector from observed functional values.
  gf2::BitVector decode(gf2::BitVector values) const {
    gf2::add_into(values, base_image);
    auto e = gf2::solve(matrix, values);
    if (!e) throw rank_deficient("affine certificate matrix is singular");
    return *e;
  }
};

inline AffineCertificate certify_affine(const OcticElement& u0, const std::vector<OcticElement>& generators,
                                        const Integer& bound) {
  const std::size_t r = generators.size();
  AffineCertificate out;
  if (r == 0) return out;
  for (const auto& g : generators) {
    if (!(*g.tower() == *u0.tower())) throw invalid_argument("certify_affine: generators live in different fields");
  }
  std::vector<const OcticElement*> elems{&u0};
  for (const auto& g : generators) elems.push_back(&g);

  gf2::EchelonBasis rows(r);
  gf2::BitVector column_hit(r, 0);
  const std::size_t usable = detail::scan_functionals(u0.tower(), elems, bound, [&](const TestFunctional& f) {
    gf2::BitVector row(r);
    for (std::size_t k = 0; k < r; ++k) row[k] = static_cast<std::uint8_t>(f(generators[k]));
    for (std::size_t k = 0; k < r; ++k) column_hit[k] |= row[k];
    if (rows.insert(row)) {
      out.functionals.push_back(f);
      out.matrix.push_back(std::move(row));
      out.base_image.push_back(static_cast<std::uint8_t>(f(u0)));
    }
    return rows.rank() == r;
  });
  if (rows.rank() < r) {
    if (usable == 0) throw search_exhausted("certify_affine: no usable split place <= " + bound.get_str());
    std::string dead;
    for (std::size_t k = 0; k < r; ++k) {
      if (!column_hit[k]) dead += (dead.empty() ? "" : ",") + std::to_string(k);
    }
    throw rank_deficient("certify_affine: rank " + std::to_string(rows.rank()) + " < " + std::to_string(r) +
                         " after scanning split primes <= " + bound.get_str() +
                         (dead.empty() ? std::string() : "; generators with all-zero columns: " + dead));
  }
  return out;
}

struct SeparationCertificate {
  std::vector<OcticElement> candidates;
  std::vector<TestFunctional> functionals;
  std::vector<gf2::BitVector> table;  ///< table[i][j] = lambda_j(candidate_i)
  bool minimal = false;               ///< no functional can be dropped

  bool rows_distinct() const {
    for (std::size_t i = 0; i < table.size(); ++i) {
      for (std::size_t j = i + 1; j < table.size(); ++j) {
        if (table[i] == table[j]) return false;
      }
    }
    return true;
  }
};

namespace detail {

inline std::optional<std::pair<std::size_t, std::size_t>> first_collision(const std::vector<gf2::BitVector>& rows) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      if (rows[i] == rows[j]) return std::make_pair(i, j);
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// Functionals making the value rows of the candidates pairwise distinct.
/// Difference classes u_i / u_0 are evaluated through bilinearity as
/// lambda(u_i) + lambda(u_0); a functional is kept when its column on the
/// differences is independent of the columns kept so far.
inline SeparationCertificate separate_candidates(const std::vector<OcticElement>& candidates, const Integer& bound,
                                                 const SqrtOptions& sqrt_opts = {}) {
  if (candidates.empty()) throw invalid_argument("separate_candidates: empty candidate list");
  const std::size_t n = candidates.size();
  for (const auto& c : candidates) {
    if (!(*c.tower() == *candidates[0].tower())) throw invalid_argument("separate_candidates: mixed fields");
    if (c.is_zero()) throw invalid_argument("separate_candidates: zero candidate");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (candidates[i] == candidates[j]) {
        throw inseparable("candidates " + std::to_string(i) + " and " + std::to_string(j) + " are identical", i, j);
      }
    }
  }

  SeparationCertificate cert;
  cert.candidates = candidates;
  cert.table.assign(n, {});
  if (n == 1) {
    cert.minimal = true;
    return cert;
  }

  std::vector<const OcticElement*> elems;
  for (const auto& c : candidates) elems.push_back(&c);
  gf2::EchelonBasis columns(n - 1);
  detail::scan_functionals(candidates[0].tower(), elems, bound, [&](const TestFunctional& f) {
    gf2::BitVector values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = static_cast<std::uint8_t>(f(candidates[i]));
    gf2::BitVector diff(n - 1);
    for (std::size_t i = 1; i < n; ++i) diff[i - 1] = values[i] ^ values[0];
    if (columns.insert(diff)) {
      cert.functionals.push_back(f);
      for (std::size_t i = 0; i < n; ++i) cert.table[i].push_back(values[i]);
    }
    return !detail::first_collision(cert.table).has_value();
  });

  if (auto clash = detail::first_collision(cert.table)) {
    const auto [i, j] = *clash;
    std::optional<OcticElement> root;
    try {
      root = sqrt_octic(candidates[i] * candidates[j], sqrt_opts);
    } catch (const precision_exhausted&) {
    }
    if (root) {
      throw inseparable("candidates " + std::to_string(i) + " and " + std::to_string(j) +
                            " lie in the same squareclass",
                        i, j);
    }
    throw search_exhausted("separate_candidates: candidates " + std::to_string(i) + " and " + std::to_string(j) +
                           " not separated by split places <= " + bound.get_str());
  }

  cert.minimal = true;
  for (std::size_t drop = 0; drop < cert.functionals.size() && cert.minimal; ++drop) {
    std::vector<gf2::BitVector> reduced;
    for (const auto& row : cert.table) {
      gf2::BitVector r;
      for (std::size_t j = 0; j < row.size(); ++j) {
        if (j != drop) r.push_back(row[j]);
      }
      reduced.push_back(std::move(r));
    }
    if (!detail::first_collision(reduced)) cert.minimal = false;
  }
  return cert;
}

}  // namespace unitcert
