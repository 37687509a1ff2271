#pragma once

// Exact arithmetic in multiquadratic fields Q(sqrt g_1, ..., sqrt g_K) over
// the radical basis {sqrt r_i}, where r_i is the squarefree kernel of the
// product of the generators selected by the bits of i.

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "unitcert/arith.hpp"
#include "unitcert/bigfloat.hpp"
#include "unitcert/pell.hpp"

namespace unitcert {

template <unsigned K>
class RadicalTower {
 public:
  static constexpr std::size_t kDegree = std::size_t{1} << K;

  /// `generators` must be squarefree, > 1 and independent modulo squares.
  /// `kind` and `parameters` only label the field for serialization.
  RadicalTower(std::array<Integer, K> generators, std::array<std::string, kDegree> names,
               std::string kind = "multiquadratic", std::vector<Integer> parameters = {})
      : generators_(std::move(generators)),
        names_(std::move(names)),
        kind_(std::move(kind)),
        parameters_(std::move(parameters)) {
    for (const auto& g : generators_) {
      if (!is_squarefree(g) || g <= 1) {
        throw invalid_argument("radical tower generator must be squarefree and > 1: " + g.get_str());
      }
    }
    for (std::size_t i = 0; i < kDegree; ++i) {
      Integer r = 1, c = 1;
      for (unsigned j = 0; j < K; ++j) {
        if (!((i >> j) & 1U)) continue;
        Integer g = gcd(r, generators_[j]);
        r = (r / g) * (generators_[j] / g);
        c *= g;
      }
      if (i != 0 && r == 1) throw invalid_argument("radical tower generators are dependent modulo squares");
      radicands_[i] = r;
      cofactors_[i] = c;
    }
    for (std::size_t i = 0; i < kDegree; ++i) {
      for (std::size_t j = 0; j < kDegree; ++j) table_[i][j] = gcd(radicands_[i], radicands_[j]);
    }
  }

  explicit RadicalTower(std::array<Integer, K> generators)
      : RadicalTower(generators, default_names(generators)) {}

  const std::array<Integer, K>& generators() const noexcept { return generators_; }
  /// Squarefree radicand of basis element i.
  const Integer& radicand(std::size_t i) const { return radicands_[i]; }
  /// c_i with prod_{j in i} g_j = c_i^2 * r_i.
  const Integer& cofactor(std::size_t i) const { return cofactors_[i]; }
  /// sqrt(r_i) * sqrt(r_j) = coefficient(i, j) * sqrt(r_{i xor j}).
  const Integer& product_coefficient(std::size_t i, std::size_t j) const { return table_[i][j]; }
  const std::string& basis_name(std::size_t i) const { return names_[i]; }
  const std::string& kind() const noexcept { return kind_; }
  const std::vector<Integer>& parameters() const noexcept { return parameters_; }

  std::optional<std::size_t> index_of_radicand(const Integer& r) const {
    for (std::size_t i = 0; i < kDegree; ++i) {
      if (radicands_[i] == r) return i;
    }
    return std::nullopt;
  }

  std::optional<std::size_t> index_of_name(const std::string& name) const {
    for (std::size_t i = 0; i < kDegree; ++i) {
      if (names_[i] == name) return i;
    }
    return std::nullopt;
  }

  friend bool operator==(const RadicalTower& a, const RadicalTower& b) { return a.generators_ == b.generators_; }

 private:
  static std::array<std::string, kDegree> default_names(const std::array<Integer, K>& gens) {
    std::array<std::string, kDegree> names;
    for (std::size_t i = 0; i < kDegree; ++i) {
      Integer r = 1;
      for (unsigned j = 0; j < K; ++j) {
        if (!((i >> j) & 1U)) continue;
        Integer g = gcd(r, gens[j]);
        r = (r / g) * (gens[j] / g);
      }
      names[i] = i == 0 ? "1" : "r" + r.get_str();
    }
    return names;
  }

  std::array<Integer, K> generators_;
  std::array<std::string, kDegree> names_;
  std::string kind_;
  std::vector<Integer> parameters_;
  std::array<Integer, kDegree> radicands_;
  std::array<Integer, kDegree> cofactors_;
  std::array<std::array<Integer, kDegree>, kDegree> table_;
};

template <unsigned K>
using TowerPtr = std::shared_ptr<const RadicalTower<K>>;

/// A real embedding, given by the sign it assigns to each generator root.
/// Bit j of `flips` set means sqrt(g_j) maps to the negative real root.
template <unsigned K>
struct RealEmbedding {
  unsigned flips = 0;

  static RealEmbedding from_signs(const std::array<int, K>& signs) {
    RealEmbedding e;
    for (unsigned j = 0; j < K; ++j) {
      if (signs[j] < 0) e.flips |= 1U << j;
    }
    return e;
  }
  /// Sign of sqrt(r_i) under this embedding.
  int sign_of(std::size_t i) const { return (std::popcount(static_cast<unsigned>(i) & flips) & 1) ? -1 : 1; }
  friend bool operator==(RealEmbedding, RealEmbedding) = default;
};

/// The distinguished embedding sending every radical to its positive root.
template <unsigned K>
inline constexpr RealEmbedding<K> kIota0{};

template <unsigned K>
class RadicalElement {
 public:
  static constexpr std::size_t kDegree = RadicalTower<K>::kDegree;
  using Coords = std::array<Rational, kDegree>;

  explicit RadicalElement(TowerPtr<K> tower) : tower_(std::move(tower)) {
    for (auto& c : coords_) c = 0;
  }
  RadicalElement(TowerPtr<K> tower, Coords coords) : tower_(std::move(tower)), coords_(std::move(coords)) {
    for (auto& c : coords_) c.canonicalize();
  }

  static RadicalElement constant(TowerPtr<K> tower, const Rational& value) {
    RadicalElement e(std::move(tower));
    e.coords_[0] = value;
    return e;
  }

  /// The basis element sqrt(r_i) itself.
  static RadicalElement basis(TowerPtr<K> tower, std::size_t i) {
    RadicalElement e(std::move(tower));
    e.coords_[i] = 1;
    return e;
  }

  const TowerPtr<K>& tower() const noexcept { return tower_; }
  const Coords& coords() const noexcept { return coords_; }
  const Rational& operator[](std::size_t i) const { return coords_[i]; }
  Rational& operator[](std::size_t i) { return coords_[i]; }

  bool is_zero() const {
    return std::all_of(coords_.begin(), coords_.end(), [](const Rational& c) { return c == 0; });
  }

  RadicalElement& operator+=(const RadicalElement& o) {
    check_same(o);
    for (std::size_t i = 0; i < kDegree; ++i) coords_[i] += o.coords_[i];
    return *this;
  }
  RadicalElement& operator-=(const RadicalElement& o) {
    check_same(o);
    for (std::size_t i = 0; i < kDegree; ++i) coords_[i] -= o.coords_[i];
    return *this;
  }
  RadicalElement& operator*=(const Rational& s) {
    for (auto& c : coords_) c *= s;
    return *this;
  }

  friend RadicalElement operator+(RadicalElement a, const RadicalElement& b) { return a += b; }
  friend RadicalElement operator-(RadicalElement a, const RadicalElement& b) { return a -= b; }
  friend RadicalElement operator*(RadicalElement a, const Rational& s) { return a *= s; }
  friend RadicalElement operator*(const Rational& s, RadicalElement a) { return a *= s; }
  RadicalElement operator-() const { return *this * Rational(-1); }

  friend RadicalElement operator*(const RadicalElement& a, const RadicalElement& b) {
    a.check_same(b);
    const auto& tw = *a.tower_;
    RadicalElement r(a.tower_);
    for (std::size_t i = 0; i < kDegree; ++i) {
      if (a.coords_[i] == 0) continue;
      for (std::size_t j = 0; j < kDegree; ++j) {
        if (b.coords_[j] == 0) continue;
        r.coords_[i ^ j] += a.coords_[i] * b.coords_[j] * tw.product_coefficient(i, j);
      }
    }
    return r;
  }
  RadicalElement& operator*=(const RadicalElement& o) { return *this = *this * o; }

  RadicalElement squared() const { return *this * *this; }

  RadicalElement pow(unsigned long n) const {
    RadicalElement result = constant(tower_, 1);
    RadicalElement base = *this;
    while (n) {
      if (n & 1UL) result *= base;
      base = base.squared();
      n >>= 1;
    }
    return result;
  }

  /// Galois conjugate flipping the generator roots selected by `flips`.
  RadicalElement conjugate(unsigned flips) const {
    RadicalElement r = *this;
    const RealEmbedding<K> e{flips};
    for (std::size_t i = 0; i < kDegree; ++i) {
      if (e.sign_of(i) < 0) r.coords_[i] = -r.coords_[i];
    }
    return r;
  }

  friend bool operator==(const RadicalElement& a, const RadicalElement& b) {
    return *a.tower_ == *b.tower_ && a.coords_ == b.coords_;
  }

  /// Canonical text: every coordinate in basis order, "c0 + c1*r2 + ...".
  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < kDegree; ++i) {
      if (i) out += " + ";
      out += coords_[i].get_str();
      if (i) out += "*" + tower_->basis_name(i);
    }
    return out;
  }

  /// Parses sums of terms "c", "c*name" or "name" in any order, with
  /// rational c. Accepts the canonical form produced by to_string().
  static RadicalElement parse(TowerPtr<K> tower, const std::string& text) {
    std::string s;
    for (char ch : text) {
      if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    }
    if (s.empty()) throw invalid_argument("empty element text");
    RadicalElement e(tower);
    std::size_t pos = 0;
    while (pos < s.size()) {
      std::size_t end = pos + 1;
      while (end < s.size() && !((s[end] == '+' || s[end] == '-') && s[end - 1] != '+' && s[end - 1] != '-' &&
                                 s[end - 1] != '*' && s[end - 1] != '/')) {
        ++end;
      }
      std::string term = s.substr(pos, end - pos);
      pos = end;
      if (!term.empty() && term[0] == '+') term.erase(0, 1);
      int sign = 1;
      while (!term.empty() && (term[0] == '-' || term[0] == '+')) {
        if (term[0] == '-') sign = -sign;
        term.erase(0, 1);
      }
      if (term.empty()) throw invalid_argument("malformed element text: " + text);
      std::string coef = term, name = "1";
      if (auto star = term.find('*'); star != std::string::npos) {
        coef = term.substr(0, star);
        name = term.substr(star + 1);
      } else if (std::isalpha(static_cast<unsigned char>(term[0]))) {
        coef = "1";
        name = term;
      }
      auto idx = tower->index_of_name(name);
      if (!idx) throw invalid_argument("unknown basis element '" + name + "' in: " + text);
      Rational c;
      if (c.set_str(coef, 10) != 0 || coef.empty()) throw invalid_argument("bad coefficient '" + coef + "'");
      if (c.get_den() == 0) throw invalid_argument("zero denominator in '" + coef + "'");
      c.canonicalize();
      e.coords_[*idx] += sign * c;
    }
    return e;
  }

 private:
  void check_same(const RadicalElement& o) const {
    if (tower_ != o.tower_ && !(*tower_ == *o.tower_)) {
      throw invalid_argument("field mismatch between operands");
    }
  }

  TowerPtr<K> tower_;
  Coords coords_;
};

/// Value of x under the real embedding e, with relative error at most
/// 2^(8 - precision_bits). Working precision grows to absorb cancellation.
template <unsigned K>
BigFloat embed_real(const RadicalElement<K>& x, RealEmbedding<K> e, mpfr_prec_t precision_bits) {
  if (precision_bits < 64) throw invalid_argument("embed_real: precision_bits must be >= 64");
  if (x.is_zero()) return BigFloat(0L, precision_bits);
  const auto& tw = *x.tower();
  mpfr_prec_t work = precision_bits + 32;
  for (;;) {
    BigFloat sum(0L, work), magnitude(0L, work);
    for (std::size_t i = 0; i < RadicalElement<K>::kDegree; ++i) {
      if (x[i] == 0) continue;
      BigFloat term = BigFloat(x[i], work) * BigFloat::sqrt(tw.radicand(i), work);
      magnitude += term.abs();
      if (e.sign_of(i) < 0) term = -term;
      sum += term;
    }
    // Loss from cancellation is about exp(magnitude) - exp(sum) bits.
    if (sum.sign() != 0) {
      const long lost = magnitude.exponent() - sum.exponent();
      if (work - lost >= precision_bits + 16) return sum.rounded(precision_bits);
      work = precision_bits + lost + 48;
    } else {
      work *= 2;
    }
  }
}

/// Re-expresses an element of a subfield in a larger tower by matching
/// radicands. Throws when some basis radical of `x` is absent from `to`.
template <unsigned K1, unsigned K2>
RadicalElement<K2> lift(const RadicalElement<K1>& x, const TowerPtr<K2>& to) {
  RadicalElement<K2> out(to);
  for (std::size_t i = 0; i < RadicalElement<K1>::kDegree; ++i) {
    if (x[i] == 0) continue;
    auto idx = to->index_of_radicand(x.tower()->radicand(i));
    if (!idx) throw invalid_argument("lift: radical sqrt(" + x.tower()->radicand(i).get_str() + ") not in target field");
    out[*idx] += x[i];
  }
  return out;
}

/// The Pell unit x + y sqrt(d) as an element of a tower containing sqrt(d).
template <unsigned K>
RadicalElement<K> to_element(const QuadUnit& u, const TowerPtr<K>& tower) {
  auto idx = tower->index_of_radicand(u.d);
  if (!idx) throw invalid_argument("to_element: sqrt(" + u.d.get_str() + ") not in field");
  RadicalElement<K> e(tower);
  e[0] = u.x;
  e[*idx] = u.y;
  return e;
}

/// A ring homomorphism from Z[radical basis] (localized away from t) to F_t,
/// given by roots of the generators modulo t.
template <unsigned K>
class ResidueMap {
 public:
  static constexpr std::size_t kDegree = RadicalTower<K>::kDegree;

  ResidueMap(const RadicalTower<K>& tower, arith::OddPrime t, std::array<Integer, K> generator_roots)
      : t_(std::move(t)), roots_(std::move(generator_roots)) {
    const Integer& m = t_.value();
    for (unsigned j = 0; j < K; ++j) {
      roots_[j] = arith::mod(roots_[j], m);
      if (arith::mod(roots_[j] * roots_[j] - tower.generators()[j], m) != 0) {
        throw invalid_argument("residue map: root " + roots_[j].get_str() + " does not square to generator mod " +
                               m.get_str());
      }
    }
    for (std::size_t i = 0; i < kDegree; ++i) {
      Integer v = 1;
      for (unsigned j = 0; j < K; ++j) {
        if ((i >> j) & 1U) v = v * roots_[j] % m;
      }
      auto inv = arith::invmod(tower.cofactor(i), m);
      if (!inv) throw denominator_not_invertible("cofactor divisible by " + m.get_str());
      basis_[i] = v * *inv % m;
    }
  }

  const arith::OddPrime& prime() const noexcept { return t_; }
  const Integer& modulus() const noexcept { return t_.value(); }
  const std::array<Integer, K>& generator_roots() const noexcept { return roots_; }
  /// Residue of sqrt(r_i).
  const Integer& basis_residue(std::size_t i) const { return basis_[i]; }

  Integer reduce(const Rational& c) const {
    const Integer& m = t_.value();
    auto inv = arith::invmod(c.get_den(), m);
    if (!inv) throw denominator_not_invertible("denominator " + c.get_den().get_str() + " divisible by " + m.get_str());
    return arith::mod(c.get_num() * *inv, m);
  }

  Integer operator()(const RadicalElement<K>& x) const {
    const Integer& m = t_.value();
    Integer acc = 0;
    for (std::size_t i = 0; i < kDegree; ++i) {
      if (x[i] == 0) continue;
      acc += reduce(x[i]) * basis_[i];
    }
    return arith::mod(acc, m);
  }

 private:
  arith::OddPrime t_;
  std::array<Integer, K> roots_;
  std::array<Integer, kDegree> basis_;
};

}  // namespace unitcert
