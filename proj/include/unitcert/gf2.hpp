#pragma once

// Small dense linear algebra over F2.

#include <cstdint>
#include <optional>
#include <vector>

namespace unitcert::gf2 {

using BitVector = std::vector<std::uint8_t>;

inline void add_into(BitVector& a, const BitVector& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] ^= b[i];
}

inline bool is_zero(const BitVector& v) {
  for (auto x : v) {
    if (x) return false;
  }
  return true;
}

/// Incrementally built row-echelon basis of a subspace of F2^n.
class EchelonBasis {
 public:
  explicit EchelonBasis(std::size_t dimension) : dimension_(dimension) {}

  /// Adds v if it is independent of the rows so far; returns whether it was.
  bool insert(BitVector v) {
    reduce(v);
    for (std::size_t i = 0; i < dimension_; ++i) {
      if (v[i]) {
        pivots_.push_back(i);
        rows_.push_back(std::move(v));
        return true;
      }
    }
    return false;
  }

  bool contains(BitVector v) const {
    reduce(v);
    return is_zero(v);
  }

  std::size_t rank() const noexcept { return rows_.size(); }
  std::size_t dimension() const noexcept { return dimension_; }

 private:
  void reduce(BitVector& v) const {
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      if (v[pivots_[k]]) add_into(v, rows_[k]);
    }
  }

  std::size_t dimension_;
  std::vector<BitVector> rows_;
  std::vector<std::size_t> pivots_;
};

using Matrix = std::vector<BitVector>;  // row-major

inline std::size_t rank(Matrix m) {
  if (m.empty()) return 0;
  const std::size_t cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t pivot = r;
    while (pivot < m.size() && !m[pivot][c]) ++pivot;
    if (pivot == m.size()) continue;
    std::swap(m[r], m[pivot]);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i != r && m[i][c]) add_into(m[i], m[r]);
    }
    ++r;
  }
  return r;
}

/// Solves m x = b for square invertible m; nullopt if m is singular.
inline std::optional<BitVector> solve(Matrix m, BitVector b) {
  const std::size_t n = m.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    while (pivot < n && !m[pivot][c]) ++pivot;
    if (pivot == n) return std::nullopt;
    std::swap(m[c], m[pivot]);
    std::swap(b[c], b[pivot]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i != c && m[i][c]) {
        add_into(m[i], m[c]);
        b[i] ^= b[c];
      }
    }
  }
  return b;
}

inline BitVector multiply(const Matrix& m, const BitVector& x) {
  BitVector out(m.size(), 0);
  for (std::size_t i = 0; i < m.size(); ++i) {
    std::uint8_t acc = 0;
    for (std::size_t j = 0; j < x.size(); ++j) acc ^= static_cast<std::uint8_t>(m[i][j] & x[j]);
    out[i] = acc;
  }
  return out;
}

}  // namespace unitcert::gf2
