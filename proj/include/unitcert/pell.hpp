#pragma once

// Fundamental Pell units of Z[sqrt d] via the periodic continued fraction
// of sqrt d, plus a verified on-disk cache.

#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <string>

#include <json.hpp>

#include "unitcert/arith.hpp"

namespace unitcert {

/// A unit x + y*sqrt(d) of Z[sqrt d] with x, y > 0 and x^2 - d y^2 = norm.
struct QuadUnit {
  Integer d;
  Integer x;
  Integer y;
  int norm = 1;

  bool satisfies_norm_equation() const {
    return (norm == 1 || norm == -1) && x > 0 && y > 0 && x * x - d * y * y == norm;
  }

  friend bool operator==(const QuadUnit& a, const QuadUnit& b) {
    return a.d == b.d && a.x == b.x && a.y == b.y && a.norm == b.norm;
  }
};

/// Convention tag for which unit eps_d denotes.
inline constexpr const char* kEpsilonConvention = "pell-Z[sqrt d]";

inline bool is_squarefree(const Integer& n) {
  if (n < 1) return false;
  Integer m = n;
  for (Integer f = 2; f * f <= m; ++f) {
    if (mpz_divisible_p(m.get_mpz_t(), f.get_mpz_t())) {
      m /= f;
      if (mpz_divisible_p(m.get_mpz_t(), f.get_mpz_t())) return false;
    }
  }
  return true;
}

/// Smallest unit > 1 of Z[sqrt d]; norm is -1 iff the period of the continued
/// fraction of sqrt d is odd.
inline QuadUnit fundamental_pell(const Integer& d) {
  if (d <= 1 || !is_squarefree(d)) {
    throw invalid_argument("fundamental_pell: d must be squarefree and > 1, got " + d.get_str());
  }
  const Integer a0 = sqrt(d);
  // Complete quotients (P + sqrt d) / Q; convergents h/k.
  Integer P = 0, Q = 1, a = a0;
  Integer h_prev = 1, h = a0;
  Integer k_prev = 0, k = 1;
  unsigned long period = 0;
  for (;;) {
    P = a * Q - P;
    Q = (d - P * P) / Q;
    a = (a0 + P) / Q;
    ++period;
    if (Q == 1) break;
    Integer h_next = a * h + h_prev;
    Integer k_next = a * k + k_prev;
    h_prev = std::move(h);
    h = std::move(h_next);
    k_prev = std::move(k);
    k = std::move(k_next);
  }
  return QuadUnit{d, h, k, (period % 2 == 1) ? -1 : 1};
}

/// Single-writer map d -> eps_d. Entries loaded from disk are re-verified on
/// every hit; entries failing x^2 - d y^2 = +-1 are recomputed.
class PellCache {
 public:
  PellCache() = default;
  explicit PellCache(std::filesystem::path path) : path_(std::move(path)) { load(); }

  QuadUnit unit(const Integer& d) {
    std::lock_guard lock(mutex_);
    auto it = entries_.find(d);
    if (it != entries_.end()) {
      if (it->second.d == d && it->second.satisfies_norm_equation()) return it->second;
      entries_.erase(it);
      ++rejected_;
    }
    QuadUnit u = fundamental_pell(d);
    entries_.emplace(d, u);
    dirty_ = true;
    return u;
  }

  /// Writes the cache back when a path is configured and entries changed.
  void save() const {
    std::lock_guard lock(mutex_);
    if (!path_ || !dirty_) return;
    nlohmann::ordered_json doc = nlohmann::ordered_json::object();
    for (const auto& [d, u] : entries_) {
      doc[d.get_str()] = {{"x", u.x.get_str()}, {"y", u.y.get_str()}, {"norm", std::to_string(u.norm)}};
    }
    std::ofstream out(*path_);
    out << doc.dump(2) << '\n';
  }

  std::size_t rejected_entries() const {
    std::lock_guard lock(mutex_);
    return rejected_;
  }

  /// Inserts an entry verbatim. Used for fault injection in tests.
  void inject(const QuadUnit& u) {
    std::lock_guard lock(mutex_);
    entries_[u.d] = u;
  }

 private:
  void load() {
    if (!path_ || !std::filesystem::exists(*path_)) return;
    std::ifstream in(*path_);
    nlohmann::json doc;
    try {
      in >> doc;
    } catch (const nlohmann::json::exception&) {
      dirty_ = true;
      return;
    }
    if (!doc.is_object()) return;
    for (const auto& [key, value] : doc.items()) {
      try {
        QuadUnit u{Integer(key), Integer(value.at("x").get<std::string>()),
                   Integer(value.at("y").get<std::string>()),
                   std::stoi(value.at("norm").get<std::string>())};
        entries_[u.d] = u;
      } catch (const std::exception&) {
        ++rejected_;
        dirty_ = true;
      }
    }
  }

  std::optional<std::filesystem::path> path_;
  std::map<Integer, QuadUnit> entries_;
  std::size_t rejected_ = 0;
  bool dirty_ = false;
  mutable std::mutex mutex_;
};

/// eps_d from the cache when one is supplied, computed directly otherwise.
inline QuadUnit pell_unit(const Integer& d, PellCache* cache) {
  return cache ? cache->unit(d) : fundamental_pell(d);
}

}  // namespace unitcert
