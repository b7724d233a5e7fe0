#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gpe/errors.hpp"

namespace gpe {

// Hard bounds on the embedding dimension. Below 2 there is nothing ordinal;
// above 12 the pattern space (m!) outgrows any realistic sample anyway.
inline constexpr int min_embedding_dim = 2;
inline constexpr int max_embedding_dim = 12;

inline constexpr std::uint64_t factorial(int m) {
  std::uint64_t f = 1;
  for (int i = 2; i <= m; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

inline void check_embedding_dim(int m) {
  if (m < min_embedding_dim || m > max_embedding_dim)
    throw config_error("embedding dimension m must be in [" +
                       std::to_string(min_embedding_dim) + ", " +
                       std::to_string(max_embedding_dim) + "], got " + std::to_string(m));
}

// Ranking of a window in ascending order: order[p] is the position (within
// the window) of the p-th smallest value. Equal values keep their original
// left-to-right order, so a constant window ranks as the identity.
inline void pattern_order(std::span<const double> window, std::uint8_t* order) {
  check_embedding_dim(static_cast<int>(window.size()));
  // Re-derive the bound so the window length stays provably within the
  // fixed-size pattern buffers under optimization.
  const int m = std::min(static_cast<int>(window.size()), max_embedding_dim);
  for (int i = 0; i < m; ++i) order[i] = static_cast<std::uint8_t>(i);
  std::stable_sort(order, order + m,
                   [&](std::uint8_t a, std::uint8_t b) { return window[a] < window[b]; });
}

// True when the window contains an exact duplicate value; reported alongside
// entropy results since ties make the ranking convention visible.
inline bool window_has_tie(std::span<const double> window) {
  std::array<double, max_embedding_dim> tmp;
  const int m = static_cast<int>(window.size());
  check_embedding_dim(m);
  std::copy(window.begin(), window.end(), tmp.begin());
  std::sort(tmp.begin(), tmp.begin() + m);
  for (int i = 1; i < m; ++i)
    if (tmp[i] == tmp[i - 1]) return true;
  return false;
}

// Lehmer code of the ranking, mapping each of the m! orderings to a distinct
// index in [0, m!). Index 0 is the ascending (or constant) window.
inline std::uint64_t pattern_of(std::span<const double> window) {
  const int m = static_cast<int>(window.size());
  check_embedding_dim(m);
  for (double v : window)
    if (!std::isfinite(v)) throw domain_error("window contains a non-finite value");
  std::array<std::uint8_t, max_embedding_dim> order;
  pattern_order(window, order.data());
  std::uint64_t index = 0;
  for (int j = 0; j < m; ++j) {
    std::uint64_t smaller_later = 0;
    for (int l = j + 1; l < m; ++l)
      if (order[l] < order[j]) ++smaller_later;
    index += smaller_later * factorial(m - 1 - j);
  }
  return index;
}

// Inverse of the Lehmer code: reconstructs the ranking for a pattern index.
inline std::vector<std::uint8_t> decode_pattern(std::uint64_t index, int m) {
  check_embedding_dim(m);
  if (index >= factorial(m))
    throw config_error("pattern index " + std::to_string(index) + " out of range for m=" +
                       std::to_string(m));
  std::vector<std::uint8_t> pool(m);
  for (int i = 0; i < m; ++i) pool[i] = static_cast<std::uint8_t>(i);
  std::vector<std::uint8_t> order(m);
  for (int j = 0; j < m; ++j) {
    std::uint64_t f = factorial(m - 1 - j);
    std::uint64_t d = index / f;
    index %= f;
    order[j] = pool[d];
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(d));
  }
  return order;
}

// Counts of observed pattern indices. Dense storage up to m = 8 (8! slots);
// above that only seen patterns are stored, in index order, so iteration and
// serialization stay deterministic either way.
class PatternHistogram {
 public:
  explicit PatternHistogram(int m) : m_(m) {
    check_embedding_dim(m);
    if (m <= dense_limit) dense_.assign(factorial(m), 0);
  }

  int embedding_dim() const { return m_; }
  std::uint64_t total() const { return total_; }
  std::uint64_t num_patterns() const { return factorial(m_); }

  void add(std::uint64_t index, std::uint64_t count = 1) {
    if (index >= num_patterns())
      throw config_error("pattern index " + std::to_string(index) + " out of range for m=" +
                         std::to_string(m_));
    if (!dense_.empty())
      dense_[index] += count;
    else
      sparse_[index] += count;
    total_ += count;
  }

  std::uint64_t count(std::uint64_t index) const {
    if (!dense_.empty()) return index < dense_.size() ? dense_[index] : 0;
    auto it = sparse_.find(index);
    return it == sparse_.end() ? 0 : it->second;
  }

  void merge(const PatternHistogram& other) {
    if (other.m_ != m_)
      throw config_error("cannot merge histograms with different embedding dimensions");
    for (const auto& [idx, c] : other.nonzero()) add(idx, c);
  }

  // (index, count) pairs with count > 0, ascending by index.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> nonzero() const {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
    if (!dense_.empty()) {
      for (std::uint64_t i = 0; i < dense_.size(); ++i)
        if (dense_[i]) out.emplace_back(i, dense_[i]);
    } else {
      out.assign(sparse_.begin(), sparse_.end());
    }
    return out;
  }

  friend bool operator==(const PatternHistogram& a, const PatternHistogram& b) {
    return a.m_ == b.m_ && a.total_ == b.total_ && a.nonzero() == b.nonzero();
  }

 private:
  static constexpr int dense_limit = 8;
  int m_;
  std::uint64_t total_ = 0;
  std::vector<std::uint64_t> dense_;
  std::map<std::uint64_t, std::uint64_t> sparse_;
};

}
