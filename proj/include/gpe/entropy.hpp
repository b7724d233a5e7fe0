#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gpe/errors.hpp"
#include "gpe/graph.hpp"
#include "gpe/ordinal.hpp"
#include "gpe/rng.hpp"
#include "gpe/walk.hpp"

namespace gpe {

inline constexpr int max_delay = 64;

inline void check_delay(int L) {
  if (L < 1 || L > max_delay)
    throw config_error("delay L must be in [1, " + std::to_string(max_delay) + "], got " +
                       std::to_string(L));
}

// Per-vertex embedding rows (x_i, y_i^L, y_i^2L, ..., y_i^(m-1)L), where
// y_i^k aggregates the signal over the k-step neighborhood of i. On directed
// graphs only vertices with walks of length (m-1)L get a row; `vertices`
// lists them in ascending id order.
struct EmbeddingMatrix {
  int m = 0;
  int L = 0;
  Mode mode = Mode::walk;
  std::vector<vertex_t> vertices;
  std::vector<double> data;  // vertices.size() rows by m columns, row-major

  std::size_t num_rows() const { return vertices.size(); }
  std::span<const double> row(std::size_t r) const {
    return {data.data() + r * static_cast<std::size_t>(m), static_cast<std::size_t>(m)};
  }
};

inline EmbeddingMatrix embed(const Graph& g, std::span<const double> x, int m, int L,
                             Mode mode = Mode::walk) {
  check_embedding_dim(m);
  check_delay(L);
  const std::size_t n = g.num_vertices();
  if (x.size() != n)
    throw config_error("signal length " + std::to_string(x.size()) +
                       " does not match vertex count " + std::to_string(n));
  if (g.weighted() && mode == Mode::set)
    throw config_error("set mode ignores weights; use walk mode on weighted graphs");
  if (!g.directed() && g.has_isolated_vertex())
    throw domain_error("undirected graph has an isolated vertex, so its neighborhood "
                       "averages are undefined");
  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(x[i]))
      throw domain_error("signal has a non-finite value at vertex " + std::to_string(i + 1));

  const std::size_t span_len = static_cast<std::size_t>(m - 1) * static_cast<std::size_t>(L);

  EmbeddingMatrix out;
  out.m = m;
  out.L = L;
  out.mode = mode;

  // Vertices that can be embedded: those with a walk of the full span length.
  // Shorter prefixes of such a walk serve the intermediate columns, so every
  // kept row is completely defined.
  if (g.directed()) {
    std::vector<char> reach = reachable_after(g, span_len);
    for (vertex_t i = 0; i < n; ++i)
      if (reach[i]) out.vertices.push_back(i);
    if (out.vertices.empty())
      throw domain_error("no vertex has a walk of length " + std::to_string(span_len) +
                         "; the embedding is empty");
  } else {
    out.vertices.resize(n);
    for (vertex_t i = 0; i < n; ++i) out.vertices[i] = i;
  }

  const std::size_t rows = out.vertices.size();
  out.data.assign(rows * static_cast<std::size_t>(m), 0.0);
  for (std::size_t r = 0; r < rows; ++r) out.data[r * m] = x[out.vertices[r]];

  if (mode == Mode::walk) {
    detail::WalkAccumulator acc(g, x);
    for (std::size_t s = 1; s <= span_len; ++s) {
      acc.step();
      if (s % static_cast<std::size_t>(L) == 0) {
        std::size_t c = s / static_cast<std::size_t>(L);
        for (std::size_t r = 0; r < rows; ++r)
          out.data[r * m + c] = acc.value(out.vertices[r]);
      }
    }
  } else {
    detail::SetAccumulator acc(g, x);
    for (std::size_t s = 1; s <= span_len; ++s) {
      acc.step();
      if (s % static_cast<std::size_t>(L) == 0) {
        std::size_t c = s / static_cast<std::size_t>(L);
        for (std::size_t r = 0; r < rows; ++r)
          out.data[r * m + c] = acc.value(out.vertices[r]);
      }
    }
  }
  return out;
}

struct GraphDescriptor {
  std::string kind;
  std::size_t n = 0;
  bool directed = false;
  bool weighted = false;
  std::size_t edges = 0;
};

struct EntropyResult {
  int m = 0;
  int L = 0;
  Mode mode = Mode::walk;
  double raw = 0.0;         // Shannon entropy of the pattern distribution, in nats
  double normalized = 0.0;  // raw / ln(m!)
  std::uint64_t tie_rows = 0;  // embedding rows containing an exact value tie
  std::uint64_t signal_hash = 0;
  PatternHistogram histogram{min_embedding_dim};
  GraphDescriptor graph;
};

inline std::pair<double, double> entropy_of_histogram(const PatternHistogram& h) {
  if (h.total() == 0) throw domain_error("cannot take the entropy of an empty histogram");
  const double total = static_cast<double>(h.total());
  double raw = 0.0;
  for (const auto& [idx, c] : h.nonzero()) {
    double p = static_cast<double>(c) / total;
    raw -= p * std::log(p);
  }
  if (raw < 0.0) raw = 0.0;  // single-pattern histograms can round to -0
  double norm = raw / std::log(static_cast<double>(h.num_patterns()));
  return {raw, norm};
}

// Bit-level hash of a signal, recorded in results so a stored entropy value
// can be matched to the exact input that produced it.
inline std::uint64_t signal_hash(std::span<const double> x) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (double v : x) h = fnv1a64_u64(std::bit_cast<std::uint64_t>(v), h);
  return h;
}

namespace detail {

inline EntropyResult entropy_of_embedding(const EmbeddingMatrix& emb,
                                          std::span<const double> x) {
  EntropyResult res;
  res.m = emb.m;
  res.L = emb.L;
  res.mode = emb.mode;
  res.histogram = PatternHistogram(emb.m);
  for (std::size_t r = 0; r < emb.num_rows(); ++r) {
    auto row = emb.row(r);
    res.histogram.add(pattern_of(row));
    if (window_has_tie(row)) ++res.tie_rows;
  }
  auto [raw, norm] = entropy_of_histogram(res.histogram);
  res.raw = raw;
  res.normalized = norm;
  res.signal_hash = signal_hash(x);
  return res;
}

}  // namespace detail

// Permutation entropy of a signal on a graph: embed, rank each row, count
// patterns, take Shannon entropy.
inline EntropyResult peg(const Graph& g, std::span<const double> x, int m, int L,
                         Mode mode = Mode::walk, const std::string& kind = "graph") {
  EmbeddingMatrix emb = embed(g, x, m, L, mode);
  EntropyResult res = detail::entropy_of_embedding(emb, x);
  res.graph = {kind, g.num_vertices(), g.directed(), g.weighted(), g.num_edges()};
  return res;
}

// Classical permutation entropy of a time series: one window per start
// index, (x_t, x_{t+L}, ..., x_{t+(m-1)L}).
inline EntropyResult pe_time_series(std::span<const double> x, int m, int L) {
  check_embedding_dim(m);
  check_delay(L);
  const std::size_t span_len = static_cast<std::size_t>(m - 1) * static_cast<std::size_t>(L);
  if (x.size() < span_len + 1)
    throw domain_error("series of length " + std::to_string(x.size()) +
                       " is shorter than one window of span " + std::to_string(span_len + 1));
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!std::isfinite(x[i]))
      throw domain_error("series has a non-finite value at position " + std::to_string(i + 1));
  EntropyResult res;
  res.m = m;
  res.L = L;
  res.mode = Mode::walk;
  res.histogram = PatternHistogram(m);
  std::vector<double> window(static_cast<std::size_t>(m));
  for (std::size_t t = 0; t + span_len < x.size(); ++t) {
    for (int c = 0; c < m; ++c)
      window[static_cast<std::size_t>(c)] = x[t + static_cast<std::size_t>(c) * L];
    res.histogram.add(pattern_of(window));
    if (window_has_tie(window)) ++res.tie_rows;
  }
  auto [raw, norm] = entropy_of_histogram(res.histogram);
  res.raw = raw;
  res.normalized = norm;
  res.signal_hash = signal_hash(x);
  res.graph = {"series", x.size(), false, false, 0};
  return res;
}

// Laplacian quadratic form, (1/2) sum over ordered adjacent pairs of
// w_ij (x_i - x_j)^2, i.e. one squared difference per undirected edge. Low
// values mean the signal varies slowly along edges. Asymmetric adjacency has
// no such symmetric form, so directed graphs are rejected.
inline double smoothness(const Graph& g, std::span<const double> x) {
  if (g.directed())
    throw config_error("smoothness is the symmetric Laplacian form; directed graphs "
                       "are not supported");
  if (x.size() != g.num_vertices())
    throw config_error("signal length " + std::to_string(x.size()) +
                       " does not match vertex count " + std::to_string(g.num_vertices()));
  double s = 0.0;
  for (vertex_t i = 0; i < g.num_vertices(); ++i) {
    auto nb = g.neighbors(i);
    auto w = g.weights(i);
    for (std::size_t t = 0; t < nb.size(); ++t) {
      double d = x[i] - x[nb[t]];
      s += (w.empty() ? 1.0 : w[t]) * d * d;
    }
  }
  return s / 2.0;
}

// Edge edits that provably leave the m=2, L=1 pattern histogram unchanged.
// Vertices split by how their value compares to their plain neighbor mean:
// `below` holds x_i < mean, `above` holds x_i > mean (exact equality joins
// neither side). A missing edge {a, b} with a below, b above and x_a < x_b
// can be added; an existing edge with x_b < x_a can be removed. Pairs come
// out with the smaller vertex id first.
struct SurgerySets {
  std::vector<vertex_t> below;
  std::vector<vertex_t> above;
  std::vector<std::pair<vertex_t, vertex_t>> addable;
  std::vector<std::pair<vertex_t, vertex_t>> removable;
};

inline SurgerySets edge_surgery_eligible(const Graph& g, std::span<const double> x) {
  if (g.directed() || g.weighted())
    throw config_error("edge surgery is defined for undirected unweighted graphs");
  if (x.size() != g.num_vertices())
    throw config_error("signal length " + std::to_string(x.size()) +
                       " does not match vertex count " + std::to_string(g.num_vertices()));
  if (g.has_isolated_vertex())
    throw domain_error("undirected graph has an isolated vertex, so its neighborhood "
                       "averages are undefined");

  const std::size_t n = g.num_vertices();
  // +1 below, -1 above, 0 exactly at the neighbor mean.
  std::vector<int> side(n, 0);
  SurgerySets out;
  for (vertex_t i = 0; i < n; ++i) {
    double mean = 0.0;
    auto nb = g.neighbors(i);
    for (vertex_t j : nb) mean += x[j];
    mean /= static_cast<double>(nb.size());
    if (x[i] < mean) {
      side[i] = 1;
      out.below.push_back(i);
    } else if (x[i] > mean) {
      side[i] = -1;
      out.above.push_back(i);
    }
  }
  for (vertex_t a : out.below)
    for (vertex_t b : out.above) {
      bool adjacent = g.has_edge(a, b);
      auto pair = std::minmax(a, b);
      if (!adjacent && x[a] < x[b])
        out.addable.emplace_back(pair.first, pair.second);
      else if (adjacent && x[b] < x[a])
        out.removable.emplace_back(pair.first, pair.second);
    }
  std::sort(out.addable.begin(), out.addable.end());
  std::sort(out.removable.begin(), out.removable.end());
  return out;
}

}
