#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gpe/errors.hpp"

namespace gpe {

using vertex_t = std::uint32_t;

// Finite graph in compressed sparse row form. Vertices are 0-based here;
// 1-based ids exist only at file boundaries. Undirected graphs store each
// edge in both row lists, so row i always holds the full neighborhood of i.
// An empty weight array means the graph is unweighted (every edge counts 1).
class Graph {
 public:
  Graph() = default;

  Graph(std::size_t n, bool directed, std::vector<std::size_t> row_ptr,
        std::vector<vertex_t> col, std::vector<double> w)
      : n_(n),
        directed_(directed),
        row_ptr_(std::move(row_ptr)),
        col_(std::move(col)),
        w_(std::move(w)) {}

  std::size_t num_vertices() const { return n_; }
  bool directed() const { return directed_; }
  bool weighted() const { return !w_.empty(); }

  // Arcs stored; for undirected graphs this is twice the edge count.
  std::size_t num_arcs() const { return col_.size(); }
  std::size_t num_edges() const { return directed_ ? col_.size() : col_.size() / 2; }

  std::span<const vertex_t> neighbors(vertex_t i) const {
    return {col_.data() + row_ptr_[i], col_.data() + row_ptr_[i + 1]};
  }

  // Weights parallel to neighbors(i); empty when unweighted.
  std::span<const double> weights(vertex_t i) const {
    if (w_.empty()) return {};
    return {w_.data() + row_ptr_[i], w_.data() + row_ptr_[i + 1]};
  }

  std::size_t out_degree(vertex_t i) const { return row_ptr_[i + 1] - row_ptr_[i]; }

  // Row sum of the weight matrix (out-degree when unweighted).
  double out_strength(vertex_t i) const {
    if (w_.empty()) return static_cast<double>(out_degree(i));
    double s = 0.0;
    for (double x : weights(i)) s += x;
    return s;
  }

  bool has_edge(vertex_t u, vertex_t v) const {
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  double edge_weight(vertex_t u, vertex_t v) const {
    auto nb = neighbors(u);
    auto it = std::lower_bound(nb.begin(), nb.end(), v);
    if (it == nb.end() || *it != v) return 0.0;
    if (w_.empty()) return 1.0;
    return w_[row_ptr_[u] + static_cast<std::size_t>(it - nb.begin())];
  }

  bool has_isolated_vertex() const {
    for (std::size_t i = 0; i < n_; ++i)
      if (row_ptr_[i + 1] == row_ptr_[i]) return true;
    return false;
  }

  const std::vector<std::size_t>& row_ptr() const { return row_ptr_; }
  const std::vector<vertex_t>& col() const { return col_; }
  const std::vector<double>& weight_values() const { return w_; }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.directed_ == b.directed_ && a.row_ptr_ == b.row_ptr_ &&
           a.col_ == b.col_ && a.w_ == b.w_;
  }

 private:
  std::size_t n_ = 0;
  bool directed_ = false;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<vertex_t> col_;
  std::vector<double> w_;
};

// Accumulates edges, validates them, and emits a Graph with sorted rows.
// Rejected at add time: self loops, out-of-range endpoints, weights that are
// not finite and positive (a zero weight would be indistinguishable from a
// missing edge downstream). Duplicate edges are rejected when building.
class GraphBuilder {
 public:
  GraphBuilder(std::size_t n, bool directed) : n_(n), directed_(directed) {}

  GraphBuilder& add_edge(vertex_t u, vertex_t v) { return push(u, v, 1.0, false); }

  GraphBuilder& add_edge(vertex_t u, vertex_t v, double w) { return push(u, v, w, true); }

  std::size_t num_added() const { return us_.size(); }

  Graph build() {
    const std::size_t arcs = directed_ ? us_.size() : 2 * us_.size();
    std::vector<std::size_t> row_ptr(n_ + 1, 0);
    for (std::size_t e = 0; e < us_.size(); ++e) {
      ++row_ptr[us_[e] + 1];
      if (!directed_) ++row_ptr[vs_[e] + 1];
    }
    for (std::size_t i = 0; i < n_; ++i) row_ptr[i + 1] += row_ptr[i];

    std::vector<vertex_t> col(arcs);
    std::vector<double> w(weighted_ ? arcs : 0);
    std::vector<std::size_t> cursor(row_ptr.begin(), row_ptr.end() - 1);
    auto place = [&](vertex_t a, vertex_t b, double x) {
      std::size_t slot = cursor[a]++;
      col[slot] = b;
      if (weighted_) w[slot] = x;
    };
    for (std::size_t e = 0; e < us_.size(); ++e) {
      place(us_[e], vs_[e], ws_[e]);
      if (!directed_) place(vs_[e], us_[e], ws_[e]);
    }

    // Sort each row by neighbor id, carrying weights along.
    std::vector<std::size_t> perm;
    for (std::size_t i = 0; i < n_; ++i) {
      std::size_t lo = row_ptr[i], hi = row_ptr[i + 1];
      perm.resize(hi - lo);
      for (std::size_t k = 0; k < perm.size(); ++k) perm[k] = lo + k;
      std::sort(perm.begin(), perm.end(),
                [&](std::size_t a, std::size_t b) { return col[a] < col[b]; });
      std::vector<vertex_t> c2(perm.size());
      std::vector<double> w2(weighted_ ? perm.size() : 0);
      for (std::size_t k = 0; k < perm.size(); ++k) {
        c2[k] = col[perm[k]];
        if (weighted_) w2[k] = w[perm[k]];
      }
      std::copy(c2.begin(), c2.end(), col.begin() + lo);
      if (weighted_) std::copy(w2.begin(), w2.end(), w.begin() + lo);
      for (std::size_t k = 1; k < c2.size(); ++k)
        if (c2[k] == c2[k - 1])
          throw config_error("duplicate edge " + std::to_string(i + 1) + " -> " +
                             std::to_string(c2[k] + 1) + " (vertex ids shown 1-based)");
    }

    return Graph(n_, directed_, std::move(row_ptr), std::move(col), std::move(w));
  }

 private:
  GraphBuilder& push(vertex_t u, vertex_t v, double w, bool weighted) {
    if (u >= n_ || v >= n_)
      throw config_error("edge endpoint out of range: " + std::to_string(u) + " -> " +
                         std::to_string(v) + " with n=" + std::to_string(n_));
    if (u == v) throw config_error("self loop at vertex " + std::to_string(u + 1) +
                                   " (vertex ids shown 1-based)");
    if (weighted && !(w > 0.0 && std::isfinite(w)))
      throw config_error("edge weight must be finite and positive, got " +
                         std::to_string(w));
    if (!us_.empty() && weighted != weighted_)
      throw config_error("cannot mix weighted and unweighted edges in one graph");
    weighted_ = weighted;
    us_.push_back(u);
    vs_.push_back(v);
    ws_.push_back(w);
    return *this;
  }

  std::size_t n_;
  bool directed_;
  bool weighted_ = false;
  std::vector<vertex_t> us_, vs_;
  std::vector<double> ws_;
};

// Copy of g with one undirected, unweighted edge added. Used by the edge
// surgery helpers and their tests.
inline Graph with_edge_added(const Graph& g, vertex_t u, vertex_t v) {
  if (g.directed() || g.weighted())
    throw config_error("edge surgery is defined for undirected unweighted graphs");
  if (g.has_edge(u, v)) throw config_error("edge already present");
  GraphBuilder b(g.num_vertices(), false);
  for (vertex_t i = 0; i < g.num_vertices(); ++i)
    for (vertex_t j : g.neighbors(i))
      if (i < j) b.add_edge(i, j);
  b.add_edge(u, v);
  return b.build();
}

inline Graph with_edge_removed(const Graph& g, vertex_t u, vertex_t v) {
  if (g.directed() || g.weighted())
    throw config_error("edge surgery is defined for undirected unweighted graphs");
  if (!g.has_edge(u, v)) throw config_error("edge not present");
  GraphBuilder b(g.num_vertices(), false);
  for (vertex_t i = 0; i < g.num_vertices(); ++i)
    for (vertex_t j : g.neighbors(i)) {
      if (i >= j) continue;
      if ((i == u && j == v) || (i == v && j == u)) continue;
      b.add_edge(i, j);
    }
  return b.build();
}

}
