#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "gpe/errors.hpp"
#include "gpe/graph.hpp"
#include "gpe/rng.hpp"

namespace gpe {

// Named graph families. All of them number vertices 0-based internally.

inline Graph path_graph(std::size_t n, bool directed = false) {
  if (n < 2) throw config_error("path graph needs at least 2 vertices");
  GraphBuilder b(n, directed);
  for (vertex_t i = 0; i + 1 < n; ++i) b.add_edge(i, i + 1);
  return b.build();
}

inline Graph cycle_graph(std::size_t n) {
  if (n < 3) throw config_error("cycle graph needs at least 3 vertices");
  GraphBuilder b(n, false);
  for (vertex_t i = 0; i + 1 < n; ++i) b.add_edge(i, i + 1);
  b.add_edge(static_cast<vertex_t>(n - 1), 0);
  return b.build();
}

inline Graph complete_graph(std::size_t n) {
  if (n < 2) throw config_error("complete graph needs at least 2 vertices");
  GraphBuilder b(n, false);
  for (vertex_t i = 0; i < n; ++i)
    for (vertex_t j = i + 1; j < n; ++j) b.add_edge(i, j);
  return b.build();
}

// Star with the hub at vertex 0.
inline Graph star_graph(std::size_t n) {
  if (n < 2) throw config_error("star graph needs at least 2 vertices");
  GraphBuilder b(n, false);
  for (vertex_t i = 1; i < n; ++i) b.add_edge(0, i);
  return b.build();
}

// Complete bipartite graph; side A is vertices 0..n1-1, side B the rest.
inline Graph complete_bipartite_graph(std::size_t n1, std::size_t n2) {
  if (n1 == 0 || n2 == 0) throw config_error("bipartite sides must be nonempty");
  // Every row is a contiguous ascending range, so the adjacency is emitted
  // directly. Routing the n1*n2 edges through the builder's per-row sort is
  // what a sweep over thousands of splits ends up spending its time on.
  const std::size_t n = n1 + n2;
  std::vector<std::size_t> row_ptr(n + 1);
  for (std::size_t i = 0; i <= n; ++i)
    row_ptr[i] = i <= n1 ? i * n2 : n1 * n2 + (i - n1) * n1;
  std::vector<vertex_t> col(2 * n1 * n2);
  std::size_t s = 0;
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n2; ++j) col[s++] = static_cast<vertex_t>(n1 + j);
  for (std::size_t j = 0; j < n2; ++j)
    for (std::size_t i = 0; i < n1; ++i) col[s++] = static_cast<vertex_t>(i);
  return Graph(n, false, std::move(row_ptr), std::move(col), {});
}

// Two-dimensional grid with king-move adjacency, vertex (r, c) = r*cols + c.
// The directed form emits the four forward arcs east, south, southeast and
// southwest, which orient every king edge from the earlier cell in raster
// order toward the later one. The undirected form is the same adjacency with
// arc directions dropped.
inline Graph grid_graph(std::size_t rows, std::size_t cols, bool directed = true) {
  if (rows == 0 || cols == 0) throw config_error("grid dimensions must be positive");
  if (rows * cols < 2) throw config_error("grid needs at least 2 vertices");
  GraphBuilder b(rows * cols, directed);
  auto id = [cols](std::size_t r, std::size_t c) {
    return static_cast<vertex_t>(r * cols + c);
  };
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      if (c + 1 < cols) b.add_edge(id(r, c), id(r, c + 1));            // east
      if (r + 1 < rows) b.add_edge(id(r, c), id(r + 1, c));            // south
      if (r + 1 < rows && c + 1 < cols) b.add_edge(id(r, c), id(r + 1, c + 1));
      if (r + 1 < rows && c >= 1) b.add_edge(id(r, c), id(r + 1, c - 1));
    }
  return b.build();
}

// G(n, p): each unordered pair {i, j} with i < j gets an edge independently
// with probability p. Pairs are visited in a fixed order ((0,1), (0,2), ...,
// (n-2,n-1)) so a seed pins the graph exactly.
inline Graph erdos_renyi_graph(std::size_t n, double p, Rng& rng) {
  if (n < 2) throw config_error("random graph needs at least 2 vertices");
  if (!(p >= 0.0 && p <= 1.0)) throw config_error("edge probability must be in [0, 1]");
  GraphBuilder b(n, false);
  for (vertex_t i = 0; i < n; ++i)
    for (vertex_t j = i + 1; j < n; ++j)
      if (rng.bernoulli(p)) b.add_edge(i, j);
  return b.build();
}

inline Graph erdos_renyi_graph(std::size_t n, double p, std::uint64_t seed) {
  Rng rng(seed);
  return erdos_renyi_graph(n, p, rng);
}

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

// Proximity graph over planar points: vertices i and j are joined when their
// distance d satisfies 0 < d <= sigma2, with weight exp(-d^2 / (2 sigma1^2)).
// Coincident points stay disconnected since a zero distance would make the
// pair a self-similarity rather than a neighborhood relation.
inline Graph gaussian_kernel_graph(const std::vector<Point2>& pts, double sigma1,
                                   double sigma2) {
  if (pts.size() < 2) throw config_error("kernel graph needs at least 2 points");
  if (!(sigma1 > 0.0)) throw config_error("sigma1 must be positive");
  if (!(sigma2 > 0.0)) throw config_error("sigma2 must be positive");
  GraphBuilder b(pts.size(), false);
  for (vertex_t i = 0; i < pts.size(); ++i)
    for (vertex_t j = i + 1; j < pts.size(); ++j) {
      double dx = pts[i].x - pts[j].x;
      double dy = pts[i].y - pts[j].y;
      double d = std::sqrt(dx * dx + dy * dy);
      if (d > 0.0 && d <= sigma2)
        b.add_edge(i, j, std::exp(-(d * d) / (2.0 * sigma1 * sigma1)));
    }
  return b.build();
}

}
