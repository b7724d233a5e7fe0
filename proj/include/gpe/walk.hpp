#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gpe/errors.hpp"
#include "gpe/graph.hpp"

namespace gpe {

// How values over a k-step neighborhood are combined into one number.
//
//   walk: average weighted by walk multiplicity, (W^k x)_i / (W^k 1)_i.
//         The default; respects edge weights and how strongly a vertex is
//         connected into the neighborhood.
//   set:  plain mean of x over the distinct endpoints reachable in exactly
//         k steps, ignoring multiplicities and weights.
//
// The two coincide for k <= 1 on unweighted graphs and diverge from k = 2 on,
// where walk counts weigh repeated routes.
enum class Mode { walk, set };

inline const char* mode_name(Mode m) { return m == Mode::walk ? "walk" : "set"; }

inline Mode parse_mode(const std::string& s) {
  if (s == "walk") return Mode::walk;
  if (s == "set") return Mode::set;
  throw config_error("unknown aggregation mode '" + s + "' (expected walk or set)");
}

// reach[i] after s steps: does any walk of exactly s edges start at i?
// For undirected graphs without isolated vertices this is always true; for
// directed graphs it shrinks as s grows and defines which vertices can be
// embedded at all.
inline std::vector<char> reachable_after(const Graph& g, std::size_t steps) {
  const std::size_t n = g.num_vertices();
  std::vector<char> reach(n, 1), next(n);
  for (std::size_t s = 0; s < steps; ++s) {
    bool any = false;
    for (vertex_t i = 0; i < n; ++i) {
      char r = 0;
      for (vertex_t j : g.neighbors(i))
        if (reach[j]) {
          r = 1;
          break;
        }
      next[i] = r;
      any = any || r;
    }
    reach.swap(next);
    if (!any) break;  // all further powers stay empty
  }
  return reach;
}

namespace detail {

// Iterates v <- W v and r <- W r one step at a time, where r starts at the
// all-ones vector, so value(i) = (W^k x)_i / (W^k 1)_i at every step. Both
// vectors are rescaled together by powers of two once r grows past 2^512;
// powers of two are exact in binary floating point, so the quotients are the
// same bits the unscaled computation would produce. Emptiness of the k-step
// neighborhood is tracked with a boolean recurrence rather than by testing
// r == 0, which keeps "no walks" distinct from "weights underflowed".
class WalkAccumulator {
 public:
  WalkAccumulator(const Graph& g, std::span<const double> x)
      : g_(g),
        v_(x.begin(), x.end()),
        r_(g.num_vertices(), 1.0),
        nonempty_(g.num_vertices(), 1),
        vbuf_(g.num_vertices()),
        rbuf_(g.num_vertices()),
        nbuf_(g.num_vertices()) {}

  std::size_t k() const { return k_; }
  const std::vector<char>& nonempty() const { return nonempty_; }

  double value(vertex_t i) const {
    if (!nonempty_[i])
      throw domain_error("vertex " + std::to_string(i + 1) + " has no walk of length " +
                         std::to_string(k_));
    if (r_[i] == 0.0)
      throw domain_error("walk weights underflowed at vertex " + std::to_string(i + 1) +
                         ", step " + std::to_string(k_));
    return v_[i] / r_[i];
  }

  void step() {
    const std::size_t n = g_.num_vertices();
    const bool weighted = g_.weighted();
    double rmax = 0.0;
    for (vertex_t i = 0; i < n; ++i) {
      double sv = 0.0, sr = 0.0;
      char ne = 0;
      auto nb = g_.neighbors(i);
      if (weighted) {
        auto w = g_.weights(i);
        for (std::size_t t = 0; t < nb.size(); ++t) {
          sv += w[t] * v_[nb[t]];
          sr += w[t] * r_[nb[t]];
          ne = ne | nonempty_[nb[t]];
        }
      } else {
        for (vertex_t j : nb) {
          sv += v_[j];
          sr += r_[j];
          ne = ne | nonempty_[j];
        }
      }
      vbuf_[i] = sv;
      rbuf_[i] = sr;
      nbuf_[i] = ne;
      if (sr > rmax) rmax = sr;
    }
    v_.swap(vbuf_);
    r_.swap(rbuf_);
    nonempty_.swap(nbuf_);
    ++k_;
    if (!std::isfinite(rmax))
      throw domain_error("walk sums overflowed at step " + std::to_string(k_) +
                         "; edge weights or signal values are too large");
    // Pull the largest row sum back toward 1 once it drifts past 2^512 in
    // either direction.
    // Power-of-two scaling is exact, so the v/r quotients are unchanged;
    // only rows whose magnitude differs from rmax by more than the double
    // range can still underflow, and value() reports those honestly.
    if (rmax > 0x1.0p512 || (rmax > 0.0 && rmax < 0x1.0p-512)) {
      int e = std::ilogb(rmax);
      for (std::size_t i = 0; i < n; ++i) {
        v_[i] = std::ldexp(v_[i], -e);
        r_[i] = std::ldexp(r_[i], -e);
      }
    }
  }

 private:
  const Graph& g_;
  std::vector<double> v_, r_;
  std::vector<char> nonempty_;
  std::vector<double> vbuf_, rbuf_;
  std::vector<char> nbuf_;
  std::size_t k_ = 0;
};

// Tracks the exact endpoint set of length-k walks per start vertex as a
// bitset row. Memory is n^2 bits twice over, so this path is capped; it backs
// the set aggregation mode and exact neighborhood sizes, not the default
// pipeline.
class SetAccumulator {
 public:
  static constexpr std::size_t max_vertices = 32768;

  SetAccumulator(const Graph& g, std::span<const double> x)
      : g_(g), x_(x.begin(), x.end()), n_(g.num_vertices()), words_((n_ + 63) / 64) {
    if (n_ > max_vertices)
      throw config_error("set mode tracks explicit neighborhoods and supports up to " +
                         std::to_string(max_vertices) + " vertices");
    rows_.assign(n_ * words_, 0);
    buf_.assign(n_ * words_, 0);
    for (std::size_t i = 0; i < n_; ++i) rows_[i * words_ + i / 64] = 1ull << (i % 64);
  }

  std::size_t k() const { return k_; }

  void step() {
    std::fill(buf_.begin(), buf_.end(), 0);
    for (vertex_t i = 0; i < n_; ++i) {
      std::uint64_t* dst = buf_.data() + i * words_;
      for (vertex_t j : g_.neighbors(i)) {
        const std::uint64_t* src = rows_.data() + j * words_;
        for (std::size_t w = 0; w < words_; ++w) dst[w] |= src[w];
      }
    }
    rows_.swap(buf_);
    ++k_;
  }

  std::uint64_t support_size(vertex_t i) const {
    const std::uint64_t* row = rows_.data() + i * words_;
    std::uint64_t c = 0;
    for (std::size_t w = 0; w < words_; ++w) c += std::popcount(row[w]);
    return c;
  }

  bool nonempty(vertex_t i) const { return support_size(i) != 0; }

  double value(vertex_t i) const {
    const std::uint64_t* row = rows_.data() + i * words_;
    double sum = 0.0;
    std::uint64_t count = 0;
    for (std::size_t w = 0; w < words_; ++w) {
      std::uint64_t bits = row[w];
      while (bits) {
        int b = std::countr_zero(bits);
        bits &= bits - 1;
        sum += x_[w * 64 + static_cast<std::size_t>(b)];
        ++count;
      }
    }
    if (count == 0)
      throw domain_error("vertex " + std::to_string(i + 1) + " has no walk of length " +
                         std::to_string(k_));
    return sum / static_cast<double>(count);
  }

 private:
  const Graph& g_;
  std::vector<double> x_;
  std::size_t n_, words_;
  std::vector<std::uint64_t> rows_, buf_;
  std::size_t k_ = 0;
};

}  // namespace detail

// One-shot k-step aggregation for every vertex. value[i] is defined only
// where nonempty[i]; support_size[i] is the exact number of distinct
// endpoints of length-k walks from i (computed for both modes, which makes
// this entry point quadratic in memory for k >= 2; the entropy pipeline uses
// the leaner incremental path instead).
struct WalkAggregate {
  std::size_t k = 0;
  Mode mode = Mode::walk;
  std::vector<double> value;
  std::vector<char> nonempty;
  std::vector<std::uint64_t> support_size;
};

inline WalkAggregate walk_aggregate(const Graph& g, std::span<const double> x,
                                    std::size_t k, Mode mode = Mode::walk) {
  const std::size_t n = g.num_vertices();
  if (x.size() != n)
    throw config_error("signal length " + std::to_string(x.size()) +
                       " does not match vertex count " + std::to_string(n));
  if (g.weighted() && mode == Mode::set)
    throw config_error("set mode ignores weights; use walk mode on weighted graphs");

  WalkAggregate out;
  out.k = k;
  out.mode = mode;
  out.value.assign(n, 0.0);
  out.nonempty.assign(n, 0);
  out.support_size.assign(n, 0);

  detail::SetAccumulator sets(g, x);
  for (std::size_t s = 0; s < k; ++s) sets.step();
  for (vertex_t i = 0; i < n; ++i) out.support_size[i] = sets.support_size(i);

  if (mode == Mode::set) {
    for (vertex_t i = 0; i < n; ++i) {
      out.nonempty[i] = sets.nonempty(i) ? 1 : 0;
      if (out.nonempty[i]) out.value[i] = sets.value(i);
    }
    return out;
  }

  detail::WalkAccumulator walks(g, x);
  for (std::size_t s = 0; s < k; ++s) walks.step();
  for (vertex_t i = 0; i < n; ++i) {
    out.nonempty[i] = walks.nonempty()[i];
    if (out.nonempty[i]) out.value[i] = walks.value(i);
  }
  return out;
}

}
