#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "gpe/errors.hpp"
#include "gpe/rng.hpp"

namespace gpe {

// Dense row-major matrix; doubles as a 2D signal over a grid graph whose
// vertex (r, c) is r*cols + c, so data already lies in vertex order.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

// Logistic map x_{n+1} = r x_n (1 - x_n). Returns n values starting with the
// first iterate after x0 (and after burn_in discarded iterates, if any).
inline std::vector<double> logistic_map(double r, double x0, std::size_t n,
                                        std::size_t burn_in = 0) {
  if (n == 0) throw config_error("logistic map length must be positive");
  if (!(r >= 0.0 && r <= 4.0)) throw config_error("logistic parameter r must be in [0, 4]");
  if (!(x0 > 0.0 && x0 < 1.0)) throw config_error("logistic x0 must be in (0, 1)");
  std::vector<double> out;
  out.reserve(n);
  double x = x0;
  for (std::size_t i = 0; i < burn_in; ++i) x = r * x * (1.0 - x);
  for (std::size_t i = 0; i < n; ++i) {
    x = r * x * (1.0 - x);
    out.push_back(x);
  }
  return out;
}

// Deterministic texture blended cellwise with noise. Each cell (i, j),
// 1-based, starts from sin(2 pi i / 12) + sin(2 pi j / 12) and is replaced by
// a uniform [-sqrt(3), sqrt(3)] draw with probability p. Cells are visited in
// row-major order; both the Bernoulli coin and the uniform draw are consumed
// for every cell (coin first), so the stream position never depends on
// earlier outcomes.
inline Matrix mix2d(std::size_t rows, std::size_t cols, double p, Rng& rng) {
  if (rows == 0 || cols == 0) throw config_error("mix2d dimensions must be positive");
  if (!(p >= 0.0 && p <= 1.0)) throw config_error("mix2d noise probability must be in [0, 1]");
  constexpr double two_pi = 2.0 * 3.14159265358979323846;
  const double half_width = std::sqrt(3.0);
  Matrix m{rows, cols, std::vector<double>(rows * cols)};
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      bool z = rng.bernoulli(p);
      double y = rng.uniform(-half_width, half_width);
      double x = std::sin(two_pi * static_cast<double>(i + 1) / 12.0) +
                 std::sin(two_pi * static_cast<double>(j + 1) / 12.0);
      m.at(i, j) = z ? y : x;
    }
  return m;
}

inline Matrix mix2d(std::size_t rows, std::size_t cols, double p, std::uint64_t seed) {
  Rng rng(seed);
  return mix2d(rows, cols, p, rng);
}

inline std::vector<double> gaussian_noise(std::size_t n, Rng& rng) {
  if (n == 0) throw config_error("noise length must be positive");
  std::vector<double> out(n);
  for (double& v : out) v = rng.normal();
  return out;
}

inline std::vector<double> gaussian_noise(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  return gaussian_noise(n, rng);
}

}
