#pragma once

// Dense reference constructions used to check the matrix-free code paths.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "scs/image.hpp"
#include "scs/rng.hpp"
#include "scs/sensing.hpp"

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

inline Matrix zeros(std::size_t r, std::size_t c) { return Matrix(r, std::vector<double>(c, 0.0)); }

// Sylvester construction by repeated Kronecker product with [[1, 1], [1, -1]].
inline Matrix sylvester(std::size_t m) {
  Matrix h{{1.0}};
  while (h.size() < m) {
    const std::size_t k = h.size();
    Matrix next = zeros(2 * k, 2 * k);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        next[i][j] = h[i][j];
        next[i][j + k] = h[i][j];
        next[i + k][j] = h[i][j];
        next[i + k][j + k] = -h[i][j];
      }
    }
    h = std::move(next);
  }
  return h;
}

// Column sign c of the signed ordering, straight from the generator primitives.
inline int column_sign(std::uint64_t seed, std::size_t c) {
  const std::uint64_t key = scs::substream_seed(seed, std::uint64_t{1} << 63);
  return (scs::substream_word(key, c / 64) >> (c % 64)) & 1 ? -1 : 1;
}

inline Matrix hadamard(const scs::SensingConfig& c) {
  Matrix h = sylvester(c.m_base);
  if (c.ordering == scs::HadamardOrdering::signed_sylvester) {
    for (auto& row : h) {
      for (std::size_t j = 0; j < row.size(); ++j) row[j] *= column_sign(c.seed_base, j);
    }
  }
  return h;
}

// s_pre x s_pre block-sum operator D from base pixels (row-major) to preview pixels (row-major).
inline Matrix block_sum(const scs::SensingConfig& c) {
  Matrix d = zeros(c.m_base, c.n_base());
  const int s = c.s_pre();
  for (int r = 0; r < c.base_height; ++r) {
    for (int col = 0; col < c.base_width; ++col) {
      const std::size_t p = static_cast<std::size_t>(r / s) * c.preview_width + col / s;
      d[p][static_cast<std::size_t>(r) * c.base_width + col] = 1.0;
    }
  }
  return d;
}

inline Matrix multiply(const Matrix& a, const Matrix& b) {
  Matrix out = zeros(a.size(), b[0].size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (a[i][k] == 0.0) continue;
      for (std::size_t j = 0; j < b[0].size(); ++j) out[i][j] += a[i][k] * b[k][j];
    }
  }
  return out;
}

inline Matrix transpose(const Matrix& a) {
  Matrix t = zeros(a[0].size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a[0].size(); ++j) t[j][i] = a[i][j];
  }
  return t;
}

// Phi_B = H D + F with F read entry by entry from the operator.
inline Matrix dss(const scs::DssOperator& op) {
  const scs::SensingConfig& c = op.config();
  Matrix phi = multiply(hadamard(c), block_sum(c));
  for (std::size_t i = 0; i < c.m_base; ++i) {
    for (std::size_t j = 0; j < c.n_base(); ++j) phi[i][j] += op.f_entry(i, j);
  }
  return phi;
}

inline Matrix rademacher(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Matrix a = zeros(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const std::uint64_t key = scs::substream_seed(seed, i);
    for (std::size_t j = 0; j < cols; ++j) a[i][j] = (scs::substream_word(key, j / 64) >> (j % 64)) & 1 ? -1.0 : 1.0;
  }
  return a;
}

inline std::vector<double> apply(const Matrix& a, const std::vector<double>& x) {
  std::vector<double> y(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) s += a[i][j] * x[j];
    y[i] = s;
  }
  return y;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline std::vector<double> gaussian(std::size_t n, double sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, sigma);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

inline std::vector<double> uniform(std::size_t n, double lo, double hi, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

// Four constant rectangles on a 32 x 32 grid.
inline scs::Image phantom32() {
  scs::Image img(32, 32);
  for (int y = 0; y < 32; ++y) {
    for (int x = 0; x < 32; ++x) {
      double v = 40.0;
      if (x >= 4 && x < 20 && y >= 6 && y < 18) v = 200.0;
      if (x >= 14 && x < 28 && y >= 20 && y < 29) v = 120.0;
      if (x >= 22 && x < 30 && y >= 2 && y < 12) v = 90.0;
      img(x, y) = v;
    }
  }
  return img;
}

// Per-layer MSE of a dequantized vector.
inline double mse(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s / static_cast<double>(a.size());
}

inline std::string data_path(const char* name) { return std::string(SCS_DATA_DIR) + "/" + name; }

}  // namespace oracle
