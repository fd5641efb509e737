#pragma once

// Matrix-vector kernels for +/-1 sign matrices and the TV finite-difference
// operators. Each kernel exists twice: `serial` is the straightforward
// reference kept for testing, `omp` is the OpenMP/SIMD version used by the
// library. Both use a fixed per-output summation order, so `omp` results do
// not depend on the thread count.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "scs/rng.hpp"

namespace scs {

/// Sign matrix whose rows are generated on demand. Entry (i, j) is bit j % 64
/// of substream_word(substream_seed(seed, i), j / 64); a set bit means -1.
struct StreamedSigns {
  std::uint64_t seed = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;

  std::size_t words_per_row() const { return (cols + 63) / 64; }
  std::uint64_t word(std::size_t row, std::size_t w) const {
    return substream_word(substream_seed(seed, row), w);
  }
};

/// Sign matrix held as packed bits, row-major, with the same bit convention.
struct PackedSigns {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint64_t> bits;  // rows * words_per_row()

  PackedSigns() = default;
  PackedSigns(std::size_t r, std::size_t c) : rows(r), cols(c), bits(r * words_per_row(), 0) {}

  std::size_t words_per_row() const { return (cols + 63) / 64; }
  std::uint64_t word(std::size_t row, std::size_t w) const { return bits[row * words_per_row() + w]; }
  void set_negative(std::size_t row, std::size_t col) {
    bits[row * words_per_row() + col / 64] |= std::uint64_t{1} << (col % 64);
  }
  int entry(std::size_t row, std::size_t col) const {
    return (word(row, col / 64) >> (col % 64)) & 1 ? -1 : 1;
  }
};

/// Sign entry of a streamed matrix, for oracles and tests.
inline int sign_entry(const StreamedSigns& s, std::size_t row, std::size_t col) {
  return (s.word(row, col / 64) >> (col % 64)) & 1 ? -1 : 1;
}

namespace kernels {

namespace serial {
void sign_matvec(const StreamedSigns& s, std::span<const double> x, std::span<double> y);
void sign_matvec(const PackedSigns& s, std::span<const double> x, std::span<double> y);
void sign_matvec_transposed(const StreamedSigns& s, std::span<const double> y, std::span<double> x);
void sign_matvec_transposed(const PackedSigns& s, std::span<const double> y, std::span<double> x);

/// Forward differences with zero difference past the last row/column.
void gradient(std::span<const double> img, int width, int height, std::span<double> gx, std::span<double> gy);
/// Adjoint of `gradient`: out = Dx^T gx + Dy^T gy.
void gradient_adjoint(std::span<const double> gx, std::span<const double> gy, int width, int height,
                      std::span<double> out);
}  // namespace serial

namespace omp {
void sign_matvec(const StreamedSigns& s, std::span<const double> x, std::span<double> y);
void sign_matvec(const PackedSigns& s, std::span<const double> x, std::span<double> y);
void sign_matvec_transposed(const StreamedSigns& s, std::span<const double> y, std::span<double> x);
void sign_matvec_transposed(const PackedSigns& s, std::span<const double> y, std::span<double> x);

void gradient(std::span<const double> img, int width, int height, std::span<double> gx, std::span<double> gy);
void gradient_adjoint(std::span<const double> gx, std::span<const double> gy, int width, int height,
                      std::span<double> out);
}  // namespace omp

}  // namespace kernels
}  // namespace scs
