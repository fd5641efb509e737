#pragma once

// Uniform row access for the two sign-matrix representations.

#include <stdexcept>

#include "scs/kernels.hpp"

namespace scs::kernels::detail {

struct StreamedRow {
  std::uint64_t key;
  std::uint64_t word(std::size_t w) const { return substream_word(key, w); }
};

struct PackedRow {
  const std::uint64_t* bits;
  std::uint64_t word(std::size_t w) const { return bits[w]; }
};

inline StreamedRow row_of(const StreamedSigns& s, std::size_t row) { return {substream_seed(s.seed, row)}; }
inline PackedRow row_of(const PackedSigns& s, std::size_t row) { return {s.bits.data() + row * s.words_per_row()}; }

template <class Signs>
void check_shapes(const Signs& s, std::size_t in, std::size_t in_expected, std::size_t out, std::size_t out_expected) {
  if (in != in_expected || out != out_expected) {
    throw std::invalid_argument("sign matrix kernel: vector length does not match matrix shape");
  }
  (void)s;
}

}  // namespace scs::kernels::detail
