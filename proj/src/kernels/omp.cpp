#include <algorithm>
#include <array>
#include <cstring>
#include <vector>

#if defined(__AVX512F__)
#include <immintrin.h>
#endif

#include "scs/kernels.hpp"
#include "sign_access.hpp"

namespace scs::kernels::omp {

namespace {

constexpr std::uint64_t kSignBit = 0x8000000000000000ULL;

inline double flip(double v, std::uint64_t negative) {
  std::uint64_t u;
  std::memcpy(&u, &v, sizeof u);
  u ^= negative << 63;
  std::memcpy(&v, &u, sizeof v);
  return v;
}

// Dot product of one sign row with x. Eight lane accumulators, reduced in a
// fixed order.
template <class Row>
double row_dot(const Row& row, const double* x, std::size_t cols) {
  const std::size_t full = cols / 64;
  double total = 0.0;
#if defined(__AVX512F__)
  const __m512i sign = _mm512_set1_epi64(static_cast<long long>(kSignBit));
  __m512d acc[8];
  for (auto& a : acc) a = _mm512_setzero_pd();
  for (std::size_t w = 0; w < full; ++w) {
    const std::uint64_t b = row.word(w);
    const double* xs = x + w * 64;
    for (int l = 0; l < 8; ++l) {
      const __mmask8 k = static_cast<__mmask8>(b >> (8 * l));
      __m512i v = _mm512_castpd_si512(_mm512_loadu_pd(xs + 8 * l));
      v = _mm512_mask_xor_epi64(v, k, v, sign);
      acc[l] = _mm512_add_pd(acc[l], _mm512_castsi512_pd(v));
    }
  }
  __m512d s = _mm512_add_pd(_mm512_add_pd(_mm512_add_pd(acc[0], acc[1]), _mm512_add_pd(acc[2], acc[3])),
                            _mm512_add_pd(_mm512_add_pd(acc[4], acc[5]), _mm512_add_pd(acc[6], acc[7])));
  alignas(64) double lanes[8];
  _mm512_store_pd(lanes, s);
  for (double v : lanes) total += v;
#else
  std::array<double, 8> acc{};
  for (std::size_t w = 0; w < full; ++w) {
    const std::uint64_t b = row.word(w);
    const double* xs = x + w * 64;
    for (int k = 0; k < 64; k += 8) {
      for (int l = 0; l < 8; ++l) acc[l] += flip(xs[k + l], (b >> (k + l)) & 1);
    }
  }
  for (double v : acc) total += v;
#endif
  if (full * 64 < cols) {
    const std::uint64_t b = row.word(full);
    for (std::size_t j = full * 64; j < cols; ++j) total += flip(x[j], (b >> (j % 64)) & 1);
  }
  return total;
}

template <class Signs>
void matvec(const Signs& s, std::span<const double> x, std::span<double> y) {
  detail::check_shapes(s, x.size(), s.cols, y.size(), s.rows);
  const auto rows = static_cast<std::ptrdiff_t>(s.rows);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    y[static_cast<std::size_t>(i)] = row_dot(detail::row_of(s, static_cast<std::size_t>(i)), x.data(), s.cols);
  }
}

// Columns are processed in blocks of kBlockWords * 64; each block owns its
// slice of x and accumulates every row in order.
constexpr std::size_t kBlockWords = 8;

template <class Signs>
void matvec_transposed(const Signs& s, std::span<const double> y, std::span<double> x) {
  detail::check_shapes(s, y.size(), s.rows, x.size(), s.cols);
  using Row = decltype(detail::row_of(s, 0));
  std::vector<Row> rows;
  rows.reserve(s.rows);
  for (std::size_t i = 0; i < s.rows; ++i) rows.push_back(detail::row_of(s, i));

  const std::size_t words = s.words_per_row();
  const auto blocks = static_cast<std::ptrdiff_t>((words + kBlockWords - 1) / kBlockWords);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t blk = 0; blk < blocks; ++blk) {
    const std::size_t w0 = static_cast<std::size_t>(blk) * kBlockWords;
    const std::size_t w1 = std::min(words, w0 + kBlockWords);
    const std::size_t c0 = w0 * 64;
    const std::size_t c1 = std::min(s.cols, w1 * 64);
    alignas(64) std::array<double, kBlockWords * 64> acc{};
    for (std::size_t i = 0; i < s.rows; ++i) {
      const double yi = y[i];
      const Row& row = rows[i];
      if (c1 - c0 == kBlockWords * 64) {
#if defined(__AVX512F__)
        const __m512i v = _mm512_castpd_si512(_mm512_set1_pd(yi));
        const __m512i sign = _mm512_set1_epi64(static_cast<long long>(kSignBit));
        for (std::size_t w = 0; w < kBlockWords; ++w) {
          const std::uint64_t b = row.word(w0 + w);
          for (int l = 0; l < 8; ++l) {
            const __mmask8 k = static_cast<__mmask8>(b >> (8 * l));
            const __m512d t = _mm512_castsi512_pd(_mm512_mask_xor_epi64(v, k, v, sign));
            double* a = acc.data() + w * 64 + 8 * l;
            _mm512_store_pd(a, _mm512_add_pd(_mm512_load_pd(a), t));
          }
        }
#else
        for (std::size_t w = 0; w < kBlockWords; ++w) {
          const std::uint64_t b = row.word(w0 + w);
          double* a = acc.data() + w * 64;
          for (int k = 0; k < 64; ++k) a[k] += flip(yi, (b >> k) & 1);
        }
#endif
      } else {
        for (std::size_t j = c0; j < c1; ++j) {
          acc[j - c0] += flip(yi, (row.word(j / 64) >> (j % 64)) & 1);
        }
      }
    }
    std::copy(acc.begin(), acc.begin() + static_cast<std::ptrdiff_t>(c1 - c0), x.begin() + static_cast<std::ptrdiff_t>(c0));
  }
}

}  // namespace

void sign_matvec(const StreamedSigns& s, std::span<const double> x, std::span<double> y) { matvec(s, x, y); }
void sign_matvec(const PackedSigns& s, std::span<const double> x, std::span<double> y) { matvec(s, x, y); }
void sign_matvec_transposed(const StreamedSigns& s, std::span<const double> y, std::span<double> x) {
  matvec_transposed(s, y, x);
}
void sign_matvec_transposed(const PackedSigns& s, std::span<const double> y, std::span<double> x) {
  matvec_transposed(s, y, x);
}

void gradient(std::span<const double> img, int width, int height, std::span<double> gx, std::span<double> gy) {
#pragma omp parallel for schedule(static)
  for (int r = 0; r < height; ++r) {
    const std::size_t base = static_cast<std::size_t>(r) * width;
    for (int c = 0; c + 1 < width; ++c) gx[base + c] = img[base + c + 1] - img[base + c];
    gx[base + width - 1] = 0.0;
    if (r + 1 < height) {
      for (int c = 0; c < width; ++c) gy[base + c] = img[base + width + c] - img[base + c];
    } else {
      std::fill_n(gy.begin() + static_cast<std::ptrdiff_t>(base), width, 0.0);
    }
  }
}

void gradient_adjoint(std::span<const double> gx, std::span<const double> gy, int width, int height,
                      std::span<double> out) {
#pragma omp parallel for schedule(static)
  for (int r = 0; r < height; ++r) {
    const std::size_t base = static_cast<std::size_t>(r) * width;
    for (int c = 0; c < width; ++c) {
      const std::size_t i = base + c;
      double v = 0.0;
      if (c + 1 < width) v -= gx[i];
      if (c > 0) v += gx[i - 1];
      if (r + 1 < height) v -= gy[i];
      if (r > 0) v += gy[i - width];
      out[i] = v;
    }
  }
}

}  // namespace scs::kernels::omp
