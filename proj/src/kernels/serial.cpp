#include "scs/kernels.hpp"
#include "sign_access.hpp"

#include <algorithm>

namespace scs::kernels::serial {

namespace {

template <class Signs>
void matvec(const Signs& s, std::span<const double> x, std::span<double> y) {
  detail::check_shapes(s, x.size(), s.cols, y.size(), s.rows);
  for (std::size_t i = 0; i < s.rows; ++i) {
    const auto row = detail::row_of(s, i);
    double acc = 0.0;
    for (std::size_t j = 0; j < s.cols; ++j) {
      const bool negative = (row.word(j / 64) >> (j % 64)) & 1;
      acc += negative ? -x[j] : x[j];
    }
    y[i] = acc;
  }
}

template <class Signs>
void matvec_transposed(const Signs& s, std::span<const double> y, std::span<double> x) {
  detail::check_shapes(s, y.size(), s.rows, x.size(), s.cols);
  std::fill(x.begin(), x.end(), 0.0);
  for (std::size_t i = 0; i < s.rows; ++i) {
    const auto row = detail::row_of(s, i);
    for (std::size_t j = 0; j < s.cols; ++j) {
      const bool negative = (row.word(j / 64) >> (j % 64)) & 1;
      x[j] += negative ? -y[i] : y[i];
    }
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
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * width + c;
      gx[i] = c + 1 < width ? img[i + 1] - img[i] : 0.0;
      gy[i] = r + 1 < height ? img[i + width] - img[i] : 0.0;
    }
  }
}

void gradient_adjoint(std::span<const double> gx, std::span<const double> gy, int width, int height,
                      std::span<double> out) {
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * width + c;
      double v = 0.0;
      if (c + 1 < width) v -= gx[i];
      if (c > 0) v += gx[i - 1];
      if (r + 1 < height) v -= gy[i];
      if (r > 0) v += gy[i - width];
      out[i] = v;
    }
  }
}

}  // namespace scs::kernels::serial
