#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace scs {

/// True when v is a positive power of two.
constexpr bool is_pow2(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

/// Grayscale raster with row-major real-valued pixels, nominal range [0, 255].
/// Width and height are powers of two.
class Image {
 public:
  Image() = default;
  Image(int width, int height);  // zero-filled
  Image(int width, int height, std::vector<double> pixels);

  static Image constant(int width, int height, double value);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return pixels_.size(); }
  bool empty() const { return pixels_.empty(); }

  double operator()(int x, int y) const { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
  double& operator()(int x, int y) { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }

  std::span<const double> pixels() const { return pixels_; }
  std::span<double> pixels() { return pixels_; }
  std::vector<double> release() && { return std::move(pixels_); }

  bool operator==(const Image&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> pixels_;
};

/// Reads a binary (P5) PGM with maxval 255.
Image load_pgm(const std::filesystem::path& path);

/// Writes a binary PGM; pixels are clamped to [0, 255] and rounded half-up.
void save_pgm(const Image& img, const std::filesystem::path& path);

/// In-memory variants of the PGM codec.
Image decode_pgm(std::span<const unsigned char> bytes);
std::vector<unsigned char> encode_pgm(const Image& img);

/// Clamp to [0, 255] then round half-up; the value save_pgm stores.
unsigned char to_byte(double v);

/// Mean over s x s blocks.
Image downsample_block(const Image& img, int factor);

/// Bilinear upsampling by an integer factor. Output sample centers map to
/// input coordinate (u + 0.5) / s - 0.5, clamped to the valid range.
Image upsample_bilinear(const Image& img, int factor);

/// 10 log10(255^2 / MSE); +infinity for identical images.
double psnr(const Image& reference, const Image& test);
double mse(const Image& a, const Image& b);

}  // namespace scs
