#include "scs/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <stdexcept>
#include <string>

namespace scs {

namespace {

void check_dims(int width, int height) {
  if (width <= 0 || height <= 0) {
    throw std::invalid_argument("image dimensions must be positive");
  }
  if (!is_pow2(static_cast<std::size_t>(width)) || !is_pow2(static_cast<std::size_t>(height))) {
    throw std::invalid_argument("image dimensions must be powers of two, got " + std::to_string(width) +
                                "x" + std::to_string(height));
  }
}

void check_factor(int factor) {
  if (factor <= 0 || !is_pow2(static_cast<std::size_t>(factor))) {
    throw std::invalid_argument("resampling factor must be a power of two");
  }
}

// Cursor over a PGM header: whitespace and '#' comments separate tokens.
class HeaderReader {
 public:
  explicit HeaderReader(std::span<const unsigned char> bytes) : bytes_(bytes) {}

  long next_int() {
    skip_separators();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
      throw std::runtime_error("malformed PGM header");
    }
    long v = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      v = v * 10 + (bytes_[pos_++] - '0');
      if (v > 1'000'000) throw std::runtime_error("malformed PGM header: value out of range");
    }
    return v;
  }

  // Exactly one whitespace byte separates maxval from the raster.
  std::size_t raster_offset() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw std::runtime_error("malformed PGM header");
    }
    return pos_ + 1;
  }

  std::size_t pos_ = 0;

 private:
  void skip_separators() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const unsigned char> bytes_;
};

}  // namespace

Image::Image(int width, int height) : Image(width, height, std::vector<double>(static_cast<std::size_t>(std::max(width, 0)) * std::max(height, 0))) {}

Image::Image(int width, int height, std::vector<double> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  check_dims(width, height);
  if (pixels_.size() != static_cast<std::size_t>(width) * height) {
    throw std::invalid_argument("pixel count does not match image dimensions");
  }
}

Image Image::constant(int width, int height, double value) {
  return Image(width, height, std::vector<double>(static_cast<std::size_t>(width) * height, value));
}

unsigned char to_byte(double v) {
  if (!(v > 0.0)) return 0;  // also maps NaN to 0
  if (v >= 255.0) return 255;
  return static_cast<unsigned char>(std::floor(v + 0.5));
}

Image decode_pgm(std::span<const unsigned char> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
    throw std::runtime_error("not a binary PGM (P5) file");
  }
  HeaderReader reader(bytes);
  reader.pos_ = 2;
  const long width = reader.next_int();
  const long height = reader.next_int();
  const long maxval = reader.next_int();
  if (maxval != 255) {
    throw std::runtime_error("unsupported PGM maxval " + std::to_string(maxval) + " (expected 255)");
  }
  if (width <= 0 || height <= 0) throw std::runtime_error("malformed PGM header: zero dimension");
  const std::size_t offset = reader.raster_offset();
  const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (bytes.size() - offset < count) throw std::runtime_error("truncated PGM raster");

  std::vector<double> pixels(count);
  std::transform(bytes.begin() + offset, bytes.begin() + offset + count, pixels.begin(),
                 [](unsigned char b) { return static_cast<double>(b); });
  return Image(static_cast<int>(width), static_cast<int>(height), std::move(pixels));
}

std::vector<unsigned char> encode_pgm(const Image& img) {
  const std::string header = "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
  std::vector<unsigned char> out(header.begin(), header.end());
  out.reserve(header.size() + img.size());
  for (double v : img.pixels()) out.push_back(to_byte(v));
  return out;
}

Image load_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_pgm(bytes);
}

void save_pgm(const Image& img, const std::filesystem::path& path) {
  const auto bytes = encode_pgm(img);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

Image downsample_block(const Image& img, int factor) {
  check_factor(factor);
  if (img.width() % factor != 0 || img.height() % factor != 0) {
    throw std::invalid_argument("downsampling factor does not divide image dimensions");
  }
  const int w = img.width() / factor;
  const int h = img.height() / factor;
  const double inv = 1.0 / (static_cast<double>(factor) * factor);
  Image out(w, h);
  for (int by = 0; by < h; ++by) {
    for (int bx = 0; bx < w; ++bx) {
      double sum = 0.0;
      for (int dy = 0; dy < factor; ++dy) {
        for (int dx = 0; dx < factor; ++dx) sum += img(bx * factor + dx, by * factor + dy);
      }
      out(bx, by) = sum * inv;
    }
  }
  return out;
}

namespace {

struct Tap {
  int lo;
  int hi;
  double frac;  // weight of hi
};

std::vector<Tap> bilinear_taps(int src, int factor) {
  std::vector<Tap> taps(static_cast<std::size_t>(src) * factor);
  for (std::size_t u = 0; u < taps.size(); ++u) {
    double c = (static_cast<double>(u) + 0.5) / factor - 0.5;
    c = std::clamp(c, 0.0, static_cast<double>(src - 1));
    const int lo = static_cast<int>(std::floor(c));
    const int hi = std::min(lo + 1, src - 1);
    taps[u] = {lo, hi, c - lo};
  }
  return taps;
}

}  // namespace

Image upsample_bilinear(const Image& img, int factor) {
  check_factor(factor);
  const int w = img.width() * factor;
  const int h = img.height() * factor;
  const auto tx = bilinear_taps(img.width(), factor);
  const auto ty = bilinear_taps(img.height(), factor);

  // Separable: horizontal pass into a (w x src_h) buffer, then vertical.
  Image horiz(w, img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < w; ++x) {
      const Tap& t = tx[x];
      horiz(x, y) = (1.0 - t.frac) * img(t.lo, y) + t.frac * img(t.hi, y);
    }
  }
  Image out(w, h);
  for (int y = 0; y < h; ++y) {
    const Tap& t = ty[y];
    for (int x = 0; x < w; ++x) out(x, y) = (1.0 - t.frac) * horiz(x, t.lo) + t.frac * horiz(x, t.hi);
  }
  return out;
}

double mse(const Image& a, const Image& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw std::invalid_argument("image dimensions differ");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a.pixels()[i] - b.pixels()[i];
    acc += d * d;
  }
  return a.empty() ? 0.0 : acc / static_cast<double>(a.size());
}

double psnr(const Image& reference, const Image& test) {
  const double e = mse(reference, test);
  if (e == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / e);
}

}  // namespace scs
