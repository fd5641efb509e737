#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "scs/sensing.hpp"

namespace scs {

/// Scale of the fitted compressor relative to the source deviation. A
/// Gaussian CDF of deviation sqrt(3) sigma is proportional to the cube root of
/// the source density, the high-rate MSE-optimal point density.
constexpr double kCompanderSpread = std::numbers::sqrt3;

/// Zero-mean Gaussian model of a measurement layer. The compressor is the
/// Gaussian CDF of deviation spread * sigma.
struct CompanderModel {
  double sigma = 1.0;
  double mu = 0.0;  // always 0
  double spread = 1.0;

  double scale() const { return sigma * spread; }

  bool operator==(const CompanderModel&) const = default;
};

/// Support of the plain uniform quantizer.
struct UniformRange {
  double lo = 0.0;
  double hi = 1.0;

  bool operator==(const UniformRange&) const = default;
};

enum class QuantizerKind : std::uint8_t { companded, uniform };

constexpr int kMinRate = 1;
constexpr int kMaxRate = 16;

/// Quantization indices stored bit-plane-major: plane 0 holds the most
/// significant bit of every index, plane 1 the next, and so on. Each plane is
/// packed MSB-first into ceil(count / 8) bytes with zero padding. The first b
/// planes form the rate-b code of the same source.
class EmbeddedCode {
 public:
  EmbeddedCode() = default;
  EmbeddedCode(int rate, std::size_t count, QuantizerKind kind, CompanderModel model, UniformRange range);

  int rate() const { return rate_; }
  std::size_t count() const { return count_; }
  QuantizerKind kind() const { return kind_; }
  const CompanderModel& model() const { return model_; }
  const UniformRange& range() const { return range_; }

  std::size_t bit_count() const { return static_cast<std::size_t>(rate_) * count_; }
  std::size_t plane_bytes() const { return (count_ + 7) / 8; }

  std::span<const std::uint8_t> plane(int p) const { return planes_[static_cast<std::size_t>(p)]; }
  std::span<std::uint8_t> plane(int p) { return planes_[static_cast<std::size_t>(p)]; }

  std::uint32_t index(std::size_t i) const;
  void set_index(std::size_t i, std::uint32_t k);

  bool operator==(const EmbeddedCode&) const = default;

 private:
  int rate_ = 0;
  std::size_t count_ = 0;
  QuantizerKind kind_ = QuantizerKind::companded;
  CompanderModel model_;
  UniformRange range_;
  std::vector<std::vector<std::uint8_t>> planes_;
};

/// sigma = RMS of the values (zero-mean ML estimate); 1 when all are zero.
/// The returned model uses kCompanderSpread.
CompanderModel fit_model(std::span<const double> y);
inline CompanderModel fit_model(const MeasurementVector& y) { return fit_model(y.values); }

/// Gaussian CDF F(y) = (1 + erf(y / sqrt(2 s^2))) / 2 with s = model.scale().
double compress(double y, const CompanderModel& model);
/// Inverse of `compress` for u in (0, 1).
double expand(double u, const CompanderModel& model);

/// Index min(floor(F(y) 2^R), 2^R - 1) per measurement.
EmbeddedCode quantize(std::span<const double> y, int rate, const CompanderModel& model);
inline EmbeddedCode quantize(const MeasurementVector& y, int rate, const CompanderModel& model) {
  return quantize(y.values, rate, model);
}

/// Keeps the first `bits` planes.
EmbeddedCode truncate(const EmbeddedCode& code, int bits);

/// Bin-midpoint reconstruction in the companded (or uniform) domain.
std::vector<double> dequantize(const EmbeddedCode& code);

/// Uniform scalar quantizer over [lo, hi] with values clamped into range.
EmbeddedCode quantize_uniform(std::span<const double> y, int rate, double lo, double hi);
/// Uniform quantizer over [min(y), max(y)].
EmbeddedCode quantize_uniform(std::span<const double> y, int rate);

/// Mean squared error of the companded quantizer for a N(0, sigma^2) source
/// at the given rate, from the closed-form per-bin integrals.
double gaussian_compander_mse(const CompanderModel& model, int rate);

}  // namespace scs
