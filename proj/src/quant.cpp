#include "scs/quant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/math/special_functions/erf.hpp>

namespace scs {

namespace {

void check_rate(int rate) {
  if (rate < kMinRate || rate > kMaxRate) {
    throw std::invalid_argument("quantization rate must be in [1, 16], got " + std::to_string(rate));
  }
}

std::uint32_t bin_of(double u, int rate) {
  const double levels = std::ldexp(1.0, rate);
  const double k = std::floor(u * levels);
  if (!(k >= 0.0)) return 0;
  return static_cast<std::uint32_t>(std::min(k, levels - 1.0));
}

double std_normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

}  // namespace

EmbeddedCode::EmbeddedCode(int rate, std::size_t count, QuantizerKind kind, CompanderModel model, UniformRange range)
    : rate_(rate), count_(count), kind_(kind), model_(model), range_(range) {
  check_rate(rate);
  planes_.assign(static_cast<std::size_t>(rate), std::vector<std::uint8_t>(plane_bytes(), 0));
}

std::uint32_t EmbeddedCode::index(std::size_t i) const {
  std::uint32_t k = 0;
  const std::size_t byte = i / 8;
  const int shift = 7 - static_cast<int>(i % 8);
  for (const auto& p : planes_) k = (k << 1) | ((p[byte] >> shift) & 1u);
  return k;
}

void EmbeddedCode::set_index(std::size_t i, std::uint32_t k) {
  const std::size_t byte = i / 8;
  const auto bit = static_cast<std::uint8_t>(1u << (7 - i % 8));
  for (int p = 0; p < rate_; ++p) {
    auto& plane = planes_[static_cast<std::size_t>(p)];
    if ((k >> (rate_ - 1 - p)) & 1u) {
      plane[byte] |= bit;
    } else {
      plane[byte] &= static_cast<std::uint8_t>(~bit);
    }
  }
}

CompanderModel fit_model(std::span<const double> y) {
  if (y.empty()) throw std::invalid_argument("fit_model: empty measurement vector");
  double ss = 0.0;
  for (double v : y) ss += v * v;
  const double sigma = std::sqrt(ss / static_cast<double>(y.size()));
  return {sigma > 0.0 ? sigma : 1.0, 0.0, kCompanderSpread};
}

double compress(double y, const CompanderModel& model) {
  return 0.5 * std::erfc(-(y - model.mu) / (model.scale() * std::numbers::sqrt2));
}

double expand(double u, const CompanderModel& model) {
  return model.mu + model.scale() * std::numbers::sqrt2 * boost::math::erf_inv(2.0 * u - 1.0);
}

EmbeddedCode quantize(std::span<const double> y, int rate, const CompanderModel& model) {
  if (!(model.sigma > 0.0) || !(model.spread > 0.0)) {
    throw std::invalid_argument("compander sigma and spread must be positive");
  }
  EmbeddedCode code(rate, y.size(), QuantizerKind::companded, model, {});
  for (std::size_t i = 0; i < y.size(); ++i) code.set_index(i, bin_of(compress(y[i], model), rate));
  return code;
}

EmbeddedCode truncate(const EmbeddedCode& code, int bits) {
  if (bits < kMinRate || bits > code.rate()) throw std::invalid_argument("truncate: bit count out of range");
  EmbeddedCode out(bits, code.count(), code.kind(), code.model(), code.range());
  for (int p = 0; p < bits; ++p) std::ranges::copy(code.plane(p), out.plane(p).begin());
  return out;
}

std::vector<double> dequantize(const EmbeddedCode& code) {
  std::vector<double> out(code.count());
  const double levels = std::ldexp(1.0, code.rate());
  for (std::size_t i = 0; i < code.count(); ++i) {
    const double u = (code.index(i) + 0.5) / levels;
    if (code.kind() == QuantizerKind::companded) {
      out[i] = expand(u, code.model());
    } else {
      out[i] = code.range().lo + u * (code.range().hi - code.range().lo);
    }
  }
  return out;
}

EmbeddedCode quantize_uniform(std::span<const double> y, int rate, double lo, double hi) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw std::invalid_argument("uniform quantizer needs a finite range lo < hi");
  }
  EmbeddedCode code(rate, y.size(), QuantizerKind::uniform, {}, {lo, hi});
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double u = (std::clamp(y[i], lo, hi) - lo) / (hi - lo);
    code.set_index(i, bin_of(u, rate));
  }
  return code;
}

EmbeddedCode quantize_uniform(std::span<const double> y, int rate) {
  if (y.empty()) throw std::invalid_argument("uniform quantizer: empty input");
  const auto [lo, hi] = std::ranges::minmax(y);
  return quantize_uniform(y, rate, lo, hi > lo ? hi : lo + 1.0);
}

double gaussian_compander_mse(const CompanderModel& model, int rate) {
  check_rate(rate);
  const std::size_t levels = std::size_t{1} << rate;
  constexpr double inf = std::numeric_limits<double>::infinity();
  auto edge = [&](std::size_t k) -> double {
    if (k == 0) return -inf;
    if (k == levels) return inf;
    return model.spread * std::numbers::sqrt2 * boost::math::erf_inv(2.0 * static_cast<double>(k) / levels - 1.0);
  };
  auto cdf = [](double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); };
  auto zpdf = [](double z) { return std::isfinite(z) ? z * std_normal_pdf(z) : 0.0; };
  auto pdf = [](double z) { return std::isfinite(z) ? std_normal_pdf(z) : 0.0; };

  double d = 0.0;
  for (std::size_t k = 0; k < levels; ++k) {
    const double a = edge(k);
    const double b = edge(k + 1);
    const double c = model.spread * std::numbers::sqrt2 * boost::math::erf_inv(2.0 * (k + 0.5) / levels - 1.0);
    const double p0 = cdf(b) - cdf(a);
    const double p1 = pdf(a) - pdf(b);
    const double p2 = p0 + zpdf(a) - zpdf(b);
    d += p2 - 2.0 * c * p1 + c * c * p0;
  }
  return d * model.sigma * model.sigma;
}

}  // namespace scs
