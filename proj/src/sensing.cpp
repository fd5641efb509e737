#include "scs/sensing.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "scs/rng.hpp"
#include "scs/transform.hpp"

namespace scs {

namespace {

bool dims_pow2(int w, int h) {
  return w > 0 && h > 0 && is_pow2(static_cast<std::size_t>(w)) && is_pow2(static_cast<std::size_t>(h));
}

void check_len(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw std::invalid_argument(std::string(what) + ": length " + std::to_string(got) + ", expected " +
                                std::to_string(want));
  }
}

}  // namespace

SensingConfig SensingConfig::make(int width, int height, int base_width, std::uint32_t m_base, std::uint32_t m_enh,
                                  std::uint64_t seed_base, std::uint64_t seed_enh, HadamardOrdering ordering) {
  if (base_width <= 0 || width % base_width != 0) throw std::invalid_argument("base width must divide width");
  SensingConfig c;
  c.width = width;
  c.height = height;
  c.base_width = base_width;
  c.base_height = height / (width / base_width);
  // Preview blocks are square: preview_width * preview_height = m_B with the
  // same factor on both axes.
  std::uint32_t pw = 1;
  while (static_cast<std::uint64_t>(pw) * pw * c.base_height < static_cast<std::uint64_t>(m_base) * c.base_width) pw *= 2;
  c.preview_width = static_cast<int>(pw);
  c.preview_height = c.preview_width == 0 ? 0 : static_cast<int>(m_base / pw);
  c.m_base = m_base;
  c.m_enh = m_enh;
  c.seed_base = seed_base;
  c.seed_enh = seed_enh;
  c.ordering = ordering;
  c.validate();
  return c;
}

void SensingConfig::validate() const {
  if (!dims_pow2(width, height) || !dims_pow2(base_width, base_height) || !dims_pow2(preview_width, preview_height)) {
    throw std::invalid_argument("sensing config: all resolutions must be powers of two");
  }
  if (width % base_width != 0 || height % base_height != 0 || width / base_width != height / base_height) {
    throw std::invalid_argument("sensing config: base resolution must be a uniform dyadic reduction of the full one");
  }
  if (base_width % preview_width != 0 || base_height % preview_height != 0 ||
      base_width / preview_width != base_height / preview_height) {
    throw std::invalid_argument("sensing config: preview resolution must be a uniform dyadic reduction of the base one");
  }
  if (static_cast<std::size_t>(preview_width) * preview_height != m_base) {
    throw std::invalid_argument("sensing config: m_B must equal the preview pixel count");
  }
  if (m_base < 4) throw std::invalid_argument("sensing config: m_B must be at least 4");
  if (base_width / preview_width < 2) {
    throw std::invalid_argument("sensing config: base must be at least twice the preview resolution");
  }
  if (m_enh > n()) throw std::invalid_argument("sensing config: m_E exceeds the pixel count");
}

// ---------------------------------------------------------------------------

DssOperator::DssOperator(const SensingConfig& config)
    : config_(config), hadamard_((config.validate(), config.hadamard())) {
  block_ = config_.s_pre();
  const std::size_t cells = static_cast<std::size_t>(block_) * block_;
  const std::size_t m = config_.m_base;
  f_ = PackedSigns(m, config_.n_base());

  std::vector<std::uint8_t> pattern(cells);
  for (std::size_t row = 0; row < m; ++row) {
    SplitMix64 rng(substream_seed(config_.seed_base, row));
    for (std::size_t blk = 0; blk < m; ++blk) {
      // Half of each block negative, Fisher-Yates shuffled.
      std::fill(pattern.begin(), pattern.end(), 0);
      std::fill(pattern.begin(), pattern.begin() + static_cast<std::ptrdiff_t>(cells / 2), 1);
      for (std::size_t k = cells - 1; k > 0; --k) std::swap(pattern[k], pattern[rng.below(k + 1)]);
      for (std::size_t k = 0; k < cells; ++k) {
        if (pattern[k]) f_.set_negative(row, blk * cells + k);
      }
    }
  }
}

std::size_t DssOperator::block_column(std::size_t base_pixel) const {
  const std::size_t bw = static_cast<std::size_t>(config_.base_width);
  const std::size_t r = base_pixel / bw;
  const std::size_t c = base_pixel % bw;
  const std::size_t s = static_cast<std::size_t>(block_);
  const std::size_t preview = (r / s) * static_cast<std::size_t>(config_.preview_width) + c / s;
  return preview * s * s + (r % s) * s + (c % s);
}

int DssOperator::f_entry(std::size_t row, std::size_t base_pixel) const {
  return f_.entry(row, block_column(base_pixel));
}

void DssOperator::apply(std::span<const double> x, std::span<double> y) const {
  check_len(x.size(), cols(), "DSS apply");
  check_len(y.size(), rows(), "DSS apply");
  const std::size_t s = static_cast<std::size_t>(block_);
  const std::size_t cells = s * s;
  const std::size_t bw = static_cast<std::size_t>(config_.base_width);
  const std::size_t pw = static_cast<std::size_t>(config_.preview_width);

  // Reorder to block-major and form the block sums D x.
  std::vector<double> blocked(x.size());
  std::vector<double> sums(rows(), 0.0);
  for (std::size_t p = 0; p < rows(); ++p) {
    const std::size_t r0 = (p / pw) * s;
    const std::size_t c0 = (p % pw) * s;
    double acc = 0.0;
    for (std::size_t dy = 0; dy < s; ++dy) {
      for (std::size_t dx = 0; dx < s; ++dx) {
        const double v = x[(r0 + dy) * bw + c0 + dx];
        blocked[p * cells + dy * s + dx] = v;
        acc += v;
      }
    }
    sums[p] = acc;
  }
  hadamard_.apply(sums);
  kernels::omp::sign_matvec(f_, blocked, y);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += sums[i];
}

void DssOperator::apply_adjoint(std::span<const double> y, std::span<double> x) const {
  check_len(y.size(), rows(), "DSS adjoint");
  check_len(x.size(), cols(), "DSS adjoint");
  const std::size_t s = static_cast<std::size_t>(block_);
  const std::size_t cells = s * s;
  const std::size_t bw = static_cast<std::size_t>(config_.base_width);
  const std::size_t pw = static_cast<std::size_t>(config_.preview_width);

  // Phi_B^T y = D^T H^T y + F^T y.
  std::vector<double> hy(y.begin(), y.end());
  hadamard_.apply_transpose(hy);
  std::vector<double> blocked(cols());
  kernels::omp::sign_matvec_transposed(f_, y, blocked);
  for (std::size_t p = 0; p < rows(); ++p) {
    const std::size_t r0 = (p / pw) * s;
    const std::size_t c0 = (p % pw) * s;
    for (std::size_t dy = 0; dy < s; ++dy) {
      for (std::size_t dx = 0; dx < s; ++dx) {
        x[(r0 + dy) * bw + c0 + dx] = blocked[p * cells + dy * s + dx] + hy[p];
      }
    }
  }
}

// ---------------------------------------------------------------------------

void AugmentedDssOperator::apply(std::span<const double> x, std::span<double> y) const {
  const SensingConfig& c = dss_.config();
  check_len(x.size(), cols(), "augmented DSS apply");
  const Image full(c.width, c.height, std::vector<double>(x.begin(), x.end()));
  const Image base = downsample_block(full, c.s_base());
  dss_.apply(base.pixels(), y);
}

void AugmentedDssOperator::apply_adjoint(std::span<const double> y, std::span<double> x) const {
  const SensingConfig& c = dss_.config();
  check_len(x.size(), cols(), "augmented DSS adjoint");
  const std::vector<double> base = dss_.apply_adjoint(y);
  const int s = c.s_base();
  const double inv = 1.0 / (static_cast<double>(s) * s);
  for (int r = 0; r < c.height; ++r) {
    for (int col = 0; col < c.width; ++col) {
      x[static_cast<std::size_t>(r) * c.width + col] =
          base[static_cast<std::size_t>(r / s) * c.base_width + col / s] * inv;
    }
  }
}

// ---------------------------------------------------------------------------

void RademacherOperator::apply(std::span<const double> x, std::span<double> y) const {
  kernels::omp::sign_matvec(signs_, x, y);
}

void RademacherOperator::apply_adjoint(std::span<const double> y, std::span<double> x) const {
  kernels::omp::sign_matvec_transposed(signs_, y, x);
}

// ---------------------------------------------------------------------------

StackedOperator::StackedOperator(const LinearOperator& top, const LinearOperator& bottom)
    : top_(top), bottom_(bottom) {
  if (top.cols() != bottom.cols()) throw std::invalid_argument("stacked operators must share a column count");
}

void StackedOperator::apply(std::span<const double> x, std::span<double> y) const {
  check_len(y.size(), rows(), "stacked apply");
  top_.apply(x, y.first(top_.rows()));
  bottom_.apply(x, y.subspan(top_.rows()));
}

void StackedOperator::apply_adjoint(std::span<const double> y, std::span<double> x) const {
  check_len(y.size(), rows(), "stacked adjoint");
  top_.apply_adjoint(y.first(top_.rows()), x);
  const std::vector<double> lower = bottom_.apply_adjoint(y.subspan(top_.rows()));
  for (std::size_t j = 0; j < x.size(); ++j) x[j] += lower[j];
}

// ---------------------------------------------------------------------------

DssOperator make_dss(const SensingConfig& config) { return DssOperator(config); }

MeasurementVector apply_dss(const DssOperator& op, std::span<const double> base_signal) {
  return {Layer::base, op.apply(base_signal)};
}

MeasurementVector apply_augmented_dss(const DssOperator& op, const Image& full) {
  const SensingConfig& c = op.config();
  if (full.width() != c.width || full.height() != c.height) {
    throw std::invalid_argument("augmented DSS: image does not match the full resolution");
  }
  return {Layer::base, AugmentedDssOperator(op).apply(full.pixels())};
}

MeasurementVector apply_rademacher(const RademacherOperator& op, std::span<const double> x, Layer layer) {
  return {layer, op.apply(x)};
}

std::vector<double> apply_adjoint(const LinearOperator& op, std::span<const double> y) {
  return op.apply_adjoint(y);
}

}  // namespace scs
