#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "scs/image.hpp"
#include "scs/kernels.hpp"
#include "scs/linear_operator.hpp"
#include "scs/transform.hpp"

namespace scs {

/// Geometry and seeds of the two-layer acquisition. Everything the encoder
/// and decoder need to regenerate the sensing operators.
///
/// Resolutions are nested: full (width x height) -> base (block factor
/// s_base) -> preview (block factor s_pre), with m_B = preview pixel count.
struct SensingConfig {
  int width = 0;
  int height = 0;
  int base_width = 0;
  int base_height = 0;
  int preview_width = 0;
  int preview_height = 0;
  std::uint32_t m_base = 0;  // m_B
  std::uint32_t m_enh = 0;   // m_E
  std::uint64_t seed_base = 0;
  std::uint64_t seed_enh = 0;
  HadamardOrdering ordering = HadamardOrdering::signed_sylvester;  // column signs seeded by seed_base

  /// Full/base/preview geometry from the full size, the base width and m_B.
  static SensingConfig make(int width, int height, int base_width, std::uint32_t m_base, std::uint32_t m_enh,
                            std::uint64_t seed_base, std::uint64_t seed_enh,
                            HadamardOrdering ordering = HadamardOrdering::signed_sylvester);

  /// The Hadamard matrix H of the base operator.
  HadamardOrder hadamard() const { return HadamardOrder(m_base, ordering, seed_base); }

  std::size_t n() const { return static_cast<std::size_t>(width) * height; }
  std::size_t n_base() const { return static_cast<std::size_t>(base_width) * base_height; }
  int s_base() const { return width / base_width; }
  int s_pre() const { return base_width / preview_width; }

  /// Throws std::invalid_argument when the invariants do not hold.
  void validate() const;

  bool operator==(const SensingConfig&) const = default;
};

enum class Layer : std::uint8_t { base, enhancement, residual, monolithic };

struct MeasurementVector {
  Layer layer = Layer::monolithic;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
};

/// Dual-scale sensing operator Phi_B = H D + F on base-resolution signals.
///
/// D sums each s_pre x s_pre block of the base image into one preview pixel
/// (row-major preview order), H is the Hadamard matrix of order m_B selected
/// by the config's ordering, and every row of F holds, inside each block, an equal number of +1
/// and -1 entries in a seeded random arrangement, so F D^T = 0.
class DssOperator final : public LinearOperator {
 public:
  explicit DssOperator(const SensingConfig& config);

  std::size_t rows() const override { return config_.m_base; }
  std::size_t cols() const override { return config_.n_base(); }
  void apply(std::span<const double> x, std::span<double> y) const override;
  void apply_adjoint(std::span<const double> y, std::span<double> x) const override;
  using LinearOperator::apply;
  using LinearOperator::apply_adjoint;

  const SensingConfig& config() const { return config_; }
  int block() const { return block_; }

  /// Entry of F at (row, base pixel index in row-major base order).
  int f_entry(std::size_t row, std::size_t base_pixel) const;

 private:
  std::size_t block_column(std::size_t base_pixel) const;

  SensingConfig config_;
  int block_;           // s_pre
  HadamardOrder hadamard_;
  PackedSigns f_;       // columns in block-major order: preview pixel * s_pre^2 + offset in block
};

/// Phi_B applied to a full-resolution image: the pixels outside the base
/// grid are annihilated by taking s_base x s_base block means first.
class AugmentedDssOperator final : public LinearOperator {
 public:
  explicit AugmentedDssOperator(const DssOperator& dss) : dss_(dss) {}

  std::size_t rows() const override { return dss_.rows(); }
  std::size_t cols() const override { return dss_.config().n(); }
  void apply(std::span<const double> x, std::span<double> y) const override;
  void apply_adjoint(std::span<const double> y, std::span<double> x) const override;
  using LinearOperator::apply;
  using LinearOperator::apply_adjoint;

 private:
  const DssOperator& dss_;
};

/// Rows x cols matrix of i.i.d. equiprobable +/-1 entries, regenerated from
/// the seed on every application (row i uses substream i).
class RademacherOperator final : public LinearOperator {
 public:
  RademacherOperator(std::size_t rows, std::size_t cols, std::uint64_t seed) : signs_{seed, rows, cols} {}

  std::size_t rows() const override { return signs_.rows; }
  std::size_t cols() const override { return signs_.cols; }
  void apply(std::span<const double> x, std::span<double> y) const override;
  void apply_adjoint(std::span<const double> y, std::span<double> x) const override;
  using LinearOperator::apply;
  using LinearOperator::apply_adjoint;

  std::uint64_t seed() const { return signs_.seed; }
  int entry(std::size_t row, std::size_t col) const { return sign_entry(signs_, row, col); }
  const StreamedSigns& signs() const { return signs_; }

 private:
  StreamedSigns signs_;
};

/// Vertical concatenation [top; bottom] of two operators with equal column count.
class StackedOperator final : public LinearOperator {
 public:
  StackedOperator(const LinearOperator& top, const LinearOperator& bottom);

  std::size_t rows() const override { return top_.rows() + bottom_.rows(); }
  std::size_t cols() const override { return top_.cols(); }
  void apply(std::span<const double> x, std::span<double> y) const override;
  void apply_adjoint(std::span<const double> y, std::span<double> x) const override;
  using LinearOperator::apply;
  using LinearOperator::apply_adjoint;

 private:
  const LinearOperator& top_;
  const LinearOperator& bottom_;
};

DssOperator make_dss(const SensingConfig& config);
MeasurementVector apply_dss(const DssOperator& op, std::span<const double> base_signal);
MeasurementVector apply_augmented_dss(const DssOperator& op, const Image& full);
MeasurementVector apply_rademacher(const RademacherOperator& op, std::span<const double> x,
                                   Layer layer = Layer::enhancement);
std::vector<double> apply_adjoint(const LinearOperator& op, std::span<const double> y);

}  // namespace scs
