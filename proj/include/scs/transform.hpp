#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace scs {

/// Hadamard matrix used by the base-layer sensing operator. `sylvester` is
/// the natural-order matrix H; `signed_sylvester` is H diag(s) with seeded
/// column signs s, which is again a Hadamard matrix. The id is carried in the
/// bitstream header.
enum class HadamardOrdering : std::uint8_t { sylvester = 0, signed_sylvester = 1 };

class HadamardOrder {
 public:
  explicit HadamardOrder(std::size_t size, HadamardOrdering ord = HadamardOrdering::sylvester,
                         std::uint64_t seed = 0);

  std::size_t m() const { return m_; }
  HadamardOrdering ordering() const { return ordering_; }

  /// Entry (row, col): (-1)^popcount(row & col), times s_col when signed.
  int entry(std::size_t row, std::size_t col) const;
  int column_sign(std::size_t col) const { return signs_.empty() ? 1 : signs_[col]; }

  /// v <- H v in O(m log m).
  void apply(std::span<double> v) const;
  /// v <- H^T v.
  void apply_transpose(std::span<double> v) const;
  /// v <- H^{-1} v = H^T v / m.
  void apply_inverse(std::span<double> v) const;

 private:
  std::size_t m_;
  HadamardOrdering ordering_;
  std::vector<std::int8_t> signs_;
};

/// In-place unnormalized Walsh-Hadamard transform, v <- H v (Sylvester order).
void fwht_inplace(std::span<double> v);

/// v <- H^{-1} v = H v / m.
void ifwht_inplace(std::span<double> v);

std::vector<double> fwht(std::span<const double> v);
std::vector<double> ifwht(std::span<const double> v);

}  // namespace scs
