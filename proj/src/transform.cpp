#include "scs/transform.hpp"

#include <bit>
#include <stdexcept>

#include "scs/image.hpp"
#include "scs/rng.hpp"

namespace scs {

namespace {

void require_pow2(std::size_t n) {
  if (!is_pow2(n)) throw std::invalid_argument("Walsh-Hadamard length must be a power of two");
}

// Substream index of the column signs; row substreams use indices < m_B.
constexpr std::uint64_t kSignStream = 1ULL << 63;

}  // namespace

HadamardOrder::HadamardOrder(std::size_t size, HadamardOrdering ord, std::uint64_t seed)
    : m_(size), ordering_(ord) {
  require_pow2(size);
  if (ord == HadamardOrdering::signed_sylvester) {
    signs_.resize(size);
    const std::uint64_t key = substream_seed(seed, kSignStream);
    for (std::size_t c = 0; c < size; ++c) {
      signs_[c] = (substream_word(key, c / 64) >> (c % 64)) & 1 ? -1 : 1;
    }
  } else if (ord != HadamardOrdering::sylvester) {
    throw std::invalid_argument("unknown Hadamard ordering");
  }
}

int HadamardOrder::entry(std::size_t row, std::size_t col) const {
  const int h = (std::popcount(row & col) & 1) ? -1 : 1;
  return h * column_sign(col);
}

void HadamardOrder::apply(std::span<double> v) const {
  if (v.size() != m_) throw std::invalid_argument("Hadamard transform length mismatch");
  for (std::size_t c = 0; c < signs_.size(); ++c) v[c] *= signs_[c];
  fwht_inplace(v);
}

void HadamardOrder::apply_transpose(std::span<double> v) const {
  if (v.size() != m_) throw std::invalid_argument("Hadamard transform length mismatch");
  fwht_inplace(v);
  for (std::size_t c = 0; c < signs_.size(); ++c) v[c] *= signs_[c];
}

void HadamardOrder::apply_inverse(std::span<double> v) const {
  apply_transpose(v);
  const double inv = 1.0 / static_cast<double>(m_);
  for (double& x : v) x *= inv;
}

void fwht_inplace(std::span<double> v) {
  const std::size_t n = v.size();
  require_pow2(n);
  for (std::size_t h = 1; h < n; h <<= 1) {
    for (std::size_t i = 0; i < n; i += 2 * h) {
      for (std::size_t j = i; j < i + h; ++j) {
        const double a = v[j];
        const double b = v[j + h];
        v[j] = a + b;
        v[j + h] = a - b;
      }
    }
  }
}

void ifwht_inplace(std::span<double> v) {
  fwht_inplace(v);
  const double inv = 1.0 / static_cast<double>(v.size());
  for (double& x : v) x *= inv;
}

std::vector<double> fwht(std::span<const double> v) {
  std::vector<double> out(v.begin(), v.end());
  fwht_inplace(out);
  return out;
}

std::vector<double> ifwht(std::span<const double> v) {
  std::vector<double> out(v.begin(), v.end());
  ifwht_inplace(out);
  return out;
}

}  // namespace scs
