#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace scs {

/// Matrix-free real linear map with its adjoint.
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;

  virtual std::size_t rows() const = 0;
  virtual std::size_t cols() const = 0;

  /// y = A x; x.size() == cols(), y.size() == rows().
  virtual void apply(std::span<const double> x, std::span<double> y) const = 0;
  /// x = A^T y.
  virtual void apply_adjoint(std::span<const double> y, std::span<double> x) const = 0;

  std::vector<double> apply(std::span<const double> x) const {
    std::vector<double> y(rows());
    apply(x, y);
    return y;
  }
  std::vector<double> apply_adjoint(std::span<const double> y) const {
    std::vector<double> x(cols());
    apply_adjoint(y, x);
    return x;
  }
};

}  // namespace scs
