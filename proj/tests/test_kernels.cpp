#include "doctest.h"
#include "oracles.hpp"
#include "scs/kernels.hpp"

using namespace scs;

namespace {

PackedSigns packed_from(const StreamedSigns& s) {
  PackedSigns p(s.rows, s.cols);
  for (std::size_t i = 0; i < s.rows; ++i) {
    for (std::size_t j = 0; j < s.cols; ++j) {
      if (sign_entry(s, i, j) < 0) p.set_negative(i, j);
    }
  }
  return p;
}

}  // namespace

TEST_CASE("sign kernels: serial, omp and dense agree") {
  // Column counts exercise full words, partial words and AVX blocks.
  for (std::size_t cols : {1u, 63u, 64u, 65u, 200u, 513u, 1100u}) {
    const StreamedSigns s{42 + cols, 37, cols};
    const PackedSigns p = packed_from(s);
    const auto dense = oracle::rademacher(s.rows, cols, s.seed);
    const auto x = oracle::gaussian(cols, 10.0, cols);
    const auto y = oracle::gaussian(s.rows, 10.0, cols + 1);
    const auto ref = oracle::apply(dense, x);
    const auto ref_t = oracle::apply(oracle::transpose(dense), y);

    std::vector<double> a(s.rows), b(s.rows), c(s.rows), d(s.rows);
    kernels::serial::sign_matvec(s, x, a);
    kernels::omp::sign_matvec(s, x, b);
    kernels::serial::sign_matvec(p, x, c);
    kernels::omp::sign_matvec(p, x, d);
    CHECK(oracle::max_abs_diff(a, ref) < 1e-9);
    CHECK(oracle::max_abs_diff(b, ref) < 1e-9);
    CHECK(oracle::max_abs_diff(c, ref) < 1e-9);
    CHECK(oracle::max_abs_diff(d, ref) < 1e-9);

    std::vector<double> at(cols), bt(cols), ct(cols), dt(cols);
    kernels::serial::sign_matvec_transposed(s, y, at);
    kernels::omp::sign_matvec_transposed(s, y, bt);
    kernels::serial::sign_matvec_transposed(p, y, ct);
    kernels::omp::sign_matvec_transposed(p, y, dt);
    CHECK(oracle::max_abs_diff(at, ref_t) < 1e-9);
    CHECK(oracle::max_abs_diff(bt, ref_t) < 1e-9);
    CHECK(oracle::max_abs_diff(ct, ref_t) < 1e-9);
    CHECK(oracle::max_abs_diff(dt, ref_t) < 1e-9);
  }
}

TEST_CASE("omp kernels are deterministic") {
  const StreamedSigns s{7, 300, 4096};
  const auto x = oracle::gaussian(s.cols, 1.0, 1);
  const auto y = oracle::gaussian(s.rows, 1.0, 2);
  std::vector<double> a(s.rows), b(s.rows), at(s.cols), bt(s.cols);
  kernels::omp::sign_matvec(s, x, a);
  kernels::omp::sign_matvec(s, x, b);
  kernels::omp::sign_matvec_transposed(s, y, at);
  kernels::omp::sign_matvec_transposed(s, y, bt);
  CHECK(a == b);
  CHECK(at == bt);
}

TEST_CASE("gradient kernels") {
  const int w = 16, h = 8;
  const auto img = oracle::gaussian(static_cast<std::size_t>(w) * h, 5.0, 3);
  std::vector<double> gx(img.size()), gy(img.size()), gx2(img.size()), gy2(img.size());
  kernels::serial::gradient(img, w, h, gx, gy);
  kernels::omp::gradient(img, w, h, gx2, gy2);
  CHECK(gx == gx2);
  CHECK(gy == gy2);
  CHECK(gx[static_cast<std::size_t>(3) * w + (w - 1)] == 0.0);
  CHECK(gy[static_cast<std::size_t>(h - 1) * w + 3] == 0.0);
  CHECK(gx[5] == doctest::Approx(img[6] - img[5]));
  CHECK(gy[5] == doctest::Approx(img[5 + w] - img[5]));

  // Adjoint identity <G x, (p, q)> = <x, G^T (p, q)>.
  const auto p = oracle::gaussian(img.size(), 1.0, 4);
  const auto q = oracle::gaussian(img.size(), 1.0, 5);
  std::vector<double> out(img.size()), out2(img.size());
  kernels::serial::gradient_adjoint(p, q, w, h, out);
  kernels::omp::gradient_adjoint(p, q, w, h, out2);
  CHECK(oracle::max_abs_diff(out, out2) < 1e-12);
  const double lhs = oracle::dot(gx, p) + oracle::dot(gy, q);
  CHECK(lhs == doctest::Approx(oracle::dot(img, out)).epsilon(1e-12));
}
