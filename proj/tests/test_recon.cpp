#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "scs/recon.hpp"

using namespace scs;

namespace {

class Identity final : public LinearOperator {
 public:
  explicit Identity(std::size_t n) : n_(n) {}
  std::size_t rows() const override { return n_; }
  std::size_t cols() const override { return n_; }
  void apply(std::span<const double> x, std::span<double> y) const override { std::copy(x.begin(), x.end(), y.begin()); }
  void apply_adjoint(std::span<const double> y, std::span<double> x) const override {
    std::copy(y.begin(), y.end(), x.begin());
  }

 private:
  std::size_t n_;
};

TvSolution solve_phantom(std::size_t m, std::uint64_t seed, int iters = 300) {
  const Image x = oracle::phantom32();
  const RademacherOperator op(m, x.size(), seed);
  const auto y = op.apply(x.pixels());
  TvProblem p;
  p.op = &op;
  p.y = y;
  p.width = 32;
  p.height = 32;
  p.lambda = 10.0;
  p.max_iters = iters;
  return solve_tv(p);
}

}  // namespace

TEST_CASE("tv_norm") {
  CHECK(tv_norm(Image::constant(8, 8, 3.0)) == 0.0);
  CHECK(tv_norm(Image(2, 2, {0, 1, 0, 1})) == doctest::Approx(2.0));
  for (int n : {4, 16, 64}) {
    Image step(n, n);
    for (int y = 0; y < n; ++y) {
      for (int x = n / 2; x < n; ++x) step(x, y) = 1.0;
    }
    CHECK(tv_norm(step) == doctest::Approx(static_cast<double>(n)));
  }
  const Image r(16, 16, oracle::uniform(256, 0, 255, 1));
  std::vector<double> scaled(r.pixels().begin(), r.pixels().end());
  for (double& v : scaled) v *= -2.5;
  CHECK(tv_norm(Image(16, 16, scaled)) == doctest::Approx(2.5 * tv_norm(r)).epsilon(1e-12));
  CHECK(tv_norm(r) > 0.0);
}

TEST_CASE("identity operator with a large weight returns the data") {
  const Identity op(256);
  const auto y = oracle::uniform(256, 0, 255, 2);
  TvProblem p;
  p.op = &op;
  p.y = y;
  p.width = 16;
  p.height = 16;
  p.lambda = 1e6;
  const TvSolution s = solve_tv(p);
  for (std::size_t i = 0; i < y.size(); ++i) CHECK(std::abs(s.image.pixels()[i] - y[i]) < 1e-3);
}

TEST_CASE("piecewise-constant phantom from n/2 measurements") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const TvSolution s = solve_phantom(512, seed);
    const double q = psnr(oracle::phantom32(), s.image);
    MESSAGE("seed " << seed << ": " << q << " dB after " << s.iterations_run << " iterations");
    CHECK(q >= 40.0);
    CHECK(s.iterations_run <= 300);
  }
}

TEST_CASE("objective history is monotone and solver is deterministic") {
  const TvSolution a = solve_phantom(400, 9, 120);
  const TvSolution b = solve_phantom(400, 9, 120);
  REQUIRE(!a.objective_history.empty());
  for (std::size_t i = 1; i < a.objective_history.size(); ++i) {
    CHECK(a.objective_history[i] <= a.objective_history[i - 1] * (1.0 + 1e-6));
  }
  CHECK(a.image == b.image);
  CHECK(a.objective_history == b.objective_history);
  CHECK(a.iterations_run == static_cast<int>(a.objective_history.size()));
}

TEST_CASE("solver errors") {
  const RademacherOperator op(10, 64, 1);
  std::vector<double> y(10, 1.0);
  TvProblem p;
  p.op = &op;
  p.y = y;
  p.width = 8;
  p.height = 8;
  CHECK_NOTHROW(solve_tv(p));
  p.width = 4;
  CHECK_THROWS(solve_tv(p));
  p.width = 8;
  y[3] = std::nan("");
  CHECK_THROWS(solve_tv(p));
  y[3] = 0.0;
  p.lambda = 0.0;
  CHECK_THROWS(solve_tv(p));
  p.lambda = 1.0;
  p.op = nullptr;
  CHECK_THROWS(solve_tv(p));
}

TEST_CASE("recover_base of a constant image") {
  const SensingConfig c = SensingConfig::make(64, 64, 32, 64, 10, 1, 2);
  const DssOperator dss(c);
  const auto y = dss.apply(Image::constant(32, 32, 97.0).pixels());
  const Image b = recover_base(y, 1e-6, dss);
  REQUIRE(b.width() == 32);
  for (double v : b.pixels()) CHECK(std::abs(v - 97.0) < 0.5);
}

TEST_CASE("recover_base fits its measurements") {
  const SensingConfig c = SensingConfig::make(16, 16, 8, 16, 10, 4, 5);
  const DssOperator dss(c);
  const Image x(8, 8, oracle::uniform(64, 50, 150, 3));
  const auto y = dss.apply(x.pixels());
  const Image b = recover_base(y, 1e-4, dss);
  const auto yb = dss.apply(b.pixels());
  double r2 = 0.0, y2 = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    r2 += (yb[i] - y[i]) * (yb[i] - y[i]);
    y2 += y[i] * y[i];
  }
  CHECK(std::sqrt(r2 / y2) < 1e-3);
}

TEST_CASE("recover_enhancement with a perfect prediction") {
  const Image x = oracle::phantom32();
  const SensingConfig c = SensingConfig::make(32, 32, 16, 16, 512, 1, 2);
  const RademacherOperator phi(c.m_enh, c.n(), c.seed_enh);
  const auto y_pred = phi.apply(x.pixels());
  const std::vector<double> residual(y_pred.size(), 0.0);
  const Image rec = recover_enhancement(residual, y_pred, 1e-6, phi, c);
  CHECK(psnr(x, rec) >= 40.0);
  CHECK_THROWS(recover_enhancement(std::vector<double>(3), y_pred, 1.0, phi, c));
}

TEST_CASE("lambda_for_noise scales inversely with the noise") {
  const double a = lambda_for_noise(1.0, 1000, 16384);
  CHECK(lambda_for_noise(4.0, 1000, 16384) == doctest::Approx(a / 4.0));
  CHECK(lambda_for_noise(1.0, 2000, 16384) == doctest::Approx(a / 2.0));
  CHECK(a > 0.0);
}
