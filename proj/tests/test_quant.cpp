#include <cmath>
#include <numbers>

#include <boost/math/special_functions/erf.hpp>

#include "doctest.h"
#include "oracles.hpp"
#include "scs/quant.hpp"

using namespace scs;

TEST_CASE("fit_model") {
  CHECK(fit_model(std::vector<double>{3, -3, 3, -3}).sigma == doctest::Approx(3.0));
  CHECK(fit_model(std::vector<double>{0, 0, 0}).sigma == 1.0);
  const auto g = oracle::gaussian(100000, 5.0, 1);
  CHECK(fit_model(g).spread == kCompanderSpread);
  const double s = fit_model(g).sigma;
  CHECK(s >= 4.9);
  CHECK(s <= 5.1);
  CHECK_THROWS(fit_model(std::vector<double>{}));
}

TEST_CASE("compress and expand") {
  const CompanderModel m{2.0};
  CHECK(compress(0.0, m) == 0.5);
  CHECK(std::abs(compress(2.0, m) - 0.841345) < 1e-5);
  CHECK(std::abs(compress(-2.0, m) - 0.158655) < 1e-5);
  for (double u : {0.01, 0.3, 0.5, 0.77, 0.999}) CHECK(compress(expand(u, m), m) == doctest::Approx(u).epsilon(1e-12));
}

TEST_CASE("quantize edge conventions") {
  for (int r = 1; r <= 16; ++r) {
    const EmbeddedCode c = quantize(std::vector<double>{0.0}, r, {1.0});
    CHECK(c.index(0) == (1u << (r - 1)));
    CHECK(c.bit_count() == static_cast<std::size_t>(r));
  }
  const EmbeddedCode one = quantize(std::vector<double>{-2.0, -1e-9, 0.0, 3.0}, 1, {1.0});
  CHECK(one.index(0) == 0);
  CHECK(one.index(1) == 0);
  CHECK(one.index(2) == 1);
  CHECK(one.index(3) == 1);
  // u = 1 clamps into the last bin.
  CHECK(quantize(std::vector<double>{1e300}, 4, {1.0}).index(0) == 15);
  CHECK_THROWS(quantize(std::vector<double>{1.0}, 0, {1.0}));
  CHECK_THROWS(quantize(std::vector<double>{1.0}, 17, {1.0}));

  const EmbeddedCode base = quantize(std::vector<double>(4096, 1.0), 5, {1.0});
  CHECK(base.bit_count() == 20480);
  CHECK(static_cast<double>(base.bit_count()) / 65536.0 == 0.3125);
}

TEST_CASE("bit-plane layout") {
  // Indices 5 (101) and 2 (010) at rate 3.
  EmbeddedCode c(3, 2, QuantizerKind::companded, {1.0}, {});
  c.set_index(0, 5);
  c.set_index(1, 2);
  CHECK(c.plane(0)[0] == 0x80);
  CHECK(c.plane(1)[0] == 0x40);
  CHECK(c.plane(2)[0] == 0x80);
  CHECK(c.plane_bytes() == 1);
}

TEST_CASE("truncation is exact") {
  const auto y = oracle::gaussian(10000, 3.0, 2);
  const CompanderModel m = fit_model(y);
  const EmbeddedCode c5 = quantize(y, 5, m);
  CHECK(truncate(c5, 5) == c5);
  CHECK(truncate(quantize(y, 8, m), 3) == quantize(y, 3, m));
  const EmbeddedCode sign = truncate(c5, 1);
  for (std::size_t i = 0; i < y.size(); ++i) CHECK(sign.index(i) == (y[i] >= 0.0 ? 1u : 0u));
  CHECK_THROWS(truncate(c5, 0));
  CHECK_THROWS(truncate(c5, 6));
}

TEST_CASE("dequantize") {
  const CompanderModel m{4.0};
  EmbeddedCode c(1, 1, QuantizerKind::companded, m, {});
  c.set_index(0, 1);
  const double expected = 4.0 * std::numbers::sqrt2 * boost::math::erf_inv(0.5);
  CHECK(dequantize(c)[0] == doctest::Approx(expected));
  CHECK(dequantize(c)[0] == doctest::Approx(0.6745 * 4.0).epsilon(1e-4));

  CHECK(std::abs(dequantize(quantize(std::vector<double>{0.0}, 5, m))[0]) < 0.05 * 4.0);

  const auto y = oracle::gaussian(1000, 4.0, 3);
  std::vector<double> sym;
  for (double v : y) {
    if (v != 0.0) {
      sym.push_back(v);
      sym.push_back(-v);
    }
  }
  for (int r : {2, 5, 9}) {
    const auto d = dequantize(quantize(sym, r, m));
    for (std::size_t i = 0; i < d.size(); i += 2) CHECK(d[i] == -d[i + 1]);
  }
}

TEST_CASE("quantizer monotone and reconstruction inside its bin") {
  const CompanderModel m{2.5};
  auto y = oracle::gaussian(5000, 2.5, 4);
  std::sort(y.begin(), y.end());
  for (int r : {1, 3, 6, 12}) {
    const EmbeddedCode c = quantize(y, r, m);
    const auto d = dequantize(c);
    const double levels = std::ldexp(1.0, r);
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (i > 0) CHECK(c.index(i) >= c.index(i - 1));
      const double u = compress(d[i], m);
      CHECK(u >= c.index(i) / levels);
      CHECK(u < (c.index(i) + 1) / levels);
    }
  }
}

TEST_CASE("uniform quantizer") {
  const EmbeddedCode c = quantize_uniform(std::vector<double>{-1.0, 0.49, 0.51, 1.0}, 1, 0.0, 1.0);
  CHECK(c.index(0) == 0);
  CHECK(c.index(1) == 0);
  CHECK(c.index(2) == 1);
  CHECK(c.index(3) == 1);
  const auto d = dequantize(c);
  CHECK(d[0] == doctest::Approx(0.25));
  CHECK(d[3] == doctest::Approx(0.75));
  CHECK_THROWS(quantize_uniform(std::vector<double>{1.0}, 3, 1.0, 1.0));

  // High-rate distortion of a uniform source.
  const auto y = oracle::uniform(100000, -3.0, 5.0, 5);
  for (int r : {6, 8}) {
    const double got = oracle::mse(dequantize(quantize_uniform(y, r, -3.0, 5.0)), y);
    const double theory = 64.0 / (12.0 * std::ldexp(1.0, 2 * r));
    CHECK(std::abs(got / theory - 1.0) < 0.1);
  }
}

TEST_CASE("companded beats full-range uniform on Gaussian sources") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto y = oracle::gaussian(100000, 7.0, seed);
    const CompanderModel m = fit_model(y);
    for (int r : {3, 4, 5, 6}) {
      const double comp = oracle::mse(dequantize(quantize(y, r, m)), y);
      const double unif = oracle::mse(dequantize(quantize_uniform(y, r)), y);
      CHECK(comp < unif);
    }
  }
}

TEST_CASE("closed-form compander distortion matches Monte Carlo") {
  const auto y = oracle::gaussian(200000, 1.0, 6);
  for (const CompanderModel m : {CompanderModel{1.0}, CompanderModel{1.0, 0.0, kCompanderSpread}}) {
    for (int r : {1, 2, 4, 5, 8}) {
      const double mc = oracle::mse(dequantize(quantize(y, r, m)), y);
      CHECK(gaussian_compander_mse(m, r) == doctest::Approx(mc).epsilon(0.03));
    }
  }
  // High-rate limit of the cube-root compander: (sqrt(3) pi / 2) sigma^2 / 4^R.
  const double pd = std::sqrt(3.0) * std::numbers::pi / 2.0 * std::ldexp(1.0, -16);
  CHECK(gaussian_compander_mse({1.0, 0.0, kCompanderSpread}, 8) == doctest::Approx(pd).epsilon(0.02));
  CHECK(gaussian_compander_mse({1.0, 0.0, kCompanderSpread}, 5) < gaussian_compander_mse({1.0}, 5));
  CHECK(gaussian_compander_mse({3.0}, 4) == doctest::Approx(9.0 * gaussian_compander_mse({1.0}, 4)));
}
