#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "scs/harness.hpp"

using namespace scs;

namespace {

ExperimentSpec small_spec() {
  ExperimentSpec s;
  s.images = {oracle::data_path("cameraman.pgm")};
  s.size = 64;
  s.base_width = 32;
  s.m_base = 256;
  s.rate_base = 5;
  s.enh_rates = {4, 5};
  s.nonscalable_rates = {5, 6};
  s.bpp = {1.0};
  s.seeds = {3};
  s.recovery.max_iters = 60;
  return s;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("single image, rate and seed gives one best row per method") {
  const ExperimentSpec spec = small_spec();
  const ComparisonReport r = run_comparison(spec);
  REQUIRE(r.grid.size() == 6);
  REQUIRE(r.best.size() == 3);
  CHECK(r.best[0].method == Method::predictive);
  CHECK(r.best[1].method == Method::separate);
  CHECK(r.best[2].method == Method::nonscalable);
  REQUIRE(r.gains.size() == 1);
  CHECK(r.gains[0].seeds == 1);
  CHECK(r.gains[0].gain_vs_separate == doctest::Approx(r.best[0].psnr - r.best[1].psnr));
  CHECK(r.gains[0].gain_vs_nonscalable == doctest::Approx(r.best[0].psnr - r.best[2].psnr));
  for (const auto& row : r.best) {
    double top = -1.0;
    for (const auto& g : r.grid) {
      if (g.method == row.method) top = std::max(top, g.psnr);
    }
    CHECK(row.psnr == top);
  }
}

TEST_CASE("grid points respect the bit budget") {
  const ExperimentSpec spec = small_spec();
  const ComparisonReport r = run_comparison(spec);
  const double n = 64.0 * 64.0;
  for (const auto& row : r.grid) {
    CHECK(row.bpp_net <= row.target_bpp);
    if (row.method == Method::nonscalable) {
      CHECK(row.m == static_cast<std::uint32_t>(std::floor(n / row.rate)));
      CHECK(row.bpp_net == row.m * row.rate / n);
    } else {
      CHECK(row.m == static_cast<std::uint32_t>(std::floor((n - 256.0 * 5) / row.rate)));
      CHECK(row.bpp_net == (256.0 * 5 + row.m * row.rate) / n);
    }
    CHECK(row.bpp_net > row.target_bpp - static_cast<double>(row.rate) / n);
    CHECK(row.bpp_total > row.bpp_net);
  }
}

TEST_CASE("CSV rates match the container bytes") {
  ExperimentSpec spec = small_spec();
  spec.output_dir = std::filesystem::temp_directory_path() / "scs_harness_csv";
  std::filesystem::remove_all(spec.output_dir);
  const ComparisonReport r = run_comparison(spec);
  CHECK(slurp(spec.output_dir / "grid.csv") == grid_csv(r));
  CHECK(slurp(spec.output_dir / "results.csv") == best_csv(r));
  CHECK(slurp(spec.output_dir / "gains.csv") == gains_csv(r));

  const Image img = load_test_image(spec.images[0], 64);
  for (const auto& row : r.grid) {
    ScalableBitstream s;
    if (row.method == Method::nonscalable) {
      s = encode_nonscalable(img, row.m, row.rate, enhancement_seed(row.seed));
    } else {
      const auto cfg = SensingConfig::make(64, 64, 32, 256, row.m, row.seed, enhancement_seed(row.seed));
      s = row.method == Method::predictive ? encode(img, cfg, 5, row.rate) : encode_separate(img, cfg, 5, row.rate);
    }
    CHECK(row.bpp_total == static_cast<double>(serialize(s).size() * 8) / 4096.0);
  }
  std::istringstream lines(grid_csv(r));
  std::string header;
  std::getline(lines, header);
  CHECK(header == "image,target_bpp,bpp_net,bpp_total,method,m,R,psnr,seed");
  std::string first;
  std::getline(lines, first);
  CHECK(first.rfind("cameraman,1.0000,", 0) == 0);
  std::filesystem::remove_all(spec.output_dir);
}

TEST_CASE("comparison reruns are identical") {
  const ExperimentSpec spec = small_spec();
  const ComparisonReport a = run_comparison(spec);
  const ComparisonReport b = run_comparison(spec);
  CHECK(grid_csv(a) == grid_csv(b));
  CHECK(gains_csv(a) == gains_csv(b));
}

TEST_CASE("experiment validation") {
  ExperimentSpec s = small_spec();
  s.images.clear();
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = small_spec();
  s.bpp = {0.25};  // the base layer alone costs 0.3125 bpp
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = small_spec();
  s.nonscalable_rates = {};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = small_spec();
  s.bpp = {8.0};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = small_spec();
  s.m_base = 300;
  CHECK_THROWS(s.validate());
  s = small_spec();
  s.enh_rates = {0, 4};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  CHECK_NOTHROW(small_spec().validate());
  CHECK_THROWS(load_test_image(oracle::data_path("cameraman.pgm"), 100));
  CHECK(std::string(method_name(Method::separate)) == "separate");
}

TEST_CASE("grid points outside the budget are skipped") {
  ExperimentSpec spec = small_spec();
  spec.bpp = {1.5};
  spec.enh_rates = {1, 4};       // R_E = 1 would need 4864 > 4096 measurements
  spec.nonscalable_rates = {1, 5};  // R = 1 would need 6144
  const ComparisonReport r = run_comparison(spec);
  REQUIRE(r.grid.size() == 3);
  for (const auto& row : r.grid) CHECK(row.rate != 1);
  CHECK(r.best.size() == 3);
}
