#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "scs/codec.hpp"

namespace scs {

enum class Method : std::uint8_t { predictive, separate, nonscalable };

const char* method_name(Method m);

/// Comparison of the three pipelines at fixed total rates.
///
/// For every rate R in a method's list the measurement count is the largest
/// one that fits the bit budget: m_E = floor((bpp n - m_B R_B) / R_E) for the
/// scalable methods and m = floor(bpp n / R) for the nonscalable one. Any
/// such point is within one measurement's worth of bits of the budget. Rates
/// whose count is 0 or exceeds n are skipped.
struct ExperimentSpec {
  std::vector<std::filesystem::path> images;
  int size = 128;                // images are block-averaged down to size x size
  int base_width = 64;
  std::uint32_t m_base = 1024;
  int rate_base = 5;
  HadamardOrdering ordering = HadamardOrdering::signed_sylvester;
  std::vector<int> enh_rates{1, 2, 3, 4, 5, 6};
  std::vector<int> nonscalable_rates{2, 3, 4, 5, 6, 7, 8, 9};
  std::vector<double> bpp{1.0, 1.5};   // net rate constraints
  std::vector<std::uint64_t> seeds{1, 2, 3};
  RecoveryOptions recovery{};
  std::filesystem::path output_dir;   // empty: nothing is written

  /// Throws std::invalid_argument on an empty grid, a rate outside [1, 16],
  /// or a budget that leaves some method without a feasible point.
  void validate() const;
};

/// One evaluated grid point.
struct ComparisonRow {
  std::string image;
  double target_bpp = 0.0;
  double bpp_net = 0.0;     // payload bits / n, from the container accounting
  double bpp_total = 0.0;   // including header and padding
  Method method = Method::predictive;
  std::uint32_t m = 0;      // m_E for the scalable methods
  int rate = 0;             // R_E, or R for the nonscalable method
  double psnr = 0.0;
  std::uint64_t seed = 0;
};

/// Seed-averaged best-per-method PSNRs of one (image, rate) pair.
struct GainRow {
  std::string image;
  double target_bpp = 0.0;
  double psnr_predictive = 0.0;
  double psnr_separate = 0.0;
  double psnr_nonscalable = 0.0;
  double gain_vs_separate = 0.0;
  double gain_vs_nonscalable = 0.0;
  int seeds = 0;
};

struct ComparisonReport {
  std::vector<ComparisonRow> grid;  // every evaluated point
  std::vector<ComparisonRow> best;  // best point per (image, rate, seed, method)
  std::vector<GainRow> gains;
};

/// Runs every (image, rate, seed, method, grid point) cell. Cells run in
/// parallel; rows come out sorted by image, rate, seed, method, R.
ComparisonReport run_comparison(const ExperimentSpec& spec);

std::string grid_csv(const ComparisonReport& report);
std::string best_csv(const ComparisonReport& report);
std::string gains_csv(const ComparisonReport& report);

/// Writes grid.csv, results.csv and gains.csv into `dir`.
void write_report(const ComparisonReport& report, const std::filesystem::path& dir);

/// Loads a PGM and block-averages it to size x size.
Image load_test_image(const std::filesystem::path& path, int size);

}  // namespace scs
