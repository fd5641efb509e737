#include "scs/harness.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace scs {

namespace {

struct Cell {
  std::size_t image;
  std::size_t bpp;
  std::size_t seed;
  Method method;
  int rate;
};

std::uint32_t scalable_measurements(const ExperimentSpec& s, std::size_t n, double bpp, int rate) {
  const double left = bpp * static_cast<double>(n) - static_cast<double>(s.m_base) * s.rate_base;
  return left <= 0.0 ? 0u : static_cast<std::uint32_t>(std::floor(left / rate));
}

std::uint32_t nonscalable_measurements(std::size_t n, double bpp, int rate) {
  return static_cast<std::uint32_t>(std::floor(bpp * static_cast<double>(n) / rate));
}

std::string fmt(double v, int prec) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(prec);
  os << v;
  return os.str();
}

std::string rows_csv(const std::vector<ComparisonRow>& rows) {
  std::string out = "image,target_bpp,bpp_net,bpp_total,method,m,R,psnr,seed\n";
  for (const auto& r : rows) {
    out += r.image + "," + fmt(r.target_bpp, 4) + "," + fmt(r.bpp_net, 6) + "," + fmt(r.bpp_total, 6) + "," +
           method_name(r.method) + "," + std::to_string(r.m) + "," + std::to_string(r.rate) + "," +
           fmt(r.psnr, 4) + "," + std::to_string(r.seed) + "\n";
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

bool feasible(std::uint32_t m, std::size_t n) { return m > 0 && m <= n; }

void check_rate(int r) {
  if (r < kMinRate || r > kMaxRate) throw std::invalid_argument("grid rate out of range: " + std::to_string(r));
}

}  // namespace

const char* method_name(Method m) {
  switch (m) {
    case Method::predictive: return "predictive";
    case Method::separate: return "separate";
    case Method::nonscalable: return "nonscalable";
  }
  return "?";
}

void ExperimentSpec::validate() const {
  if (images.empty() || bpp.empty() || seeds.empty() || enh_rates.empty() || nonscalable_rates.empty()) {
    throw std::invalid_argument("experiment grid is empty");
  }
  for (int r : enh_rates) check_rate(r);
  for (int r : nonscalable_rates) check_rate(r);
  const SensingConfig probe = SensingConfig::make(size, size, base_width, m_base, 1, 0, 0);
  for (double b : bpp) {
    const bool scalable = std::ranges::any_of(
        enh_rates, [&](int r) { return feasible(scalable_measurements(*this, probe.n(), b, r), probe.n()); });
    if (!scalable) throw std::invalid_argument("rate " + fmt(b, 4) + " bpp leaves no valid enhancement layer");
    const bool single = std::ranges::any_of(
        nonscalable_rates, [&](int r) { return feasible(nonscalable_measurements(probe.n(), b, r), probe.n()); });
    if (!single) throw std::invalid_argument("rate " + fmt(b, 4) + " bpp is infeasible for the nonscalable grid");
  }
}

Image load_test_image(const std::filesystem::path& path, int size) {
  Image img = load_pgm(path);
  if (img.width() != img.height()) throw std::invalid_argument(path.string() + ": test images must be square");
  if (img.width() < size || img.width() % size != 0) {
    throw std::invalid_argument(path.string() + ": cannot reduce to " + std::to_string(size));
  }
  return img.width() == size ? img : downsample_block(img, img.width() / size);
}

ComparisonReport run_comparison(const ExperimentSpec& spec) {
  spec.validate();
  std::vector<Image> images;
  std::vector<std::string> names;
  for (const auto& p : spec.images) {
    images.push_back(load_test_image(p, spec.size));
    names.push_back(p.stem().string());
  }

  std::vector<Cell> cells;
  for (std::size_t i = 0; i < images.size(); ++i) {
    for (std::size_t b = 0; b < spec.bpp.size(); ++b) {
      for (std::size_t s = 0; s < spec.seeds.size(); ++s) {
        const double bpp = spec.bpp[b];
        const std::size_t n = images[i].size();
        for (Method m : {Method::predictive, Method::separate}) {
          for (int r : spec.enh_rates) {
            if (feasible(scalable_measurements(spec, n, bpp, r), n)) cells.push_back({i, b, s, m, r});
          }
        }
        for (int r : spec.nonscalable_rates) {
          if (feasible(nonscalable_measurements(n, bpp, r), n)) cells.push_back({i, b, s, Method::nonscalable, r});
        }
      }
    }
  }

  std::vector<ComparisonRow> rows(cells.size());
  std::vector<char> done(cells.size(), 0);
  std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t k = 0; k < cells.size(); ++k) {
    try {
      const Cell& c = cells[k];
      const Image& img = images[c.image];
      const double bpp = spec.bpp[c.bpp];
      const std::uint64_t seed = spec.seeds[c.seed];
      ScalableBitstream stream;
      if (c.method == Method::nonscalable) {
        const std::uint32_t m = nonscalable_measurements(img.size(), bpp, c.rate);
        stream = encode_nonscalable(img, m, c.rate, enhancement_seed(seed));
      } else {
        const std::uint32_t m = scalable_measurements(spec, img.size(), bpp, c.rate);
        const SensingConfig cfg =
            SensingConfig::make(spec.size, spec.size, spec.base_width, spec.m_base, m, seed,
                                enhancement_seed(seed), spec.ordering);
        stream = c.method == Method::predictive ? encode(img, cfg, spec.rate_base, c.rate)
                                                : encode_separate(img, cfg, spec.rate_base, c.rate);
      }
      const Image rec = decode_enhancement(stream, spec.recovery);
      const RateReport rr = rate_report(stream, img, nullptr, &rec);
      rows[k] = {names[c.image], bpp, rr.bpp_net, rr.bpp_total, c.method, stream.header.m_enh, c.rate, rr.psnr_enh,
                 seed};
      done[k] = 1;
    } catch (...) {
#pragma omp critical(scs_harness_failure)
      if (!failure) failure = std::current_exception();
    }
  }

  ComparisonReport report;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (done[k]) report.grid.push_back(rows[k]);
  }
  if (failure) {
    if (!spec.output_dir.empty()) {
      std::filesystem::create_directories(spec.output_dir);
      write_file(spec.output_dir / "grid.csv", grid_csv(report));
    }
    std::rethrow_exception(failure);
  }

  // Best point per (image, rate, seed, method); ties keep the first listed R.
  std::map<std::tuple<std::size_t, std::size_t, std::size_t, int>, std::size_t> best;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const auto key = std::make_tuple(cells[k].image, cells[k].bpp, cells[k].seed, static_cast<int>(cells[k].method));
    auto it = best.find(key);
    if (it == best.end() || rows[k].psnr > rows[it->second].psnr) best[key] = k;
  }
  for (const auto& [key, k] : best) report.best.push_back(rows[k]);

  for (std::size_t i = 0; i < images.size(); ++i) {
    for (std::size_t b = 0; b < spec.bpp.size(); ++b) {
      GainRow g;
      g.image = names[i];
      g.target_bpp = spec.bpp[b];
      for (std::size_t s = 0; s < spec.seeds.size(); ++s) {
        auto at = [&](Method m) { return rows[best.at({i, b, s, static_cast<int>(m)})].psnr; };
        g.psnr_predictive += at(Method::predictive);
        g.psnr_separate += at(Method::separate);
        g.psnr_nonscalable += at(Method::nonscalable);
      }
      g.seeds = static_cast<int>(spec.seeds.size());
      g.psnr_predictive /= g.seeds;
      g.psnr_separate /= g.seeds;
      g.psnr_nonscalable /= g.seeds;
      g.gain_vs_separate = g.psnr_predictive - g.psnr_separate;
      g.gain_vs_nonscalable = g.psnr_predictive - g.psnr_nonscalable;
      report.gains.push_back(g);
    }
  }

  if (!spec.output_dir.empty()) write_report(report, spec.output_dir);
  return report;
}

std::string grid_csv(const ComparisonReport& report) { return rows_csv(report.grid); }
std::string best_csv(const ComparisonReport& report) { return rows_csv(report.best); }

std::string gains_csv(const ComparisonReport& report) {
  std::string out =
      "image,target_bpp,psnr_predictive,psnr_separate,psnr_nonscalable,gain_vs_separate,gain_vs_nonscalable,seeds\n";
  for (const auto& g : report.gains) {
    out += g.image + "," + fmt(g.target_bpp, 4) + "," + fmt(g.psnr_predictive, 4) + "," + fmt(g.psnr_separate, 4) +
           "," + fmt(g.psnr_nonscalable, 4) + "," + fmt(g.gain_vs_separate, 4) + "," +
           fmt(g.gain_vs_nonscalable, 4) + "," + std::to_string(g.seeds) + "\n";
  }
  return out;
}

void write_report(const ComparisonReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_file(dir / "grid.csv", grid_csv(report));
  write_file(dir / "results.csv", best_csv(report));
  write_file(dir / "gains.csv", gains_csv(report));
}

}  // namespace scs
