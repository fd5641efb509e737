#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "scs/codec.hpp"
#include "scs/harness.hpp"

namespace {

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed for " + path);
}

void print_rates(const scs::RateReport& r) {
  std::printf("bpp_base %.4f  bpp_enh %.4f  bpp_net %.4f  bpp_total %.4f\n", r.bpp_base, r.bpp_enh, r.bpp_net,
              r.bpp_total);
}

struct EncodeArgs {
  std::string in, out, mode = "predictive";
  std::uint32_t mb = 0, me = 0;
  int rb = 5, re = 5, base_width = 0;
  std::uint64_t seed = 1;
  scs::HadamardOrdering ordering = scs::HadamardOrdering::signed_sylvester;
};

int cmd_encode(const EncodeArgs& a) {
  const scs::Image img = scs::load_pgm(a.in);
  scs::ScalableBitstream s;
  if (a.mode == "nonscalable") {
    s = scs::encode_nonscalable(img, a.me, a.re, scs::enhancement_seed(a.seed));
  } else {
    const int bw = a.base_width > 0 ? a.base_width : img.width() / 2;
    const std::uint32_t mb = a.mb > 0 ? a.mb : static_cast<std::uint32_t>(img.size() / 16);
    const auto cfg = scs::SensingConfig::make(img.width(), img.height(), bw, mb, a.me, a.seed,
                                              scs::enhancement_seed(a.seed), a.ordering);
    if (a.mode == "predictive") {
      s = scs::encode(img, cfg, a.rb, a.re);
    } else if (a.mode == "separate") {
      s = scs::encode_separate(img, cfg, a.rb, a.re);
    } else {
      throw std::invalid_argument("unknown mode " + a.mode);
    }
  }
  const auto bytes = scs::serialize(s);
  write_file(a.out, bytes);
  std::printf("wrote %s (%zu bytes)\n", a.out.c_str(), bytes.size());
  print_rates(scs::rate_report(s, img));
  return 0;
}

struct DecodeArgs {
  std::string in, out, base, ref;
  int planes = -1, iters = 300;
};

int cmd_decode(const DecodeArgs& a) {
  if (a.out.empty() && a.base.empty()) throw std::invalid_argument("nothing to do: give --out and/or --base");
  const auto bytes = read_file(a.in);
  scs::ScalableBitstream s = scs::parse(bytes);
  if (a.planes >= 0) s = scs::truncate_enhancement(s, a.planes);
  scs::RecoveryOptions opt;
  opt.max_iters = a.iters;
  const bool ref = !a.ref.empty();
  const scs::Image original = ref ? scs::load_pgm(a.ref) : scs::Image();
  if (!a.base.empty()) {
    const scs::Image b = scs::decode_base(s, opt);
    scs::save_pgm(b, a.base);
    std::printf("base %dx%d -> %s", b.width(), b.height(), a.base.c_str());
    if (ref) std::printf("  psnr %.2f dB", scs::psnr(scs::downsample_block(original, original.width() / b.width()), b));
    std::printf("\n");
  }
  if (!a.out.empty()) {
    const scs::Image e = scs::decode_enhancement(s, opt);
    scs::save_pgm(e, a.out);
    std::printf("enhancement %dx%d -> %s", e.width(), e.height(), a.out.c_str());
    if (ref) std::printf("  psnr %.2f dB", scs::psnr(original, e));
    std::printf("\n");
  }
  return 0;
}

int cmd_preview(const std::string& in, const std::string& out) {
  const auto bytes = read_file(in);
  const scs::Preview p = scs::decode_preview(scs::parse(bytes));
  scs::save_pgm(p.image, out);
  std::printf("preview %dx%d -> %s\n", p.image.width(), p.image.height(), out.c_str());
  return 0;
}

int cmd_eval(const std::string& ref, const std::string& test) {
  const double v = scs::psnr(scs::load_pgm(ref), scs::load_pgm(test));
  std::printf("%.4f\n", v);
  return 0;
}

struct CompareArgs {
  std::vector<std::string> images;
  std::string out;
  int iters = 300;
};

int cmd_compare(scs::ExperimentSpec spec, const CompareArgs& a) {
  for (const auto& p : a.images) spec.images.emplace_back(p);
  spec.output_dir = a.out;
  spec.recovery.max_iters = a.iters;
  const scs::ComparisonReport r = scs::run_comparison(spec);
  std::cout << scs::gains_csv(r);
  return 0;
}

const std::map<std::string, scs::HadamardOrdering> kOrderings{
    {"sylvester", scs::HadamardOrdering::sylvester}, {"signed", scs::HadamardOrdering::signed_sylvester}};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scalable compressive imaging codec"};
  app.require_subcommand(1);

  EncodeArgs ea;
  auto* enc = app.add_subcommand("encode", "Encode a PGM image into a .scs stream");
  enc->add_option("--in", ea.in, "input PGM")->required()->check(CLI::ExistingFile);
  enc->add_option("--out", ea.out, "output stream")->required();
  enc->add_option("--mode", ea.mode, "predictive, separate or nonscalable")
      ->check(CLI::IsMember({"predictive", "separate", "nonscalable"}));
  enc->add_option("--mb", ea.mb, "base measurements (default n/16)");
  enc->add_option("--me", ea.me, "enhancement (or single-layer) measurements")->required();
  enc->add_option("--rb", ea.rb, "base rate in bits")->check(CLI::Range(1, 16));
  enc->add_option("--re", ea.re, "enhancement rate in bits")->check(CLI::Range(1, 16));
  enc->add_option("--base-width", ea.base_width, "base layer width (default width/2)");
  enc->add_option("--seed", ea.seed, "sensing seed");
  enc->add_option("--hadamard", ea.ordering, "base Hadamard matrix: sylvester or signed")
      ->transform(CLI::CheckedTransformer(kOrderings, CLI::ignore_case));

  DecodeArgs da;
  auto* dec = app.add_subcommand("decode", "Reconstruct the base and/or enhancement layer");
  dec->add_option("--in", da.in, "input stream")->required()->check(CLI::ExistingFile);
  dec->add_option("--out", da.out, "enhancement PGM");
  dec->add_option("--base", da.base, "base layer PGM");
  dec->add_option("--planes", da.planes, "keep only this many enhancement bit-planes");
  dec->add_option("--iters", da.iters, "solver iterations")->check(CLI::PositiveNumber);
  dec->add_option("--ref", da.ref, "original PGM for PSNR")->check(CLI::ExistingFile);

  std::string pin, pout;
  auto* pre = app.add_subcommand("preview", "Write the fast preview of a stream");
  pre->add_option("--in", pin, "input stream")->required()->check(CLI::ExistingFile);
  pre->add_option("--out", pout, "preview PGM")->required();

  std::string eref, etest;
  auto* ev = app.add_subcommand("eval", "PSNR between two PGM images");
  ev->add_option("--ref", eref, "reference PGM")->required()->check(CLI::ExistingFile);
  ev->add_option("--test", etest, "test PGM")->required()->check(CLI::ExistingFile);

  scs::ExperimentSpec spec;
  CompareArgs ca;
  auto* cmp = app.add_subcommand("compare", "Predictive vs separate vs nonscalable at fixed total rates");
  cmp->add_option("--images", ca.images, "test PGMs")->required()->check(CLI::ExistingFile);
  cmp->add_option("--out", ca.out, "output directory for the CSV files");
  cmp->add_option("--size", spec.size, "working resolution");
  cmp->add_option("--base-width", spec.base_width, "base layer width");
  cmp->add_option("--mb", spec.m_base, "base measurements");
  cmp->add_option("--rb", spec.rate_base, "base rate")->check(CLI::Range(1, 16));
  cmp->add_option("--bpp", spec.bpp, "total net rates");
  cmp->add_option("--seeds", spec.seeds, "seeds");
  cmp->add_option("--enh-rates", spec.enh_rates, "R_E grid of the scalable methods");
  cmp->add_option("--ns-rates", spec.nonscalable_rates, "R grid of the nonscalable method");
  cmp->add_option("--hadamard", spec.ordering, "base Hadamard matrix: sylvester or signed")
      ->transform(CLI::CheckedTransformer(kOrderings, CLI::ignore_case));
  cmp->add_option("--iters", ca.iters, "solver iterations")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*enc) return cmd_encode(ea);
    if (*dec) return cmd_decode(da);
    if (*pre) return cmd_preview(pin, pout);
    if (*ev) return cmd_eval(eref, etest);
    if (*cmp) return cmd_compare(spec, ca);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "scs: %s\n", e.what());
    return 1;
  }
  return 1;
}
