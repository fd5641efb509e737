#include "scs/codec.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <limits>

namespace scs {

namespace {

constexpr std::uint8_t kMagic[4] = {'S', 'C', 'S', '1'};

class Writer {
 public:
  explicit Writer(std::vector<std::uint8_t>& out) : out_(out) {}

  template <typename T>
  void put(T v) {
    using U = std::make_unsigned_t<T>;
    auto u = static_cast<U>(v);
    for (std::size_t i = 0; i < sizeof(T); ++i) out_.push_back(static_cast<std::uint8_t>(u >> (8 * i)));
  }
  void put_f32(float f) { put(std::bit_cast<std::uint32_t>(f)); }
  void bytes(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }

 private:
  std::vector<std::uint8_t>& out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  template <typename T>
  T get() {
    using U = std::make_unsigned_t<T>;
    need(sizeof(T));
    U u = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) u |= static_cast<U>(static_cast<U>(in_[pos_ + i]) << (8 * i));
    pos_ += sizeof(T);
    return static_cast<T>(u);
  }
  float get_f32() { return std::bit_cast<float>(get<std::uint32_t>()); }
  std::span<const std::uint8_t> bytes(std::size_t n) {
    need(n);
    auto s = in_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (in_.size() - pos_ < n) throw BitstreamError("bitstream truncated inside the header");
  }

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

std::size_t plane_bytes(std::size_t count) { return (count + 7) / 8; }

float to_f32(double v) {
  if (!std::isfinite(v) || std::abs(v) > std::numeric_limits<float>::max()) {
    throw std::invalid_argument("header value not representable as binary32");
  }
  return static_cast<float>(v);
}

// Sigma as stored in the header; a positive binary32 shared by both ends.
CompanderModel header_model(double sigma) {
  float s = to_f32(sigma);
  if (!(s > 0.0f)) s = 1.0f;
  return {static_cast<double>(s), 0.0, kCompanderSpread};
}

EmbeddedCode read_code(Reader& r, int rate, std::size_t count, float sigma) {
  EmbeddedCode code(rate, count, QuantizerKind::companded, header_model(sigma), {});
  const std::size_t pb = plane_bytes(count);
  const unsigned pad = static_cast<unsigned>(pb * 8 - count);
  for (int p = 0; p < rate; ++p) {
    auto src = r.bytes(pb);
    if (pad != 0 && (src.back() & ((1u << pad) - 1u)) != 0) throw BitstreamError("nonzero bit-plane padding");
    std::ranges::copy(src, code.plane(p).begin());
  }
  return code;
}

void check_image(const Image& img) {
  if (img.width() > 0xffff || img.height() > 0xffff) throw std::invalid_argument("image too large for the container");
}

void check_rate_arg(int rate) {
  if (rate < kMinRate || rate > kMaxRate) throw std::invalid_argument("quantization rate must be in [1, 16]");
}

StreamHeader scalable_header(const SensingConfig& c, StreamMode mode, int rate_base, int rate_enh) {
  c.validate();
  if (c.width > 0xffff || c.height > 0xffff) throw std::invalid_argument("image too large for the container");
  check_rate_arg(rate_base);
  check_rate_arg(rate_enh);
  if (c.m_enh == 0) throw std::invalid_argument("enhancement layer needs at least one measurement");
  StreamHeader h;
  h.mode = mode;
  h.width = static_cast<std::uint16_t>(c.width);
  h.height = static_cast<std::uint16_t>(c.height);
  h.base_width = static_cast<std::uint16_t>(c.base_width);
  h.base_height = static_cast<std::uint16_t>(c.base_height);
  h.preview_width = static_cast<std::uint16_t>(c.preview_width);
  h.m_base = c.m_base;
  h.m_enh = c.m_enh;
  h.rate_base = static_cast<std::uint8_t>(rate_base);
  h.rate_enh = static_cast<std::uint8_t>(rate_enh);
  h.seed_base = c.seed_base;
  h.seed_enh = c.seed_enh;
  h.ordering = c.ordering;
  return h;
}

// Base layer shared by the predictive and separate encoders. Measurement 0
// (the image sum) travels in the header; the code carries 0 in its slot and
// sigma is fitted on the remaining measurements.
void encode_base(const Image& img, const DssOperator& dss, ScalableBitstream& s, EncoderTrace* trace) {
  std::vector<double> y = apply_augmented_dss(dss, img).values;
  s.header.dc_value = to_f32(y[0]);
  std::vector<double> ac = y;
  ac[0] = 0.0;
  const CompanderModel model = header_model(fit_model(std::span<const double>(ac).subspan(1)).sigma);
  s.header.sigma_base = static_cast<float>(model.sigma);
  s.base_code = quantize(ac, s.header.rate_base, model);
  if (trace) trace->y_base = std::move(y);
}

std::vector<double> base_measurements(const ScalableBitstream& s) {
  if (!s.base_code) throw std::invalid_argument("stream carries no base layer");
  std::vector<double> y = dequantize(*s.base_code);
  y[0] = static_cast<double>(s.header.dc_value);
  return y;
}

void require_scalable(const ScalableBitstream& s) {
  if (s.header.mode == StreamMode::nonscalable) throw std::invalid_argument("stream has no base layer");
}

}  // namespace

SensingConfig ScalableBitstream::config() const {
  require_scalable(*this);
  SensingConfig c;
  c.width = header.width;
  c.height = header.height;
  c.base_width = header.base_width;
  c.base_height = header.base_height;
  c.preview_width = header.preview_width;
  c.preview_height = header.preview_width == 0 ? 0 : static_cast<int>(header.m_base / header.preview_width);
  c.m_base = header.m_base;
  c.m_enh = header.m_enh;
  c.seed_base = header.seed_base;
  c.seed_enh = header.seed_enh;
  c.ordering = header.ordering;
  return c;
}

std::size_t base_prefix_bytes(const StreamHeader& h) {
  return StreamHeader::kBytes + static_cast<std::size_t>(h.rate_base) * plane_bytes(h.m_base);
}

std::vector<std::uint8_t> serialize(const ScalableBitstream& s) {
  const StreamHeader& h = s.header;
  const bool scalable = h.mode != StreamMode::nonscalable;
  if (scalable != s.base_code.has_value()) throw std::invalid_argument("base layer presence does not match the mode");
  if (s.base_code && (s.base_code->rate() != h.rate_base || s.base_code->count() != h.m_base)) {
    throw std::invalid_argument("base code does not match the header");
  }
  if (s.enh_code ? (s.enh_code->rate() != h.rate_enh || s.enh_code->count() != h.m_enh) : h.rate_enh != 0) {
    throw std::invalid_argument("enhancement code does not match the header");
  }

  std::vector<std::uint8_t> out;
  out.reserve(base_prefix_bytes(h) + static_cast<std::size_t>(h.rate_enh) * plane_bytes(h.m_enh));
  Writer w(out);
  for (std::uint8_t b : kMagic) w.put(b);
  w.put(h.version);
  w.put(static_cast<std::uint8_t>(h.mode));
  w.put(h.width);
  w.put(h.height);
  w.put(h.base_width);
  w.put(h.base_height);
  w.put(h.preview_width);
  w.put(h.m_base);
  w.put(h.m_enh);
  w.put(h.rate_base);
  w.put(h.rate_enh);
  w.put(h.seed_base);
  w.put(h.seed_enh);
  w.put_f32(h.sigma_base);
  w.put_f32(h.sigma_res);
  w.put_f32(h.dc_value);
  w.put(static_cast<std::uint8_t>(h.interpolator));
  w.put(static_cast<std::uint8_t>(h.ordering));
  if (s.base_code) {
    for (int p = 0; p < s.base_code->rate(); ++p) w.bytes(s.base_code->plane(p));
  }
  if (s.enh_code) {
    for (int p = 0; p < s.enh_code->rate(); ++p) w.bytes(s.enh_code->plane(p));
  }
  return out;
}

ScalableBitstream parse(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  if (bytes.size() < 4 || !std::equal(kMagic, kMagic + 4, bytes.begin())) throw BitstreamError("bad magic");
  r.bytes(4);
  ScalableBitstream s;
  StreamHeader& h = s.header;
  h.version = r.get<std::uint8_t>();
  if (h.version != kStreamVersion) throw BitstreamError("unsupported version " + std::to_string(h.version));
  const auto mode = r.get<std::uint8_t>();
  if (mode > 2) throw BitstreamError("unknown mode " + std::to_string(mode));
  h.mode = static_cast<StreamMode>(mode);
  h.width = r.get<std::uint16_t>();
  h.height = r.get<std::uint16_t>();
  h.base_width = r.get<std::uint16_t>();
  h.base_height = r.get<std::uint16_t>();
  h.preview_width = r.get<std::uint16_t>();
  h.m_base = r.get<std::uint32_t>();
  h.m_enh = r.get<std::uint32_t>();
  h.rate_base = r.get<std::uint8_t>();
  h.rate_enh = r.get<std::uint8_t>();
  h.seed_base = r.get<std::uint64_t>();
  h.seed_enh = r.get<std::uint64_t>();
  h.sigma_base = r.get_f32();
  h.sigma_res = r.get_f32();
  h.dc_value = r.get_f32();
  const auto interp = r.get<std::uint8_t>();
  const auto order = r.get<std::uint8_t>();
  if (interp != 0) throw BitstreamError("unknown interpolator id " + std::to_string(interp));
  if (order > 1) throw BitstreamError("unknown Hadamard ordering id " + std::to_string(order));
  h.ordering = static_cast<HadamardOrdering>(order);

  const auto bad_rate = [](int rate) { return rate < kMinRate || rate > kMaxRate; };
  if (h.width == 0 || h.height == 0 || !is_pow2(h.width) || !is_pow2(h.height)) {
    throw BitstreamError("invalid image size");
  }
  if (h.m_enh == 0 || h.m_enh > static_cast<std::size_t>(h.width) * h.height) {
    throw BitstreamError("invalid enhancement measurement count");
  }
  if (h.rate_enh > kMaxRate) throw BitstreamError("invalid enhancement rate");
  if (!std::isfinite(h.sigma_res) || !(h.sigma_res > 0.0f)) throw BitstreamError("invalid enhancement sigma");

  if (h.mode == StreamMode::nonscalable) {
    if (h.m_base != 0 || h.rate_base != 0 || h.base_width != 0 || h.base_height != 0 || h.preview_width != 0 ||
        h.seed_base != 0 || h.sigma_base != 0.0f || h.dc_value != 0.0f ||
        h.ordering != HadamardOrdering::sylvester) {
      throw BitstreamError("nonscalable stream with base-layer fields set");
    }
  } else {
    try {
      s.config().validate();
    } catch (const std::invalid_argument& e) {
      throw BitstreamError(std::string("invalid geometry: ") + e.what());
    }
    if (s.config().preview_height * h.preview_width != static_cast<int>(h.m_base)) {
      throw BitstreamError("invalid geometry: m_B does not match the preview size");
    }
    if (bad_rate(h.rate_base)) throw BitstreamError("invalid base rate");
    if (!std::isfinite(h.sigma_base) || !(h.sigma_base > 0.0f)) throw BitstreamError("invalid base sigma");
    if (!std::isfinite(h.dc_value)) throw BitstreamError("invalid DC value");
    if (r.remaining() < static_cast<std::size_t>(h.rate_base) * plane_bytes(h.m_base)) {
      throw BitstreamError("bitstream truncated inside the base layer");
    }
    s.base_code = read_code(r, h.rate_base, h.m_base, h.sigma_base);
  }

  const std::size_t pb = plane_bytes(h.m_enh);
  const std::size_t rest = r.remaining();
  if (rest % pb != 0) throw BitstreamError("bitstream truncated inside an enhancement bit-plane");
  const std::size_t planes = rest / pb;
  if (planes > h.rate_enh) throw BitstreamError("trailing bytes after the enhancement layer");
  if (planes == 0 && h.mode == StreamMode::nonscalable) throw BitstreamError("nonscalable stream without payload");
  h.rate_enh = static_cast<std::uint8_t>(planes);
  if (planes > 0) s.enh_code = read_code(r, static_cast<int>(planes), h.m_enh, h.sigma_res);
  return s;
}

ScalableBitstream truncate_enhancement(const ScalableBitstream& stream, int planes) {
  if (planes < 0 || planes > stream.header.rate_enh) throw std::invalid_argument("plane count out of range");
  if (planes == 0 && stream.header.mode == StreamMode::nonscalable) {
    throw std::invalid_argument("a nonscalable stream needs at least one plane");
  }
  ScalableBitstream out = stream;
  out.header.rate_enh = static_cast<std::uint8_t>(planes);
  if (planes == 0) {
    out.enh_code.reset();
  } else {
    out.enh_code = truncate(*stream.enh_code, planes);
  }
  return out;
}

// ---------------------------------------------------------------------------

PredictionTrace decode_prediction(const ScalableBitstream& stream) {
  require_scalable(stream);
  const SensingConfig c = stream.config();
  PredictionTrace t;
  t.y_base_hat = base_measurements(stream);
  t.preview = compute_preview({Layer::base, t.y_base_hat}, c);
  t.prediction = predict_full(t.preview, c);
  const RademacherOperator phi(c.m_enh, c.n(), c.seed_enh);
  t.y_pred = predict_measurements(t.prediction, phi).values;
  return t;
}

ScalableBitstream encode(const Image& img, const SensingConfig& config, int rate_base, int rate_enh,
                         EncoderTrace* trace) {
  check_image(img);
  if (img.width() != config.width || img.height() != config.height) {
    throw std::invalid_argument("image does not match the sensing config");
  }
  ScalableBitstream s;
  s.header = scalable_header(config, StreamMode::predictive, rate_base, rate_enh);
  const DssOperator dss(config);
  encode_base(img, dss, s, trace);

  // The prediction is formed from the quantized base layer exactly as the decoder will.
  PredictionTrace pred = decode_prediction(s);
  const RademacherOperator phi(config.m_enh, config.n(), config.seed_enh);
  std::vector<double> y_enh = phi.apply(img.pixels());
  std::vector<double> residual(y_enh.size());
  for (std::size_t i = 0; i < residual.size(); ++i) residual[i] = y_enh[i] - pred.y_pred[i];

  const CompanderModel model = header_model(fit_model(residual).sigma);
  s.header.sigma_res = static_cast<float>(model.sigma);
  s.enh_code = quantize(residual, rate_enh, model);
  if (trace) {
    trace->y_enh = std::move(y_enh);
    trace->coded = std::move(residual);
    trace->prediction = std::move(pred);
  }
  return s;
}

ScalableBitstream encode_separate(const Image& img, const SensingConfig& config, int rate_base, int rate_enh,
                                  EncoderTrace* trace) {
  check_image(img);
  if (img.width() != config.width || img.height() != config.height) {
    throw std::invalid_argument("image does not match the sensing config");
  }
  ScalableBitstream s;
  s.header = scalable_header(config, StreamMode::separate, rate_base, rate_enh);
  const DssOperator dss(config);
  encode_base(img, dss, s, trace);

  const RademacherOperator phi(config.m_enh, config.n(), config.seed_enh);
  std::vector<double> y_enh = phi.apply(img.pixels());
  const CompanderModel model = header_model(fit_model(y_enh).sigma);
  s.header.sigma_res = static_cast<float>(model.sigma);
  s.enh_code = quantize(y_enh, rate_enh, model);
  if (trace) {
    trace->coded = y_enh;
    trace->y_enh = std::move(y_enh);
  }
  return s;
}

ScalableBitstream encode_nonscalable(const Image& img, std::uint32_t measurements, int rate, std::uint64_t seed,
                                     EncoderTrace* trace) {
  check_image(img);
  check_rate_arg(rate);
  if (measurements == 0 || measurements > img.size()) throw std::invalid_argument("measurement count out of range");
  ScalableBitstream s;
  StreamHeader& h = s.header;
  h.mode = StreamMode::nonscalable;
  h.width = static_cast<std::uint16_t>(img.width());
  h.height = static_cast<std::uint16_t>(img.height());
  h.m_enh = measurements;
  h.rate_enh = static_cast<std::uint8_t>(rate);
  h.seed_enh = seed;
  h.sigma_base = 0.0f;

  const RademacherOperator phi(measurements, img.size(), seed);
  std::vector<double> y = phi.apply(img.pixels());
  const CompanderModel model = header_model(fit_model(y).sigma);
  h.sigma_res = static_cast<float>(model.sigma);
  s.enh_code = quantize(y, rate, model);
  if (trace) {
    trace->coded = y;
    trace->y_enh = std::move(y);
  }
  return s;
}

Preview decode_preview(const ScalableBitstream& stream) {
  require_scalable(stream);
  return compute_preview({Layer::base, base_measurements(stream)}, stream.config());
}

Image decode_base(const ScalableBitstream& stream, const RecoveryOptions& options) {
  require_scalable(stream);
  const SensingConfig c = stream.config();
  const DssOperator dss(c);
  const double noise = gaussian_compander_mse(stream.base_code->model(), stream.base_code->rate());
  return recover_base(base_measurements(stream), noise, dss, options);
}

Image decode_enhancement(const ScalableBitstream& stream, const RecoveryOptions& options) {
  if (!stream.enh_code) throw std::invalid_argument("stream carries no enhancement layer");
  const EmbeddedCode& code = *stream.enh_code;
  const double noise = gaussian_compander_mse(code.model(), code.rate());
  const std::vector<double> yq = dequantize(code);
  const StreamHeader& h = stream.header;
  const std::size_t n = static_cast<std::size_t>(h.width) * h.height;
  const RademacherOperator phi(h.m_enh, n, h.seed_enh);

  if (h.mode == StreamMode::predictive) {
    const PredictionTrace pred = decode_prediction(stream);
    return recover_enhancement(yq, pred.y_pred, noise, phi, stream.config(), options);
  }
  TvProblem p;
  p.op = &phi;
  p.y = yq;
  p.width = h.width;
  p.height = h.height;
  p.lambda = lambda_for_noise(noise, phi.rows(), phi.cols());
  p.max_iters = options.max_iters;
  p.tol = options.tol;
  p.params = options.params;
  return solve_tv(p).image;
}

RateReport rate_report(const ScalableBitstream& stream, const Image& original, const Image* base,
                       const Image* enhancement) {
  const StreamHeader& h = stream.header;
  const std::size_t n = static_cast<std::size_t>(h.width) * h.height;
  if (original.size() != n) throw std::invalid_argument("original does not match the stream size");
  RateReport r;
  r.header_bits = StreamHeader::kBytes * 8;
  if (stream.base_code) {
    r.base_bits = stream.base_code->bit_count();
    r.padding_bits += static_cast<std::size_t>(h.rate_base) * (plane_bytes(h.m_base) * 8 - h.m_base);
  }
  if (stream.enh_code) {
    r.enh_bits = stream.enh_code->bit_count();
    r.padding_bits += static_cast<std::size_t>(h.rate_enh) * (plane_bytes(h.m_enh) * 8 - h.m_enh);
  }
  const double dn = static_cast<double>(n);
  r.bpp_base = static_cast<double>(r.base_bits) / dn;
  r.bpp_enh = static_cast<double>(r.enh_bits) / dn;
  r.bpp_net = r.bpp_base + r.bpp_enh;
  r.bpp_total = static_cast<double>(r.header_bits + r.padding_bits + r.base_bits + r.enh_bits) / dn;

  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  r.psnr_base = nan;
  r.psnr_enh = nan;
  if (base != nullptr && h.mode != StreamMode::nonscalable) {
    r.psnr_base = psnr(downsample_block(original, h.width / h.base_width), *base);
  }
  if (enhancement != nullptr) r.psnr_enh = psnr(original, *enhancement);
  return r;
}

}  // namespace scs
