#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "scs/image.hpp"
#include "scs/preview.hpp"
#include "scs/quant.hpp"
#include "scs/recon.hpp"
#include "scs/sensing.hpp"
#include "scs/transform.hpp"

namespace scs {

/// Malformed, truncated or unsupported bitstream.
class BitstreamError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class StreamMode : std::uint8_t { predictive = 0, separate = 1, nonscalable = 2 };
enum class Interpolator : std::uint8_t { bilinear = 0 };

inline constexpr std::uint8_t kStreamVersion = 1;

/// Enhancement-layer seed paired with a user-facing seed.
constexpr std::uint64_t enhancement_seed(std::uint64_t seed) { return seed ^ 0x9e3779b97f4a7c15ULL; }

/// Fixed-size container header. Serialized little-endian, 56 bytes:
///
///   off size field
///    0   4   magic "SCS1"
///    4   1   version
///    5   1   mode (0 predictive, 1 separate, 2 nonscalable)
///    6   2   width
///    8   2   height
///   10   2   base_width
///   12   2   base_height
///   14   2   preview_width
///   16   4   m_B
///   20   4   m_E (measurement count of the single layer in nonscalable mode)
///   24   1   R_B
///   25   1   R_E
///   26   8   seed_B
///   34   8   seed_E
///   42   4   sigma_B   (binary32)
///   46   4   sigma_res (binary32; sigma of the enhancement-layer code)
///   50   4   dc_value  (binary32; base measurement 0)
///   54   1   interpolator id (0 bilinear)
///   55   1   Hadamard ordering id (0 Sylvester, 1 column-signed Sylvester)
///
/// followed by R_B base bit-planes of ceil(m_B / 8) bytes each, then R_E
/// enhancement bit-planes of ceil(m_E / 8) bytes each. Both codes use the
/// compander of deviation kCompanderSpread * sigma.
struct StreamHeader {
  std::uint8_t version = kStreamVersion;
  StreamMode mode = StreamMode::predictive;
  std::uint16_t width = 0;
  std::uint16_t height = 0;
  std::uint16_t base_width = 0;
  std::uint16_t base_height = 0;
  std::uint16_t preview_width = 0;
  std::uint32_t m_base = 0;
  std::uint32_t m_enh = 0;
  std::uint8_t rate_base = 0;
  std::uint8_t rate_enh = 0;
  std::uint64_t seed_base = 0;
  std::uint64_t seed_enh = 0;
  float sigma_base = 1.0f;
  float sigma_res = 1.0f;
  float dc_value = 0.0f;
  Interpolator interpolator = Interpolator::bilinear;
  HadamardOrdering ordering = HadamardOrdering::sylvester;

  static constexpr std::size_t kBytes = 56;

  bool operator==(const StreamHeader&) const = default;
};

struct ScalableBitstream {
  StreamHeader header;
  std::optional<EmbeddedCode> base_code;  // absent in nonscalable mode
  std::optional<EmbeddedCode> enh_code;   // residual / separate / single layer; absent in a base-only prefix

  /// Sensing geometry of a scalable stream.
  SensingConfig config() const;

  bool operator==(const ScalableBitstream&) const = default;
};

std::vector<std::uint8_t> serialize(const ScalableBitstream& stream);

/// Parses a container. A stream that ends exactly after the base planes
/// yields a base-only stream; one that ends on an enhancement plane boundary
/// yields the enhancement code at the reduced rate. Any other length is an error.
ScalableBitstream parse(std::span<const std::uint8_t> bytes);

/// Byte length of the base-decodable prefix (header plus base planes).
std::size_t base_prefix_bytes(const StreamHeader& header);

/// Drops enhancement bit-planes beyond `planes` (0 keeps the base only).
ScalableBitstream truncate_enhancement(const ScalableBitstream& stream, int planes);

/// Intermediate signals of the prediction branch, shared by encoder and decoder.
struct PredictionTrace {
  std::vector<double> y_base_hat;  // dequantized base measurements with the DC reattached
  Preview preview;
  Image prediction;                // interpolated preview at full resolution
  std::vector<double> y_pred;      // Phi_E applied to the prediction
};

struct EncoderTrace {
  std::vector<double> y_base;      // unquantized base measurements
  std::vector<double> y_enh;       // unquantized enhancement measurements
  std::vector<double> coded;       // vector actually quantized into the enhancement code
  PredictionTrace prediction;      // predictive mode only
};

/// Predictive scalable encoder. Deterministic in its arguments.
ScalableBitstream encode(const Image& img, const SensingConfig& config, int rate_base, int rate_enh,
                         EncoderTrace* trace = nullptr);

/// Same layers without inter-layer prediction: y_E is quantized directly.
ScalableBitstream encode_separate(const Image& img, const SensingConfig& config, int rate_base, int rate_enh,
                                  EncoderTrace* trace = nullptr);

/// Single Rademacher layer of m measurements at `rate` bits.
ScalableBitstream encode_nonscalable(const Image& img, std::uint32_t measurements, int rate, std::uint64_t seed,
                                     EncoderTrace* trace = nullptr);

/// Recomputes the decoder-side prediction branch of a predictive stream.
PredictionTrace decode_prediction(const ScalableBitstream& stream);

/// Fast preview from the base layer.
Preview decode_preview(const ScalableBitstream& stream);

/// Base-resolution TV reconstruction.
Image decode_base(const ScalableBitstream& stream, const RecoveryOptions& options = {});

/// Full-resolution reconstruction of the enhancement (or single) layer.
Image decode_enhancement(const ScalableBitstream& stream, const RecoveryOptions& options = {});

/// Bit accounting plus quality of the available reconstructions. Net figures
/// count quantized payload bits only; the total includes header and padding.
struct RateReport {
  std::size_t header_bits = 0;
  std::size_t padding_bits = 0;
  std::size_t base_bits = 0;
  std::size_t enh_bits = 0;
  double bpp_base = 0.0;
  double bpp_enh = 0.0;
  double bpp_net = 0.0;
  double bpp_total = 0.0;
  double psnr_base = 0.0;  // NaN when not available
  double psnr_enh = 0.0;   // NaN when not available
};

RateReport rate_report(const ScalableBitstream& stream, const Image& original, const Image* base = nullptr,
                       const Image* enhancement = nullptr);

}  // namespace scs
