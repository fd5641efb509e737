#include "scs/preview.hpp"

#include <stdexcept>

#include "scs/transform.hpp"

namespace scs {

Preview compute_preview(const MeasurementVector& y_base, const SensingConfig& config) {
  if (y_base.size() != config.m_base) throw std::invalid_argument("preview: base measurement count mismatch");
  std::vector<double> v = y_base.values;
  config.hadamard().apply_inverse(v);
  const double scale = 1.0 / (static_cast<double>(config.s_pre()) * config.s_pre());
  for (double& p : v) p *= scale;
  return {Image(config.preview_width, config.preview_height, std::move(v))};
}

Image predict_full(const Preview& preview, const SensingConfig& config) {
  if (preview.image.width() != config.preview_width || preview.image.height() != config.preview_height) {
    throw std::invalid_argument("preview: size does not match the sensing config");
  }
  return upsample_bilinear(preview.image, config.s_pre() * config.s_base());
}

MeasurementVector predict_measurements(const Image& prediction, const RademacherOperator& phi_enh) {
  if (prediction.size() != phi_enh.cols()) throw std::invalid_argument("prediction: size does not match Phi_E");
  return {Layer::enhancement, phi_enh.apply(prediction.pixels())};
}

}  // namespace scs
