#pragma once

#include "scs/image.hpp"
#include "scs/sensing.hpp"

namespace scs {

/// Low-resolution image recovered from the base measurements by an inverse
/// Walsh-Hadamard transform, in pixel units.
struct Preview {
  Image image;
};

/// x_P = H^{-1} y_B / s_pre^2, reshaped to preview_width x preview_height.
Preview compute_preview(const MeasurementVector& y_base, const SensingConfig& config);

/// Bilinear interpolation of the preview to full resolution.
Image predict_full(const Preview& preview, const SensingConfig& config);

/// Enhancement measurements of the interpolated preview, y_pred = Phi_E x_pred.
MeasurementVector predict_measurements(const Image& prediction, const RademacherOperator& phi_enh);

}  // namespace scs
