#include "jiffy/quantize.hpp"

#include <cfenv>
#include <cmath>
#include <limits>

#include "jiffy/error.hpp"

namespace jiffy {

void QuantizationSpec::validate() const {
  if (precision_um == 0) throw Error(Errc::invalid_argument, "precision must be at least 1 um");
  if (!sample_width_from_u8(static_cast<std::uint8_t>(width)))
    throw Error(Errc::invalid_argument, "sample width must be 1, 2 or 4 bytes");
}

std::uint32_t quantize_value(double value, const QuantizationSpec& spec, ScanType type) {
  if (!std::isfinite(value) || value <= 0.0) return 0;
  // Assumes the default FE_TONEAREST mode, so nearbyint rounds ties to even.
  const double steps =
      is_range_type(type) ? std::nearbyint(value * 1e6 / spec.precision_um) : std::nearbyint(value);
  const double ceiling = max_sample(spec.width);
  if (steps >= ceiling) return max_sample(spec.width);
  return static_cast<std::uint32_t>(steps);
}

double dequantize_value(std::uint32_t sample, const QuantizationSpec& spec, ScanType type) {
  if (!is_range_type(type)) return static_cast<double>(sample);
  if (sample == 0) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(sample) * spec.precision_um * 1e-6;
}

Scan quantize(const RangeImage& image, const QuantizationSpec& spec, ScanType type) {
  spec.validate();
  if (image.values.size() != image.rows * image.cols)
    throw Error(Errc::shape_mismatch, "image value count does not match its shape");
  std::vector<std::uint32_t> samples(image.values.size());
  for (std::size_t i = 0; i < samples.size(); ++i)
    samples[i] = quantize_value(image.values[i], spec, type);
  return Scan({image.rows, image.cols, spec.width, type}, std::move(samples));
}

RangeImage dequantize(const Scan& scan, const QuantizationSpec& spec) {
  spec.validate();
  RangeImage image(scan.rows(), scan.cols());
  const auto samples = scan.samples();
  for (std::size_t i = 0; i < samples.size(); ++i)
    image.values[i] = dequantize_value(samples[i], spec, scan.type());
  return image;
}

}  // namespace jiffy
