#pragma once

#include <cstdint>

#include "jiffy/scan.hpp"

namespace jiffy {

// Micrometers per integer step plus the target sample width.
struct QuantizationSpec {
  std::uint32_t precision_um = 1000;
  SampleWidth width = SampleWidth::Four;

  void validate() const;
  double step_meters() const noexcept { return precision_um * 1e-6; }
};

// Maps one measurement to its integer sample. Range types scale by the
// precision and round ties-to-even; attribute types are rounded as-is.
// NaN, infinities and non-positive values become the zero sentinel; values
// above the width ceiling clamp to max_sample().
std::uint32_t quantize_value(double value, const QuantizationSpec& spec, ScanType type);

// Inverse of quantize_value for a nonzero sample of a range type. Zero
// range samples decode to NaN. Attribute samples decode as themselves.
double dequantize_value(std::uint32_t sample, const QuantizationSpec& spec, ScanType type);

Scan quantize(const RangeImage& image, const QuantizationSpec& spec,
              ScanType type = ScanType::Range);

RangeImage dequantize(const Scan& scan, const QuantizationSpec& spec);

}  // namespace jiffy
