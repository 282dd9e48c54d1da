#include "jiffy/scan.hpp"

#include <array>
#include <cmath>
#include <string>

#include "jiffy/error.hpp"

namespace jiffy {
namespace {

constexpr std::array<std::string_view, 8> kScanTypeNames = {
    "range", "range2", "signal", "signal2", "reflectivity", "reflectivity2", "nearir", "generic"};

}  // namespace

std::optional<ScanType> scan_type_from_u8(std::uint8_t v) noexcept {
  if (v < kScanTypeNames.size()) return static_cast<ScanType>(v);
  return std::nullopt;
}

std::optional<SampleWidth> sample_width_from_u8(std::uint8_t v) noexcept {
  if (v == 1 || v == 2 || v == 4) return static_cast<SampleWidth>(v);
  return std::nullopt;
}

std::optional<ScanType> parse_scan_type(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kScanTypeNames.size(); ++i)
    if (kScanTypeNames[i] == name) return static_cast<ScanType>(i);
  return std::nullopt;
}

std::string_view to_string(ScanType t) noexcept {
  const auto i = static_cast<std::size_t>(t);
  return i < kScanTypeNames.size() ? kScanTypeNames[i] : "invalid";
}

void validate_shape(const ScanShape& shape) {
  if (shape.rows == 0 || shape.cols == 0)
    throw Error(Errc::invalid_argument, "scan must have at least one row and column");
  if (!sample_width_from_u8(static_cast<std::uint8_t>(shape.width)))
    throw Error(Errc::invalid_argument, "sample width must be 1, 2 or 4 bytes");
  if (!scan_type_from_u8(static_cast<std::uint8_t>(shape.type)))
    throw Error(Errc::invalid_argument, "unknown scan type");
}

Scan::Scan(ScanShape shape, std::vector<std::uint32_t> samples)
    : shape_(shape), samples_(std::move(samples)) {
  validate_shape(shape_);
  if (samples_.size() != shape_.size())
    throw Error(Errc::shape_mismatch, "sample count " + std::to_string(samples_.size()) +
                                          " does not match " + std::to_string(shape_.rows) + "x" +
                                          std::to_string(shape_.cols));
  const std::uint32_t ceiling = max_sample(shape_.width);
  if (ceiling != 0xFFFFFFFFu) {
    std::uint32_t peak = 0;
    for (std::uint32_t s : samples_) peak = s > peak ? s : peak;
    if (peak > ceiling)
      throw Error(Errc::invalid_argument,
                  "sample " + std::to_string(peak) + " exceeds the sample width");
  }
}

Scan::Scan(ScanShape shape) : shape_(shape), samples_(shape.size(), 0u) { validate_shape(shape_); }

RangeImage::RangeImage(std::size_t r, std::size_t c)
    : rows(r), cols(c), values(r * c, std::nan("")) {}

RangeImage::RangeImage(std::size_t r, std::size_t c, std::vector<double> v)
    : rows(r), cols(c), values(std::move(v)) {
  if (values.size() != rows * cols)
    throw Error(Errc::shape_mismatch, "image value count does not match its shape");
}

}  // namespace jiffy
