#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string_view>

#include "jiffy/quantize.hpp"
#include "jiffy/scan.hpp"

namespace jiffy::bench {

enum class ElementType { Float32, Uint32, Uint16, Uint8 };

std::size_t element_size(ElementType t) noexcept;
std::optional<ElementType> parse_element_type(std::string_view name) noexcept;
std::string_view to_string(ElementType t) noexcept;
SampleWidth natural_width(ElementType t) noexcept;
ScanType natural_scan_type(ElementType t) noexcept;

// A file of little-endian frames, each rows x cols elements, laid out one
// after the other (frame_stride bytes apart; 0 means tightly packed).
struct RawSequenceSpec {
  std::filesystem::path path;
  ElementType element_type = ElementType::Float32;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t frame_stride = 0;
  ScanType scan_type = ScanType::Range;

  std::size_t frame_bytes() const noexcept { return rows * cols * element_size(element_type); }
  std::size_t stride() const noexcept { return frame_stride ? frame_stride : frame_bytes(); }
};

class RawSequenceReader {
 public:
  explicit RawSequenceReader(RawSequenceSpec spec);

  const RawSequenceSpec& spec() const noexcept { return spec_; }
  std::size_t frame_count() const noexcept { return frames_; }

  // Float frames become real images (0 and NaN are invalid); integer frames
  // are converted to double.
  std::optional<RangeImage> next_image();
  // Float frames are quantized; integer frames are taken as already
  // quantized samples and must fit the width.
  std::optional<Scan> next_scan(const QuantizationSpec& q);

 private:
  bool read_frame();

  RawSequenceSpec spec_;
  std::ifstream in_;
  std::size_t frames_ = 0;
  std::size_t index_ = 0;
  std::vector<std::uint8_t> buf_;
};

// Appends one frame in the given element type. Float output writes
// dequantized meters, with invalid samples as NaN or 0.
void write_raw_frame(std::ostream& out, const Scan& scan, ElementType type,
                     const QuantizationSpec& q, bool invalid_as_zero);
void write_raw_image(std::ostream& out, const RangeImage& image);

std::vector<Scan> load_scans(const RawSequenceSpec& spec, const QuantizationSpec& q);
std::vector<RangeImage> load_images(const RawSequenceSpec& spec);

}  // namespace jiffy::bench
