#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace jiffy {

enum class ScanType : std::uint8_t {
  Range = 0,
  Range2 = 1,
  Signal = 2,
  Signal2 = 3,
  Reflectivity = 4,
  Reflectivity2 = 5,
  NearIR = 6,
  Generic = 7,
};

enum class SampleWidth : std::uint8_t { One = 1, Two = 2, Four = 4 };

constexpr bool is_range_type(ScanType t) noexcept {
  return t == ScanType::Range || t == ScanType::Range2;
}

constexpr std::size_t bytes_of(SampleWidth w) noexcept { return static_cast<std::size_t>(w); }

// Largest sample representable at the given width.
constexpr std::uint32_t max_sample(SampleWidth w) noexcept {
  switch (w) {
    case SampleWidth::One: return 0xFFu;
    case SampleWidth::Two: return 0xFFFFu;
    case SampleWidth::Four: return 0xFFFFFFFFu;
  }
  return 0;
}

std::optional<ScanType> scan_type_from_u8(std::uint8_t v) noexcept;
std::optional<SampleWidth> sample_width_from_u8(std::uint8_t v) noexcept;
std::optional<ScanType> parse_scan_type(std::string_view name) noexcept;
std::string_view to_string(ScanType t) noexcept;

struct ScanShape {
  std::size_t rows = 0;
  std::size_t cols = 0;
  SampleWidth width = SampleWidth::Four;
  ScanType type = ScanType::Range;

  std::size_t size() const noexcept { return rows * cols; }
  friend bool operator==(const ScanShape&, const ScanShape&) = default;
};

// One 2D frame of unsigned samples in row-major order. Zero is the
// out-of-range sentinel for range scan types. The constructor enforces the
// shape and width invariants, so a Scan is always valid.
class Scan {
 public:
  Scan(ScanShape shape, std::vector<std::uint32_t> samples);
  // All-zero scan.
  explicit Scan(ScanShape shape);

  const ScanShape& shape() const noexcept { return shape_; }
  std::size_t rows() const noexcept { return shape_.rows; }
  std::size_t cols() const noexcept { return shape_.cols; }
  std::size_t size() const noexcept { return samples_.size(); }
  SampleWidth width() const noexcept { return shape_.width; }
  ScanType type() const noexcept { return shape_.type; }

  std::span<const std::uint32_t> samples() const noexcept { return samples_; }
  std::span<const std::uint32_t> row(std::size_t r) const noexcept {
    return std::span<const std::uint32_t>(samples_).subspan(r * shape_.cols, shape_.cols);
  }
  std::uint32_t at(std::size_t r, std::size_t c) const { return samples_.at(r * shape_.cols + c); }

  friend bool operator==(const Scan&, const Scan&) = default;

 private:
  ScanShape shape_;
  std::vector<std::uint32_t> samples_;
};

void validate_shape(const ScanShape& shape);

// Real-valued image (meters for range types). NaN marks invalid samples.
struct RangeImage {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  RangeImage() = default;
  RangeImage(std::size_t r, std::size_t c);
  RangeImage(std::size_t r, std::size_t c, std::vector<double> v);

  double& operator()(std::size_t r, std::size_t c) { return values[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
};

}  // namespace jiffy
