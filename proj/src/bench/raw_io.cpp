#include "jiffy/bench/raw_io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <string>

#include "jiffy/error.hpp"

namespace jiffy::bench {

std::size_t element_size(ElementType t) noexcept {
  switch (t) {
    case ElementType::Float32: return 4;
    case ElementType::Uint32: return 4;
    case ElementType::Uint16: return 2;
    case ElementType::Uint8: return 1;
  }
  return 0;
}

std::optional<ElementType> parse_element_type(std::string_view name) noexcept {
  if (name == "float32") return ElementType::Float32;
  if (name == "uint32") return ElementType::Uint32;
  if (name == "uint16") return ElementType::Uint16;
  if (name == "uint8") return ElementType::Uint8;
  return std::nullopt;
}

std::string_view to_string(ElementType t) noexcept {
  switch (t) {
    case ElementType::Float32: return "float32";
    case ElementType::Uint32: return "uint32";
    case ElementType::Uint16: return "uint16";
    case ElementType::Uint8: return "uint8";
  }
  return "invalid";
}

SampleWidth natural_width(ElementType t) noexcept {
  switch (t) {
    case ElementType::Uint16: return SampleWidth::Two;
    case ElementType::Uint8: return SampleWidth::One;
    default: return SampleWidth::Four;
  }
}

ScanType natural_scan_type(ElementType t) noexcept {
  switch (t) {
    case ElementType::Uint16: return ScanType::Signal;
    case ElementType::Uint8: return ScanType::Reflectivity;
    default: return ScanType::Range;
  }
}

namespace {

static_assert(std::endian::native == std::endian::little, "raw frames are read as little-endian");

template <typename T>
T load(const std::uint8_t* p) noexcept {
  T v;
  std::memcpy(&v, p, sizeof v);
  return v;
}

}  // namespace

RawSequenceReader::RawSequenceReader(RawSequenceSpec spec) : spec_(std::move(spec)) {
  if (spec_.rows == 0 || spec_.cols == 0)
    throw Error(Errc::invalid_argument, "raw sequence shape must be nonzero");
  if (spec_.frame_stride != 0 && spec_.frame_stride < spec_.frame_bytes())
    throw Error(Errc::invalid_argument, "frame stride is smaller than a frame");
  std::error_code ec;
  const auto size = std::filesystem::file_size(spec_.path, ec);
  if (ec) throw Error(Errc::io, "cannot stat " + spec_.path.string() + ": " + ec.message());
  if (size == 0) {
    frames_ = 0;
  } else {
    // The last frame may or may not be followed by stride padding.
    const std::size_t stride = spec_.stride();
    if (size % stride == 0) {
      frames_ = size / stride;
    } else if (size < spec_.frame_bytes() || (size - spec_.frame_bytes()) % stride != 0) {
      throw Error(Errc::invalid_argument, spec_.path.string() + " holds " + std::to_string(size) +
                                              " bytes, not a whole number of " +
                                              std::to_string(spec_.frame_bytes()) + "-byte frames");
    } else {
      frames_ = (size - spec_.frame_bytes()) / stride + 1;
    }
  }
  in_.open(spec_.path, std::ios::binary);
  if (!in_) throw Error(Errc::io, "cannot open " + spec_.path.string());
  buf_.resize(spec_.frame_bytes());
}

bool RawSequenceReader::read_frame() {
  if (index_ >= frames_) return false;
  in_.seekg(static_cast<std::streamoff>(index_ * spec_.stride()));
  in_.read(reinterpret_cast<char*>(buf_.data()), static_cast<std::streamsize>(buf_.size()));
  if (static_cast<std::size_t>(in_.gcount()) != buf_.size())
    throw Error(Errc::io, "short read on frame " + std::to_string(index_));
  ++index_;
  return true;
}

std::optional<RangeImage> RawSequenceReader::next_image() {
  if (!read_frame()) return std::nullopt;
  RangeImage image(spec_.rows, spec_.cols);
  const std::size_t n = image.values.size();
  const std::uint8_t* p = buf_.data();
  for (std::size_t i = 0; i < n; ++i) {
    switch (spec_.element_type) {
      case ElementType::Float32: {
        const float f = load<float>(p + 4 * i);
        image.values[i] = (f > 0.0f && std::isfinite(f)) ? double(f)
                                                          : std::numeric_limits<double>::quiet_NaN();
        break;
      }
      case ElementType::Uint32: image.values[i] = load<std::uint32_t>(p + 4 * i); break;
      case ElementType::Uint16: image.values[i] = load<std::uint16_t>(p + 2 * i); break;
      case ElementType::Uint8: image.values[i] = p[i]; break;
    }
  }
  return image;
}

std::optional<Scan> RawSequenceReader::next_scan(const QuantizationSpec& q) {
  q.validate();
  const ScanShape shape{spec_.rows, spec_.cols, q.width, spec_.scan_type};
  if (spec_.element_type == ElementType::Float32) {
    auto image = next_image();
    if (!image) return std::nullopt;
    return quantize(*image, q, spec_.scan_type);
  }
  if (!read_frame()) return std::nullopt;
  std::vector<std::uint32_t> samples(spec_.rows * spec_.cols);
  const std::uint8_t* p = buf_.data();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    switch (spec_.element_type) {
      case ElementType::Uint32: samples[i] = load<std::uint32_t>(p + 4 * i); break;
      case ElementType::Uint16: samples[i] = load<std::uint16_t>(p + 2 * i); break;
      case ElementType::Uint8: samples[i] = p[i]; break;
      case ElementType::Float32: break;
    }
  }
  try {
    return Scan(shape, std::move(samples));
  } catch (const Error& e) {
    throw Error(e.code(), "frame " + std::to_string(index_ - 1) + ": " + e.what());
  }
}

void write_raw_frame(std::ostream& out, const Scan& scan, ElementType type,
                     const QuantizationSpec& q, bool invalid_as_zero) {
  const auto samples = scan.samples();
  std::vector<std::uint8_t> buf(samples.size() * element_size(type));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const std::uint32_t s = samples[i];
    switch (type) {
      case ElementType::Float32: {
        double v = dequantize_value(s, q, scan.type());
        if (std::isnan(v) && invalid_as_zero) v = 0.0;
        const float f = static_cast<float>(v);
        std::memcpy(buf.data() + 4 * i, &f, 4);
        break;
      }
      case ElementType::Uint32: std::memcpy(buf.data() + 4 * i, &s, 4); break;
      case ElementType::Uint16: {
        if (s > 0xFFFFu) throw Error(Errc::invalid_argument, "sample does not fit uint16 output");
        const auto v = static_cast<std::uint16_t>(s);
        std::memcpy(buf.data() + 2 * i, &v, 2);
        break;
      }
      case ElementType::Uint8:
        if (s > 0xFFu) throw Error(Errc::invalid_argument, "sample does not fit uint8 output");
        buf[i] = static_cast<std::uint8_t>(s);
        break;
    }
  }
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!out) throw Error(Errc::io, "write failed");
}

void write_raw_image(std::ostream& out, const RangeImage& image) {
  std::vector<float> buf(image.values.size());
  for (std::size_t i = 0; i < buf.size(); ++i)
    buf[i] = std::isnan(image.values[i]) ? 0.0f : static_cast<float>(image.values[i]);
  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(float)));
  if (!out) throw Error(Errc::io, "write failed");
}

std::vector<Scan> load_scans(const RawSequenceSpec& spec, const QuantizationSpec& q) {
  RawSequenceReader reader(spec);
  std::vector<Scan> scans;
  scans.reserve(reader.frame_count());
  while (auto s = reader.next_scan(q)) scans.push_back(std::move(*s));
  return scans;
}

std::vector<RangeImage> load_images(const RawSequenceSpec& spec) {
  RawSequenceReader reader(spec);
  std::vector<RangeImage> images;
  images.reserve(reader.frame_count());
  while (auto im = reader.next_image()) images.push_back(std::move(*im));
  return images;
}

}  // namespace jiffy::bench
