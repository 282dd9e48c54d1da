#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>

#include "jiffy/byte_codec.hpp"
#include "jiffy/bytes.hpp"
#include "jiffy/codec.hpp"
#include "jiffy/scan.hpp"

namespace jiffy {

inline constexpr std::array<std::uint8_t, 4> kStreamMagic = {'J', 'F', 'Y', '1'};
inline constexpr std::uint8_t kStreamVersion = 1;
inline constexpr std::uint32_t kUnknownFrameCount = 0xFFFFFFFFu;
inline constexpr std::size_t kStreamHeaderSize = 24;

// All integers little-endian.
//   magic[4] version:u8 scan_type:u8 rows:u16 cols:u16 sample_width:u8
//   precision_um:u32 mask_codec:u8 frame_count:u32 header_crc:u32
// header_crc covers the 20 bytes before it.
struct StreamHeader {
  ScanType scan_type = ScanType::Range;
  std::uint16_t rows = 0;
  std::uint16_t cols = 0;
  SampleWidth width = SampleWidth::Four;
  std::uint32_t precision_um = 1000;
  ByteCodec mask_codec = default_mask_codec();
  std::uint32_t frame_count = kUnknownFrameCount;

  ScanShape shape() const noexcept { return {rows, cols, width, scan_type}; }
  void validate() const;

  Bytes serialize() const;
  static StreamHeader parse(ByteView bytes);

  friend bool operator==(const StreamHeader&, const StreamHeader&) = default;
};

// Frame record: [frame_len: u32] [crc32: u32] [payload: frame_len bytes]
inline constexpr std::size_t kFrameRecordOverhead = 8;

std::uint32_t crc32(ByteView bytes) noexcept;

// Upper bound on a valid payload for the shape; larger lengths are corrupt.
std::size_t max_frame_payload(const StreamHeader& header) noexcept;

class StreamWriter {
 public:
  StreamWriter(std::ostream& out, const StreamHeader& header);

  void write(const EncodedScan& scan);
  void write_payload(ByteView payload);
  // Checks that a declared frame_count was honoured and flushes.
  void finish();

  std::size_t frames_written() const noexcept { return frames_; }
  std::size_t bytes_written() const noexcept { return bytes_; }

 private:
  std::ostream& out_;
  StreamHeader header_;
  std::size_t frames_ = 0;
  std::size_t bytes_ = 0;
};

// Sequential reader; holds one frame at a time.
class StreamReader {
 public:
  explicit StreamReader(std::istream& in);

  const StreamHeader& header() const noexcept { return header_; }

  // Next payload, or nullopt at the end of the stream. Errors carry the
  // index of the offending frame.
  std::optional<Bytes> next_payload();
  std::optional<EncodedScan> next();

  std::size_t frames_read() const noexcept { return frames_; }

 private:
  std::istream& in_;
  StreamHeader header_;
  std::size_t frames_ = 0;
};

// Whole-buffer helpers.
Bytes write_stream(const StreamHeader& header, std::span<const EncodedScan> frames);

struct StreamContents {
  StreamHeader header;
  std::vector<EncodedScan> frames;
};
StreamContents read_stream(ByteView bytes);

}  // namespace jiffy
