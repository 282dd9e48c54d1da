#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "jiffy/bytes.hpp"

namespace jiffy {

// General-purpose byte compressors available for mask blocks. The numeric
// value is written to the stream.
enum class ByteCodec : std::uint8_t {
  Stored = 0,
  Deflate = 1,
  Zstd = 2,
};

bool codec_available(ByteCodec codec) noexcept;
std::optional<ByteCodec> byte_codec_from_u8(std::uint8_t id) noexcept;
std::optional<ByteCodec> parse_byte_codec(std::string_view name) noexcept;
std::string_view to_string(ByteCodec codec) noexcept;
std::vector<ByteCodec> available_codecs();

// Zstd when compiled in, otherwise Deflate.
ByteCodec default_mask_codec() noexcept;

Bytes compress_block(ByteView input, ByteCodec codec);
// Throws Errc::unknown_codec, or Errc::corrupt when the data does not
// decompress to exactly expected_len bytes.
Bytes decompress_block(ByteView input, ByteCodec codec, std::size_t expected_len);

// Mask block: [uncompressed_len: varint] [codec_id: u8]
//             [compressed_len: varint] [compressed bytes]
void write_mask_block(Bytes& out, ByteView mask_bytes, ByteCodec codec);
Bytes read_mask_block(ByteReader& in, std::size_t expected_len);

}  // namespace jiffy
