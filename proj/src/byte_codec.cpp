#include "jiffy/byte_codec.hpp"

#include <zlib.h>

#include <string>

#include "zstd_shim.hpp"

#if defined(JIFFY_ZSTD_HEADER) || defined(JIFFY_ZSTD_RUNTIME)
#define JIFFY_HAVE_ZSTD 1
#endif

namespace jiffy {
namespace {

constexpr int kZstdLevel = 1;
constexpr int kDeflateLevel = Z_BEST_SPEED;

Bytes deflate_compress(ByteView in) {
  uLongf bound = compressBound(static_cast<uLong>(in.size()));
  Bytes out(bound);
  if (compress2(out.data(), &bound, in.data(), static_cast<uLong>(in.size()), kDeflateLevel) != Z_OK)
    throw Error(Errc::io, "deflate compression failed");
  out.resize(bound);
  return out;
}

Bytes deflate_decompress(ByteView in, std::size_t expected_len) {
  // One spare byte so that longer output shows up as a length mismatch.
  Bytes out(expected_len + 1);
  uLongf len = static_cast<uLongf>(out.size());
  uLong consumed = static_cast<uLong>(in.size());
  const int rc = uncompress2(out.data(), &len, in.data(), &consumed);
  if (rc != Z_OK || len != expected_len || consumed != in.size())
    throw Error(Errc::corrupt, "deflate block is corrupt or has the wrong length");
  out.pop_back();
  return out;
}

#ifdef JIFFY_HAVE_ZSTD
Bytes zstd_compress(ByteView in) {
  Bytes out(ZSTD_compressBound(in.size()));
  const std::size_t n = ZSTD_compress(out.data(), out.size(), in.data(), in.size(), kZstdLevel);
  if (ZSTD_isError(n)) throw Error(Errc::io, std::string("zstd: ") + ZSTD_getErrorName(n));
  out.resize(n);
  return out;
}

Bytes zstd_decompress(ByteView in, std::size_t expected_len) {
  // One spare byte distinguishes "too long" from "exactly right".
  Bytes out(expected_len + 1);
  const std::size_t n = ZSTD_decompress(out.data(), out.size(), in.data(), in.size());
  if (ZSTD_isError(n) || n != expected_len)
    throw Error(Errc::corrupt, "zstd block is corrupt or has the wrong length");
  out.resize(n);
  return out;
}
#endif

}  // namespace

bool codec_available(ByteCodec codec) noexcept {
  switch (codec) {
    case ByteCodec::Stored:
    case ByteCodec::Deflate: return true;
    case ByteCodec::Zstd:
#ifdef JIFFY_HAVE_ZSTD
      return true;
#else
      return false;
#endif
  }
  return false;
}

std::optional<ByteCodec> byte_codec_from_u8(std::uint8_t id) noexcept {
  if (id > 2) return std::nullopt;
  const auto codec = static_cast<ByteCodec>(id);
  if (!codec_available(codec)) return std::nullopt;
  return codec;
}

std::optional<ByteCodec> parse_byte_codec(std::string_view name) noexcept {
  for (ByteCodec c : {ByteCodec::Stored, ByteCodec::Deflate, ByteCodec::Zstd})
    if (to_string(c) == name) return c;
  return std::nullopt;
}

std::string_view to_string(ByteCodec codec) noexcept {
  switch (codec) {
    case ByteCodec::Stored: return "stored";
    case ByteCodec::Deflate: return "deflate";
    case ByteCodec::Zstd: return "zstd";
  }
  return "invalid";
}

std::vector<ByteCodec> available_codecs() {
  std::vector<ByteCodec> out;
  for (ByteCodec c : {ByteCodec::Stored, ByteCodec::Deflate, ByteCodec::Zstd})
    if (codec_available(c)) out.push_back(c);
  return out;
}

ByteCodec default_mask_codec() noexcept {
  return codec_available(ByteCodec::Zstd) ? ByteCodec::Zstd : ByteCodec::Deflate;
}

Bytes compress_block(ByteView input, ByteCodec codec) {
  if (!codec_available(codec))
    throw Error(Errc::unknown_codec, "byte codec " + std::string(to_string(codec)) +
                                         " is not available");
  switch (codec) {
    case ByteCodec::Stored: return Bytes(input.begin(), input.end());
    case ByteCodec::Deflate: return deflate_compress(input);
    case ByteCodec::Zstd:
#ifdef JIFFY_HAVE_ZSTD
      return zstd_compress(input);
#else
      break;
#endif
  }
  throw Error(Errc::unknown_codec, "unknown byte codec");
}

Bytes decompress_block(ByteView input, ByteCodec codec, std::size_t expected_len) {
  if (!codec_available(codec)) throw Error(Errc::unknown_codec, "byte codec is not available");
  switch (codec) {
    case ByteCodec::Stored:
      if (input.size() != expected_len)
        throw Error(Errc::corrupt, "stored block has the wrong length");
      return Bytes(input.begin(), input.end());
    case ByteCodec::Deflate: return deflate_decompress(input, expected_len);
    case ByteCodec::Zstd:
#ifdef JIFFY_HAVE_ZSTD
      return zstd_decompress(input, expected_len);
#else
      break;
#endif
  }
  throw Error(Errc::unknown_codec, "unknown byte codec");
}

void write_mask_block(Bytes& out, ByteView mask_bytes, ByteCodec codec) {
  const Bytes compressed = compress_block(mask_bytes, codec);
  put_varint(out, mask_bytes.size());
  out.push_back(static_cast<std::uint8_t>(codec));
  put_varint(out, compressed.size());
  out.insert(out.end(), compressed.begin(), compressed.end());
}

Bytes read_mask_block(ByteReader& in, std::size_t expected_len) {
  const std::uint64_t len = in.varint();
  if (len != expected_len)
    throw Error(Errc::corrupt, "mask block length " + std::to_string(len) + ", expected " +
                                   std::to_string(expected_len));
  const std::uint8_t id = in.u8();
  const auto codec = byte_codec_from_u8(id);
  if (!codec) throw Error(Errc::unknown_codec, "unknown mask codec id " + std::to_string(id));
  const std::uint64_t clen = in.varint();
  if (clen > in.remaining()) throw Error(Errc::truncated, "mask block is truncated");
  return decompress_block(in.bytes(static_cast<std::size_t>(clen)), *codec, expected_len);
}

}  // namespace jiffy
