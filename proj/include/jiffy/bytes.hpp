#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "jiffy/error.hpp"

namespace jiffy {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

// LEB128: 7 payload bits per byte, high bit set on all but the last byte.
constexpr std::size_t varint_size(std::uint64_t v) noexcept {
  std::size_t n = 1;
  while (v >= 0x80) {
    v >>= 7;
    ++n;
  }
  return n;
}

inline void put_varint(Bytes& out, std::uint64_t v) {
  while (v >= 0x80) {
    out.push_back(static_cast<std::uint8_t>(v | 0x80));
    v >>= 7;
  }
  out.push_back(static_cast<std::uint8_t>(v));
}

inline void put_u16le(Bytes& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

inline void put_u32le(Bytes& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

// Bounds-checked cursor over a byte span. Every read past the end throws
// Errc::truncated, so decoders never touch memory outside the input.
class ByteReader {
 public:
  explicit ByteReader(ByteView data) noexcept : data_(data) {}

  std::size_t position() const noexcept { return pos_; }
  std::size_t remaining() const noexcept { return data_.size() - pos_; }
  bool empty() const noexcept { return pos_ == data_.size(); }

  std::uint8_t u8() {
    need(1);
    return data_[pos_++];
  }

  std::uint16_t u16le() {
    need(2);
    std::uint16_t v = static_cast<std::uint16_t>(data_[pos_] | (data_[pos_ + 1] << 8));
    pos_ += 2;
    return v;
  }

  std::uint32_t u32le() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t{data_[pos_ + i]} << (8 * i);
    pos_ += 4;
    return v;
  }

  std::uint64_t varint() {
    std::uint64_t v = 0;
    for (int shift = 0; shift < 64; shift += 7) {
      const std::uint8_t b = u8();
      const std::uint64_t payload = b & 0x7F;
      if (shift == 63 && payload > 1) throw Error(Errc::corrupt, "varint overflows 64 bits");
      v |= payload << shift;
      if (!(b & 0x80)) return v;
    }
    throw Error(Errc::corrupt, "varint longer than 10 bytes");
  }

  // Varint that must fit in 32 bits.
  std::uint32_t varint32() {
    const std::uint64_t v = varint();
    if (v > 0xFFFFFFFFu) throw Error(Errc::corrupt, "varint exceeds 32 bits");
    return static_cast<std::uint32_t>(v);
  }

  ByteView bytes(std::size_t n) {
    need(n);
    ByteView out = data_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

 private:
  void need(std::size_t n) const {
    if (n > remaining()) throw Error(Errc::truncated, "unexpected end of data");
  }

  ByteView data_;
  std::size_t pos_ = 0;
};

}  // namespace jiffy
