#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "jiffy/bytes.hpp"

namespace jiffy {

// ---------------------------------------------------------------------------
// Delta coding
// ---------------------------------------------------------------------------

// out[0] = v[0], out[i] = v[i] - v[i-1]. Every value fits in 33 signed bits.
std::vector<std::int64_t> delta_encode(std::span<const std::uint32_t> values);

// Prefix sum. Throws Errc::corrupt if a running sum leaves [0, 2^32).
std::vector<std::uint32_t> delta_decode(std::span<const std::int64_t> deltas);

// In-place modulo-2^32 variants used by the codec pipeline.
void delta_encode_wrapped(std::span<std::uint32_t> values) noexcept;
void delta_decode_wrapped(std::span<std::uint32_t> values) noexcept;

// ---------------------------------------------------------------------------
// ZigZag: 2|x| + [x < 0]
// ---------------------------------------------------------------------------

// Requires |x| < 2^31.
constexpr std::uint32_t zigzag_encode(std::int64_t x) noexcept {
  return x < 0 ? static_cast<std::uint32_t>(2 * -x + 1) : static_cast<std::uint32_t>(2 * x);
}

// Even codes decode to u/2, odd codes to -(u-1)/2. Code 1 is never produced
// by zigzag_encode and decodes to 0.
constexpr std::int64_t zigzag_decode(std::uint32_t u) noexcept {
  const std::int64_t half = static_cast<std::int64_t>(u >> 1);
  return (u & 1u) ? -half : half;
}

// ZigZag over int32 residues modulo 2^32. Identical to zigzag_encode for
// every residue except -2^31, which 2|x| + [x < 0] cannot express in 32
// bits; it takes the spare code 1.
constexpr std::uint32_t zigzag_encode_wrapped(std::uint32_t residue) noexcept {
  if (residue == 0x80000000u) return 1u;
  return zigzag_encode(static_cast<std::int32_t>(residue));
}

constexpr std::uint32_t zigzag_decode_wrapped(std::uint32_t code) noexcept {
  if (code == 1u) return 0x80000000u;
  return static_cast<std::uint32_t>(zigzag_decode(code));
}

void zigzag_encode_wrapped(std::span<std::uint32_t> values) noexcept;
void zigzag_decode_wrapped(std::span<std::uint32_t> values) noexcept;

// ---------------------------------------------------------------------------
// Patched frame-of-reference bitpacking
// ---------------------------------------------------------------------------
//
// Stream:  [count: varint] block*
// Block:   [reference: varint] [bit_width: u8] [exception_count: varint]
//          [packed: ceil(n * bit_width / 8) bytes]
//          [exception positions: u8 each] [exception remainders: varint each]
//
// n is 128 except for the final block. Packed offsets (value - reference)
// are laid out as one LSB-first bit stream. Offsets that do not fit in
// bit_width bits keep their low bits in the packed area and store
// offset >> bit_width as an exception remainder.

inline constexpr std::size_t kPforBlockSize = 128;

void pfor_encode(std::span<const std::uint32_t> values, Bytes& out);
Bytes pfor_encode(std::span<const std::uint32_t> values);

// Size in bytes pfor_encode would produce, without materialising it.
std::size_t pfor_encoded_size(std::span<const std::uint32_t> values);

// Decodes one stream from the reader, appending to out. If expected_count
// is given the stream's declared count must match it.
void pfor_decode(ByteReader& in, std::vector<std::uint32_t>& out,
                 std::optional<std::size_t> expected_count = std::nullopt);

// Decodes a buffer holding exactly one stream.
std::vector<std::uint32_t> pfor_decode(ByteView bytes);

struct PforBlockInfo {
  std::uint32_t reference;
  unsigned bit_width;
  std::size_t value_count;
  std::size_t exception_count;
  std::size_t byte_size;
};

// Header fields of each block in an encoded stream.
std::vector<PforBlockInfo> pfor_inspect(ByteView bytes);

// Byte size of one block at a fixed bit width, and the width pfor_encode
// picks (smallest size, ties to the smaller width).
std::size_t pfor_block_size(std::span<const std::uint32_t> block, unsigned bit_width);
unsigned pfor_choose_width(std::span<const std::uint32_t> block);

}  // namespace jiffy
