#include "jiffy/intcodec.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <limits>
#include <string>

namespace jiffy {

static_assert(std::endian::native == std::endian::little,
              "bit packing loads/stores assume a little-endian host");

std::vector<std::int64_t> delta_encode(std::span<const std::uint32_t> values) {
  std::vector<std::int64_t> out(values.size());
  std::int64_t prev = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto v = static_cast<std::int64_t>(values[i]);
    out[i] = v - prev;
    prev = v;
  }
  return out;
}

std::vector<std::uint32_t> delta_decode(std::span<const std::int64_t> deltas) {
  std::vector<std::uint32_t> out(deltas.size());
  std::int64_t acc = 0;
  constexpr std::int64_t kMax = std::numeric_limits<std::uint32_t>::max();
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    const std::int64_t d = deltas[i];
    if (d > kMax - acc || d < -acc)
      throw Error(Errc::corrupt, "delta prefix sum leaves the 32-bit range at index " +
                                     std::to_string(i));
    acc += d;
    out[i] = static_cast<std::uint32_t>(acc);
  }
  return out;
}

void delta_encode_wrapped(std::span<std::uint32_t> values) noexcept {
  std::uint32_t prev = 0;
  for (std::uint32_t& v : values) {
    const std::uint32_t cur = v;
    v = cur - prev;
    prev = cur;
  }
}

void delta_decode_wrapped(std::span<std::uint32_t> values) noexcept {
  std::uint32_t acc = 0;
  for (std::uint32_t& v : values) {
    acc += v;
    v = acc;
  }
}

void zigzag_encode_wrapped(std::span<std::uint32_t> values) noexcept {
  for (std::uint32_t& v : values) v = zigzag_encode_wrapped(v);
}

void zigzag_decode_wrapped(std::span<std::uint32_t> values) noexcept {
  for (std::uint32_t& v : values) v = zigzag_decode_wrapped(v);
}

// ---------------------------------------------------------------------------
// PFOR
// ---------------------------------------------------------------------------

namespace {

constexpr std::size_t kScratchBytes = kPforBlockSize * 4 + 8;

inline unsigned bit_length(std::uint32_t v) noexcept {
  return static_cast<unsigned>(32 - std::countl_zero(v));
}

inline std::uint64_t low_mask(unsigned width) noexcept {
  return (std::uint64_t{1} << width) - 1;
}

inline std::size_t packed_bytes(std::size_t n, unsigned width) noexcept {
  return (n * width + 7) / 8;
}

struct BlockPlan {
  std::uint32_t reference = 0;
  unsigned width = 0;
  std::size_t exceptions = 0;
  std::size_t bytes = 0;
};

BlockPlan plan_block(std::span<const std::uint32_t> block) {
  BlockPlan plan;
  plan.reference = *std::min_element(block.begin(), block.end());
  std::array<std::size_t, 33> hist{};
  unsigned max_len = 0;
  for (std::uint32_t v : block) {
    const unsigned len = bit_length(v - plan.reference);
    ++hist[len];
    max_len = std::max(max_len, len);
  }
  const std::size_t fixed = varint_size(plan.reference) + 1;
  plan.bytes = std::numeric_limits<std::size_t>::max();
  std::size_t exceptions = 0;
  // Walk widths downwards so the exception count accumulates; ties keep the
  // smaller width because the comparison is <=.
  for (unsigned w = max_len + 1; w-- > 0;) {
    if (w < max_len) exceptions += hist[w + 1];
    std::size_t remainder_bytes = 0;
    for (unsigned len = w + 1; len <= max_len; ++len)
      remainder_bytes += hist[len] * ((len - w + 6) / 7);
    const std::size_t bytes = fixed + varint_size(exceptions) + packed_bytes(block.size(), w) +
                              exceptions + remainder_bytes;
    if (bytes <= plan.bytes) {
      plan.bytes = bytes;
      plan.width = w;
      plan.exceptions = exceptions;
    }
  }
  return plan;
}

void write_block(std::span<const std::uint32_t> block, const BlockPlan& plan, Bytes& out) {
  const unsigned w = plan.width;
  put_varint(out, plan.reference);
  out.push_back(static_cast<std::uint8_t>(w));
  put_varint(out, plan.exceptions);

  alignas(8) std::array<std::uint8_t, kScratchBytes> scratch{};
  const std::uint64_t mask = low_mask(w);
  for (std::size_t i = 0; i < block.size(); ++i) {
    const std::uint64_t low = (block[i] - plan.reference) & mask;
    const std::size_t bit = i * w;
    std::uint64_t word;
    std::memcpy(&word, scratch.data() + (bit >> 3), 8);
    word |= low << (bit & 7);
    std::memcpy(scratch.data() + (bit >> 3), &word, 8);
  }
  out.insert(out.end(), scratch.begin(), scratch.begin() + packed_bytes(block.size(), w));

  if (plan.exceptions == 0) return;
  const std::size_t first_remainder = out.size() + plan.exceptions;
  out.resize(first_remainder);
  std::size_t slot = first_remainder - plan.exceptions;
  for (std::size_t i = 0; i < block.size(); ++i)
    if (bit_length(block[i] - plan.reference) > w) out[slot++] = static_cast<std::uint8_t>(i);
  for (std::size_t i = 0; i < block.size(); ++i) {
    const std::uint32_t offset = block[i] - plan.reference;
    if (bit_length(offset) > w) put_varint(out, offset >> w);
  }
}

// Decodes one block of n values into dst.
void read_block(ByteReader& in, std::size_t n, std::uint32_t* dst, PforBlockInfo* info) {
  const std::size_t start = in.position();
  const std::uint32_t reference = in.varint32();
  const unsigned w = in.u8();
  if (w > 32) throw Error(Errc::corrupt, "pfor bit width " + std::to_string(w) + " exceeds 32");
  const std::uint64_t exceptions = in.varint();
  if (exceptions > n) throw Error(Errc::corrupt, "pfor exception count exceeds block length");
  if (w == 32 && exceptions != 0)
    throw Error(Errc::corrupt, "pfor block of width 32 cannot have exceptions");

  const ByteView packed = in.bytes(packed_bytes(n, w));
  alignas(8) std::array<std::uint8_t, kScratchBytes> scratch{};
  std::memcpy(scratch.data(), packed.data(), packed.size());
  const std::uint64_t mask = low_mask(w);
  std::uint64_t overflow = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t bit = i * w;
    std::uint64_t word;
    std::memcpy(&word, scratch.data() + (bit >> 3), 8);
    const std::uint64_t value = std::uint64_t{reference} + ((word >> (bit & 7)) & mask);
    overflow |= value >> 32;
    dst[i] = static_cast<std::uint32_t>(value);
  }
  if (overflow) throw Error(Errc::corrupt, "pfor value exceeds 32 bits");

  if (exceptions != 0) {
    const ByteView positions = in.bytes(exceptions);
    for (std::size_t k = 0; k < exceptions; ++k) {
      if (positions[k] >= n || (k > 0 && positions[k] <= positions[k - 1]))
        throw Error(Errc::corrupt, "pfor exception position out of range or out of order");
    }
    for (std::size_t k = 0; k < exceptions; ++k) {
      const std::uint32_t remainder = in.varint32();
      if (remainder == 0 || (std::uint64_t{remainder} >> (32 - w)) != 0)
        throw Error(Errc::corrupt, "pfor exception remainder out of range");
      const std::uint32_t pos = positions[k];
      const std::uint64_t low = dst[pos] - reference;
      const std::uint64_t value =
          std::uint64_t{reference} + (low | (std::uint64_t{remainder} << w));
      if (value >> 32) throw Error(Errc::corrupt, "pfor value exceeds 32 bits");
      dst[pos] = static_cast<std::uint32_t>(value);
    }
  }
  if (info)
    *info = {reference, w, n, static_cast<std::size_t>(exceptions), in.position() - start};
}

std::size_t read_count(ByteReader& in) {
  const std::uint64_t count = in.varint();
  // Every block costs at least three bytes.
  const std::uint64_t blocks = count / kPforBlockSize + (count % kPforBlockSize != 0);
  if (blocks > in.remaining() / 3) throw Error(Errc::truncated, "pfor stream shorter than its count");
  return static_cast<std::size_t>(count);
}

}  // namespace

void pfor_encode(std::span<const std::uint32_t> values, Bytes& out) {
  put_varint(out, values.size());
  for (std::size_t i = 0; i < values.size(); i += kPforBlockSize) {
    const auto block = values.subspan(i, std::min(kPforBlockSize, values.size() - i));
    write_block(block, plan_block(block), out);
  }
}

Bytes pfor_encode(std::span<const std::uint32_t> values) {
  Bytes out;
  pfor_encode(values, out);
  return out;
}

std::size_t pfor_encoded_size(std::span<const std::uint32_t> values) {
  std::size_t bytes = varint_size(values.size());
  for (std::size_t i = 0; i < values.size(); i += kPforBlockSize)
    bytes += plan_block(values.subspan(i, std::min(kPforBlockSize, values.size() - i))).bytes;
  return bytes;
}

void pfor_decode(ByteReader& in, std::vector<std::uint32_t>& out,
                 std::optional<std::size_t> expected_count) {
  const std::size_t count = read_count(in);
  if (expected_count && count != *expected_count)
    throw Error(Errc::corrupt, "pfor count " + std::to_string(count) + " does not match expected " +
                                   std::to_string(*expected_count));
  const std::size_t base = out.size();
  out.resize(base + count);
  for (std::size_t i = 0; i < count; i += kPforBlockSize)
    read_block(in, std::min(kPforBlockSize, count - i), out.data() + base + i, nullptr);
}

std::vector<std::uint32_t> pfor_decode(ByteView bytes) {
  ByteReader in(bytes);
  std::vector<std::uint32_t> out;
  pfor_decode(in, out);
  if (!in.empty()) throw Error(Errc::corrupt, "trailing bytes after pfor stream");
  return out;
}

std::vector<PforBlockInfo> pfor_inspect(ByteView bytes) {
  ByteReader in(bytes);
  const std::size_t count = read_count(in);
  std::vector<PforBlockInfo> blocks;
  std::array<std::uint32_t, kPforBlockSize> scratch{};
  for (std::size_t i = 0; i < count; i += kPforBlockSize) {
    PforBlockInfo info{};
    read_block(in, std::min(kPforBlockSize, count - i), scratch.data(), &info);
    blocks.push_back(info);
  }
  return blocks;
}

std::size_t pfor_block_size(std::span<const std::uint32_t> block, unsigned bit_width) {
  if (block.empty() || bit_width > 32) throw Error(Errc::invalid_argument, "bad block or width");
  const std::uint32_t reference = *std::min_element(block.begin(), block.end());
  std::size_t exceptions = 0;
  std::size_t remainder_bytes = 0;
  for (std::uint32_t v : block) {
    const std::uint32_t offset = v - reference;
    if (bit_length(offset) > bit_width) {
      ++exceptions;
      remainder_bytes += varint_size(offset >> bit_width);
    }
  }
  return varint_size(reference) + 1 + varint_size(exceptions) +
         packed_bytes(block.size(), bit_width) + exceptions + remainder_bytes;
}

unsigned pfor_choose_width(std::span<const std::uint32_t> block) {
  if (block.empty()) throw Error(Errc::invalid_argument, "empty block");
  return plan_block(block).width;
}

}  // namespace jiffy
