#pragma once
// Reference implementations used to cross-check the library. Everything here
// is written from the format description, deliberately naive and slow, and
// shares no code with src/.

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

namespace oracle {

inline std::uint32_t zigzag(std::int64_t x) {
  return static_cast<std::uint32_t>(2 * (x < 0 ? -x : x) + (x < 0 ? 1 : 0));
}

inline unsigned bits_needed(std::uint64_t v) {
  unsigned n = 0;
  while (v) {
    ++n;
    v /= 2;
  }
  return n;
}

inline std::size_t varint_len(std::uint64_t v) {
  std::size_t n = 1;
  while (v >= 128) {
    v /= 128;
    ++n;
  }
  return n;
}

// Residue of d modulo 2^32 mapped to [-2^31, 2^31).
inline std::int64_t centred_residue(std::int64_t d) {
  const std::int64_t m = std::int64_t{1} << 32;
  d %= m;
  if (d < 0) d += m;
  if (d >= m / 2) d -= m;
  return d;
}

// Code for one wrapped difference. -2^31 has no 32-bit ZigZag image, so it
// takes the otherwise unused code 1 (the image of "-0").
inline std::uint32_t wrapped_code(std::int64_t d) {
  const std::int64_t r = centred_residue(d);
  if (r == -(std::int64_t{1} << 31)) return 1;
  return zigzag(r);
}

// delta then ZigZag over values taken as integers mod 2^32.
inline std::vector<std::uint32_t> pipeline_codes(const std::vector<std::int64_t>& v, bool delta = true) {
  std::vector<std::uint32_t> out;
  std::int64_t prev = 0;
  for (std::int64_t x : v) {
    out.push_back(wrapped_code(delta ? x - prev : x));
    prev = x;
  }
  return out;
}

// Size of one block at a given bit width, counted from the layout:
// ref varint, width byte, exception-count varint, packed bits,
// one position byte per exception, one varint remainder per exception.
inline std::size_t block_size_at(const std::vector<std::uint32_t>& block, unsigned w) {
  std::uint32_t ref = block[0];
  for (auto v : block) ref = v < ref ? v : ref;
  std::size_t exc = 0, rem = 0;
  for (auto v : block) {
    const std::uint64_t off = std::uint64_t{v} - ref;
    if (bits_needed(off) > w) {
      ++exc;
      rem += varint_len(off >> w);
    }
  }
  return varint_len(ref) + 1 + varint_len(exc) + (block.size() * w + 7) / 8 + exc + rem;
}

// Exhaustive search over every width 0..32.
inline std::size_t best_block_size(const std::vector<std::uint32_t>& block) {
  std::size_t best = SIZE_MAX;
  for (unsigned w = 0; w <= 32; ++w) best = std::min(best, block_size_at(block, w));
  return best;
}

inline std::size_t best_stream_size(const std::vector<std::uint32_t>& v) {
  std::size_t total = varint_len(v.size());
  for (std::size_t i = 0; i < v.size(); i += 128) {
    std::vector<std::uint32_t> block(v.begin() + i, v.begin() + std::min(v.size(), i + 128));
    total += best_block_size(block);
  }
  return total;
}

struct Cursor {
  const std::vector<std::uint8_t>& b;
  std::size_t pos = 0;
  std::uint8_t byte() {
    if (pos >= b.size()) throw std::runtime_error("oracle: out of data");
    return b[pos++];
  }
  std::uint64_t varint() {
    std::uint64_t v = 0;
    for (unsigned shift = 0;; shift += 7) {
      const std::uint8_t c = byte();
      v += std::uint64_t(c & 127) << shift;
      if (c < 128) return v;
    }
  }
};

struct BlockView {
  std::uint32_t reference;
  unsigned width;
  std::size_t exceptions;
};

// Bit-at-a-time decoder for a PFOR stream.
inline std::vector<std::uint32_t> pfor_decode(const std::vector<std::uint8_t>& bytes,
                                              std::vector<BlockView>* blocks = nullptr) {
  Cursor c{bytes};
  const std::uint64_t count = c.varint();
  std::vector<std::uint32_t> out;
  for (std::uint64_t start = 0; start < count; start += 128) {
    const std::size_t n = std::min<std::uint64_t>(128, count - start);
    const std::uint64_t ref = c.varint();
    const unsigned w = c.byte();
    const std::uint64_t exc = c.varint();
    if (blocks) blocks->push_back({std::uint32_t(ref), w, std::size_t(exc)});
    const std::size_t packed = (n * w + 7) / 8;
    std::vector<std::uint8_t> bits;
    for (std::size_t i = 0; i < packed; ++i) bits.push_back(c.byte());
    std::vector<std::uint64_t> off(n, 0);
    for (std::size_t i = 0; i < n; ++i)
      for (unsigned k = 0; k < w; ++k) {
        const std::size_t bit = i * w + k;
        if ((bits[bit / 8] >> (bit % 8)) & 1) off[i] |= std::uint64_t{1} << k;
      }
    std::vector<std::size_t> pos;
    for (std::uint64_t k = 0; k < exc; ++k) pos.push_back(c.byte());
    for (std::uint64_t k = 0; k < exc; ++k) off[pos[k]] += c.varint() << w;
    for (std::size_t i = 0; i < n; ++i) out.push_back(std::uint32_t(ref + off[i]));
  }
  if (c.pos != bytes.size()) throw std::runtime_error("oracle: trailing bytes");
  return out;
}

// LSB-first packing of zero-sample flags.
inline std::vector<std::uint8_t> zero_mask_bytes(const std::vector<std::uint32_t>& samples) {
  std::vector<std::uint8_t> out((samples.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < samples.size(); ++i)
    if (samples[i] == 0) out[i / 8] |= std::uint8_t(1u << (i % 8));
  return out;
}

inline std::vector<std::uint8_t> xor_bytes(std::vector<std::uint8_t> a, const std::vector<std::uint8_t>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] ^= b[i];
  return a;
}

// Random scan contents with a given zero fraction and a smooth-ish walk so
// that deltas span small and large magnitudes.
inline std::vector<std::uint32_t> random_samples(std::mt19937_64& rng, std::size_t n, unsigned width_bytes,
                                                 double zero_fraction) {
  const std::uint64_t max = width_bytes == 4 ? 0xFFFFFFFFull : (std::uint64_t{1} << (8 * width_bytes)) - 1;
  std::uniform_real_distribution<double> u(0, 1);
  std::uniform_int_distribution<std::uint64_t> any(1, max);
  std::vector<std::uint32_t> out(n);
  std::uint64_t walk = any(rng);
  const int style = int(rng() % 3);
  for (auto& s : out) {
    if (u(rng) < zero_fraction) {
      s = 0;
      continue;
    }
    if (style == 0) {
      s = std::uint32_t(any(rng));
    } else {
      const std::int64_t step = std::int64_t(rng() % 33) - 16;
      std::int64_t next = std::int64_t(walk) + step * (style == 1 ? 1 : 1000);
      if (next < 1) next = 1;
      if (std::uint64_t(next) > max) next = std::int64_t(max);
      walk = std::uint64_t(next);
      s = std::uint32_t(walk);
    }
  }
  return out;
}

}  // namespace oracle
