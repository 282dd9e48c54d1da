#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "jiffy/bytes.hpp"
#include "jiffy/scan.hpp"

namespace jiffy {

// One bit per sample, 1 = sample is zero. Stored packed: row-major,
// LSB-first within each byte, trailing bits of the last byte zero.
class Bitmask {
 public:
  Bitmask() = default;
  Bitmask(std::size_t rows, std::size_t cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return rows_ * cols_; }

  bool test(std::size_t i) const noexcept { return (bytes_[i >> 3] >> (i & 7)) & 1u; }
  void set(std::size_t i, bool bit) noexcept {
    const auto m = static_cast<std::uint8_t>(1u << (i & 7));
    bytes_[i >> 3] = bit ? (bytes_[i >> 3] | m) : (bytes_[i >> 3] & ~m);
  }

  // Number of 1 bits (zero samples).
  std::size_t popcount() const noexcept;
  std::size_t zero_count() const noexcept { return size() - popcount(); }
  std::size_t popcount_row(std::size_t r) const noexcept;

  ByteView packed() const noexcept { return bytes_; }
  std::span<std::uint8_t> packed_mut() noexcept { return bytes_; }

  friend bool operator==(const Bitmask&, const Bitmask&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Bytes bytes_;
};

Bitmask extract_mask(const Scan& scan);

// Samples at 0-bit positions, in row-major order.
std::vector<std::uint32_t> compact(const Scan& scan, const Bitmask& mask);
void compact_into(std::span<const std::uint32_t> samples, const Bitmask& mask,
                  std::vector<std::uint32_t>& out);

// Scatters values into 0-bit positions; 1-bit positions get zero.
std::vector<std::uint32_t> expand(std::span<const std::uint32_t> values, const Bitmask& mask);

Bitmask xor_mask(const Bitmask& current, const Bitmask& previous);

Bytes pack_mask(const Bitmask& mask);
// Rejects a wrong byte count or nonzero padding bits.
Bitmask unpack_mask(ByteView bytes, std::size_t rows, std::size_t cols);

}  // namespace jiffy
