#include "jiffy/mask.hpp"

#include <bit>
#include <string>

#include "jiffy/error.hpp"

namespace jiffy {

Bitmask::Bitmask(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), bytes_((rows * cols + 7) / 8, 0) {}

std::size_t Bitmask::popcount() const noexcept {
  std::size_t n = 0;
  for (std::uint8_t b : bytes_) n += std::popcount(b);
  return n;
}

std::size_t Bitmask::popcount_row(std::size_t r) const noexcept {
  std::size_t n = 0;
  for (std::size_t i = r * cols_, end = i + cols_; i < end; ++i) n += test(i);
  return n;
}

Bitmask extract_mask(const Scan& scan) {
  Bitmask mask(scan.rows(), scan.cols());
  const auto samples = scan.samples();
  auto bytes = mask.packed_mut();
  const std::size_t full = samples.size() / 8;
  for (std::size_t b = 0; b < full; ++b) {
    const std::uint32_t* s = samples.data() + b * 8;
    unsigned v = 0;
    for (unsigned k = 0; k < 8; ++k) v |= unsigned(s[k] == 0) << k;
    bytes[b] = static_cast<std::uint8_t>(v);
  }
  for (std::size_t i = full * 8; i < samples.size(); ++i) mask.set(i, samples[i] == 0);
  return mask;
}

void compact_into(std::span<const std::uint32_t> samples, const Bitmask& mask,
                  std::vector<std::uint32_t>& out) {
  if (samples.size() != mask.size())
    throw Error(Errc::shape_mismatch, "mask does not match the scan shape");
  const std::size_t count = mask.zero_count();
  // One slack slot lets the loop store unconditionally.
  out.resize(count + 1);
  std::uint32_t* dst = out.data();
  std::size_t n = 0;
  const ByteView bits = mask.packed();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    dst[n] = samples[i];
    n += ((bits[i >> 3] >> (i & 7)) & 1u) ^ 1u;
  }
  out.resize(count);
}

std::vector<std::uint32_t> compact(const Scan& scan, const Bitmask& mask) {
  if (scan.rows() != mask.rows() || scan.cols() != mask.cols())
    throw Error(Errc::shape_mismatch, "mask does not match the scan shape");
  std::vector<std::uint32_t> out;
  compact_into(scan.samples(), mask, out);
  return out;
}

std::vector<std::uint32_t> expand(std::span<const std::uint32_t> values, const Bitmask& mask) {
  if (values.size() != mask.zero_count())
    throw Error(Errc::corrupt, "value count " + std::to_string(values.size()) +
                                   " does not match the mask (" +
                                   std::to_string(mask.zero_count()) + " valid samples)");
  std::vector<std::uint32_t> out(mask.size(), 0u);
  std::size_t j = 0;
  for (std::size_t i = 0; i < out.size(); ++i)
    if (!mask.test(i)) out[i] = values[j++];
  return out;
}

Bitmask xor_mask(const Bitmask& current, const Bitmask& previous) {
  if (current.rows() != previous.rows() || current.cols() != previous.cols())
    throw Error(Errc::shape_mismatch, "masks differ in shape");
  Bitmask out(current.rows(), current.cols());
  auto dst = out.packed_mut();
  const ByteView a = current.packed();
  const ByteView b = previous.packed();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = a[i] ^ b[i];
  return out;
}

Bytes pack_mask(const Bitmask& mask) {
  const ByteView bytes = mask.packed();
  return Bytes(bytes.begin(), bytes.end());
}

Bitmask unpack_mask(ByteView bytes, std::size_t rows, std::size_t cols) {
  Bitmask mask(rows, cols);
  auto dst = mask.packed_mut();
  if (bytes.size() != dst.size())
    throw Error(Errc::corrupt, "mask holds " + std::to_string(bytes.size()) + " bytes, expected " +
                                   std::to_string(dst.size()));
  std::copy(bytes.begin(), bytes.end(), dst.begin());
  const std::size_t tail = mask.size() % 8;
  if (tail != 0 && (dst.back() >> tail) != 0)
    throw Error(Errc::corrupt, "mask padding bits are not zero");
  return mask;
}

}  // namespace jiffy
