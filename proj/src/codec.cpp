#include "jiffy/codec.hpp"

#include <algorithm>
#include <string>

#include "jiffy/intcodec.hpp"

namespace jiffy {
namespace {

constexpr std::uint8_t kModePredicted = 0x01;
constexpr std::uint8_t kModeResidualNoDelta = 0x02;

void forward(std::span<std::uint32_t> v, ValuePipeline p) noexcept {
  if (p.delta) delta_encode_wrapped(v);
  if (p.zigzag) zigzag_encode_wrapped(v);
}

void inverse(std::span<std::uint32_t> v, ValuePipeline p) noexcept {
  if (p.zigzag) zigzag_decode_wrapped(v);
  if (p.delta) delta_decode_wrapped(v);
}

ValuePipeline residual_pipeline(bool residual_delta) noexcept { return {residual_delta, true}; }

void check_same_shape(const Scan& a, const Scan& b) {
  if (a.shape() != b.shape())
    throw Error(Errc::shape_mismatch, "scan shape differs from the reference scan");
}

EncodedScan encode_i_masked(const Scan& scan, const Bitmask& mask, const CodecOptions& options) {
  EncodedScan enc;
  enc.mode = ScanMode::Intra;
  write_mask_block(enc.mask_block, mask.packed(), options.mask_codec);
  std::vector<std::uint32_t> values;
  compact_into(scan.samples(), mask, values);
  enc.value_count = values.size();
  forward(values, ValuePipeline{});
  pfor_encode(values, enc.value_block);
  return enc;
}

EncodedScan encode_p_masked(const Scan& scan, const Bitmask& mask, const EncoderState& state,
                            const CodecOptions& options) {
  if (!state.has_reference())
    throw Error(Errc::missing_reference, "P-scan encoding needs a previous scan");
  const Scan& prev = state.previous_scan();
  check_same_shape(scan, prev);

  EncodedScan enc;
  enc.mode = ScanMode::Predicted;
  enc.residual_no_delta = !options.residual_delta;
  const Bitmask residual_mask = xor_mask(mask, state.previous_mask());
  write_mask_block(enc.mask_block, residual_mask.packed(), options.mask_codec);

  std::vector<std::uint32_t> current;
  std::vector<std::uint32_t> previous;
  compact_into(scan.samples(), mask, current);
  compact_into(prev.samples(), mask, previous);
  for (std::size_t i = 0; i < current.size(); ++i) current[i] -= previous[i];
  enc.value_count = current.size();
  forward(current, residual_pipeline(options.residual_delta));
  pfor_encode(current, enc.value_block);
  return enc;
}

ScanMode select_mode_masked(const Scan& scan, const Bitmask& mask, const EncoderState& state,
                            const ModeConfig& cfg, const CodecOptions& options) {
  if (cfg.policy == ModePolicy::ForceI || !state.has_reference()) return ScanMode::Intra;
  if (cfg.policy == ModePolicy::ForceP) return ScanMode::Predicted;
  if (cfg.test_lines == 0) throw Error(Errc::invalid_argument, "test_lines must be positive");
  const Scan& prev = state.previous_scan();
  check_same_shape(scan, prev);

  const std::size_t rows = scan.rows();
  const std::size_t cols = scan.cols();
  const std::size_t lines = std::min(cfg.test_lines, rows);
  std::vector<std::uint32_t> intra;
  std::vector<std::uint32_t> predicted;
  intra.reserve(lines * cols);
  predicted.reserve(lines * cols);
  const auto cur = scan.samples();
  const auto old = prev.samples();
  for (std::size_t k = 0; k < lines; ++k) {
    const std::size_t r = rows * k / lines;
    for (std::size_t i = r * cols, end = i + cols; i < end; ++i) {
      if (mask.test(i)) continue;
      intra.push_back(cur[i]);
      predicted.push_back(cur[i] - old[i]);
    }
  }
  const std::size_t i_bytes = encoded_values_size(intra, ValuePipeline{});
  const std::size_t p_bytes =
      encoded_values_size(predicted, residual_pipeline(options.residual_delta));
  return p_bytes < i_bytes ? ScanMode::Predicted : ScanMode::Intra;
}

}  // namespace

// ---------------------------------------------------------------------------

Bytes EncodedScan::serialize() const {
  Bytes out;
  out.reserve(serialized_size());
  std::uint8_t flags = mode == ScanMode::Predicted ? kModePredicted : 0;
  if (residual_no_delta) flags |= kModeResidualNoDelta;
  out.push_back(flags);
  put_varint(out, value_count);
  out.insert(out.end(), mask_block.begin(), mask_block.end());
  put_varint(out, value_block.size());
  out.insert(out.end(), value_block.begin(), value_block.end());
  return out;
}

std::size_t EncodedScan::serialized_size() const noexcept {
  return 1 + varint_size(value_count) + mask_block.size() + varint_size(value_block.size()) +
         value_block.size();
}

EncodedScan EncodedScan::parse(ByteView bytes) {
  ByteReader in(bytes);
  EncodedScan enc;
  const std::uint8_t flags = in.u8();
  if (flags & ~(kModePredicted | kModeResidualNoDelta))
    throw Error(Errc::corrupt, "unknown bits in scan mode byte");
  enc.mode = (flags & kModePredicted) ? ScanMode::Predicted : ScanMode::Intra;
  enc.residual_no_delta = flags & kModeResidualNoDelta;
  if (enc.mode == ScanMode::Intra && enc.residual_no_delta)
    throw Error(Errc::corrupt, "residual variant flag set on an I-scan");
  enc.value_count = in.varint();

  const std::size_t mask_start = in.position();
  in.varint();
  in.u8();
  const std::uint64_t clen = in.varint();
  if (clen > in.remaining()) throw Error(Errc::truncated, "mask block is truncated");
  in.bytes(static_cast<std::size_t>(clen));
  const auto mask = bytes.subspan(mask_start, in.position() - mask_start);
  enc.mask_block.assign(mask.begin(), mask.end());

  const std::uint64_t vlen = in.varint();
  if (vlen > in.remaining()) throw Error(Errc::truncated, "value block is truncated");
  const auto values = in.bytes(static_cast<std::size_t>(vlen));
  enc.value_block.assign(values.begin(), values.end());
  if (!in.empty()) throw Error(Errc::corrupt, "trailing bytes after encoded scan");
  return enc;
}

// ---------------------------------------------------------------------------

void encode_values(std::span<const std::uint32_t> values, ValuePipeline pipeline, Bytes& out) {
  std::vector<std::uint32_t> tmp(values.begin(), values.end());
  forward(tmp, pipeline);
  pfor_encode(tmp, out);
}

std::size_t encoded_values_size(std::span<const std::uint32_t> values, ValuePipeline pipeline) {
  std::vector<std::uint32_t> tmp(values.begin(), values.end());
  forward(tmp, pipeline);
  return pfor_encoded_size(tmp);
}

std::vector<std::uint32_t> decode_values(ByteView bytes, ValuePipeline pipeline,
                                         std::size_t expected_count) {
  ByteReader in(bytes);
  std::vector<std::uint32_t> out;
  pfor_decode(in, out, expected_count);
  if (!in.empty()) throw Error(Errc::corrupt, "trailing bytes after value block");
  inverse(out, pipeline);
  return out;
}

EncodedScan encode_i(const Scan& scan, const CodecOptions& options) {
  return encode_i_masked(scan, extract_mask(scan), options);
}

EncodedScan encode_p(const Scan& scan, const EncoderState& state, const CodecOptions& options) {
  return encode_p_masked(scan, extract_mask(scan), state, options);
}

ScanMode select_mode(const Scan& scan, const EncoderState& state, const ModeConfig& cfg,
                     const CodecOptions& options) {
  return select_mode_masked(scan, extract_mask(scan), state, cfg, options);
}

EncodedScan encode(const Scan& scan, EncoderState& state, const ModeConfig& cfg,
                   const CodecOptions& options) {
  Bitmask mask = extract_mask(scan);
  const ScanMode mode = select_mode_masked(scan, mask, state, cfg, options);
  EncodedScan enc = mode == ScanMode::Intra ? encode_i_masked(scan, mask, options)
                                            : encode_p_masked(scan, mask, state, options);
  state.update(scan, std::move(mask));
  return enc;
}

Scan decode(const EncodedScan& enc, DecoderState& state, const ScanShape& shape) {
  validate_shape(shape);
  const bool predicted = enc.mode == ScanMode::Predicted;
  if (predicted) {
    if (!state.has_reference())
      throw Error(Errc::missing_reference, "P-scan without a previous scan");
    if (state.previous_scan().shape() != shape)
      throw Error(Errc::shape_mismatch, "reference scan has a different shape");
  }

  ByteReader mask_in(enc.mask_block);
  const Bytes mask_bytes = read_mask_block(mask_in, (shape.size() + 7) / 8);
  if (!mask_in.empty()) throw Error(Errc::corrupt, "trailing bytes after mask block");
  Bitmask mask = unpack_mask(mask_bytes, shape.rows, shape.cols);
  if (predicted) mask = xor_mask(mask, state.previous_mask());

  const std::size_t count = mask.zero_count();
  if (enc.value_count != count)
    throw Error(Errc::corrupt, "value count " + std::to_string(enc.value_count) +
                                   " does not match the mask (" + std::to_string(count) + ")");

  const ValuePipeline pipeline =
      predicted ? residual_pipeline(!enc.residual_no_delta) : ValuePipeline{};
  std::vector<std::uint32_t> values = decode_values(enc.value_block, pipeline, count);
  if (predicted) {
    std::vector<std::uint32_t> previous;
    compact_into(state.previous_scan().samples(), mask, previous);
    for (std::size_t i = 0; i < values.size(); ++i) values[i] += previous[i];
  }
  // Unmasked samples must be nonzero and fit the sample width.
  const std::uint32_t ceiling = max_sample(shape.width);
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] == 0 || values[i] > ceiling)
      throw Error(Errc::corrupt, "reconstructed sample " + std::to_string(values[i]) +
                                     " is outside the valid range");

  Scan scan(shape, expand(values, mask));
  state.update(scan, std::move(mask));
  return scan;
}

// ---------------------------------------------------------------------------

Encoder::Encoder(ScanShape shape, ModeConfig cfg, CodecOptions options)
    : shape_(shape), cfg_(cfg), options_(options) {
  validate_shape(shape_);
  if (cfg_.test_lines == 0) throw Error(Errc::invalid_argument, "test_lines must be positive");
  if (!codec_available(options_.mask_codec))
    throw Error(Errc::unknown_codec, "mask codec is not available");
}

EncodedScan Encoder::encode(const Scan& scan) {
  if (scan.shape() != shape_) throw Error(Errc::shape_mismatch, "scan does not match the stream shape");
  return jiffy::encode(scan, state_, cfg_, options_);
}

Decoder::Decoder(ScanShape shape) : shape_(shape) { validate_shape(shape_); }

Scan Decoder::decode(const EncodedScan& encoded) { return jiffy::decode(encoded, state_, shape_); }

}  // namespace jiffy
