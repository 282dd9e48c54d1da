#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "jiffy/byte_codec.hpp"
#include "jiffy/bytes.hpp"
#include "jiffy/mask.hpp"
#include "jiffy/scan.hpp"

namespace jiffy {

enum class ScanMode : std::uint8_t { Intra = 0, Predicted = 1 };

enum class ModePolicy { Auto, ForceI, ForceP };

struct ModeConfig {
  ModePolicy policy = ModePolicy::Auto;
  std::size_t test_lines = 4;
};

// Stages of the value pipeline. The shipping codec enables all of them; the
// ablation harness switches stages off.
struct ValuePipeline {
  bool delta = true;
  bool zigzag = true;
};

struct CodecOptions {
  ByteCodec mask_codec = default_mask_codec();
  // Spatial delta on P-scan residuals. Off sets the residual-variant bit.
  bool residual_delta = true;
};

struct EncodedScan {
  ScanMode mode = ScanMode::Intra;
  bool residual_no_delta = false;
  std::uint64_t value_count = 0;
  Bytes mask_block;
  Bytes value_block;

  // Wire layout: [mode: u8, bit0 = P, bit1 = residual variant]
  //              [value_count: varint] [mask_block]
  //              [value_block_len: varint] [value_block]
  Bytes serialize() const;
  std::size_t serialized_size() const noexcept;
  // The whole input must be one encoded scan.
  static EncodedScan parse(ByteView bytes);

  friend bool operator==(const EncodedScan&, const EncodedScan&) = default;
};

// Previous scan and its mask. Encoder and decoder each keep one.
class ReferenceState {
 public:
  bool has_reference() const noexcept { return previous_.has_value(); }
  const Scan& previous_scan() const { return *previous_; }
  const Bitmask& previous_mask() const { return previous_mask_; }

  void update(Scan scan, Bitmask mask) {
    previous_ = std::move(scan);
    previous_mask_ = std::move(mask);
  }
  void reset() noexcept {
    previous_.reset();
    previous_mask_ = Bitmask();
  }

 private:
  std::optional<Scan> previous_;
  Bitmask previous_mask_;
};

using EncoderState = ReferenceState;
using DecoderState = ReferenceState;

// Value pipeline: delta -> ZigZag -> PFOR, modulo 2^32. Appends to out.
void encode_values(std::span<const std::uint32_t> values, ValuePipeline pipeline, Bytes& out);
std::size_t encoded_values_size(std::span<const std::uint32_t> values, ValuePipeline pipeline);
std::vector<std::uint32_t> decode_values(ByteView bytes, ValuePipeline pipeline,
                                         std::size_t expected_count);

EncodedScan encode_i(const Scan& scan, const CodecOptions& options = {});
EncodedScan encode_p(const Scan& scan, const EncoderState& state, const CodecOptions& options = {});

// Trial-compresses cfg.test_lines evenly spaced rows with both value
// pipelines (masks excluded) and returns the cheaper mode; ties go to I.
ScanMode select_mode(const Scan& scan, const EncoderState& state, const ModeConfig& cfg,
                     const CodecOptions& options = {});

// Encodes per the policy and stores scan as the new reference.
EncodedScan encode(const Scan& scan, EncoderState& state, const ModeConfig& cfg,
                   const CodecOptions& options = {});

// Bit-exact reconstruction; updates the reference on success.
Scan decode(const EncodedScan& encoded, DecoderState& state, const ScanShape& shape);

// Stream-level wrappers that pin the shape.
class Encoder {
 public:
  Encoder(ScanShape shape, ModeConfig cfg = {}, CodecOptions options = {});
  EncodedScan encode(const Scan& scan);
  const ScanShape& shape() const noexcept { return shape_; }
  const EncoderState& state() const noexcept { return state_; }

 private:
  ScanShape shape_;
  ModeConfig cfg_;
  CodecOptions options_;
  EncoderState state_;
};

class Decoder {
 public:
  explicit Decoder(ScanShape shape);
  Scan decode(const EncodedScan& encoded);
  const ScanShape& shape() const noexcept { return shape_; }

 private:
  ScanShape shape_;
  DecoderState state_;
};

}  // namespace jiffy
