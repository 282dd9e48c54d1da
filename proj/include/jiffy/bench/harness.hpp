#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "jiffy/codec.hpp"
#include "jiffy/quantize.hpp"
#include "jiffy/scan.hpp"

namespace jiffy::bench {

// Byte counts are serialized frame payloads (container framing excluded).

struct FrameStats {
  std::size_t index = 0;
  std::size_t input_bytes = 0;
  std::size_t output_bytes = 0;
  double ratio = 0;
  double encode_seconds = 0;  // mean over repetitions
  double decode_seconds = 0;
  ScanMode mode = ScanMode::Intra;
};

struct BenchReport {
  std::string scan_type;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t repetitions = 0;
  std::vector<FrameStats> frames;

  std::size_t input_bytes = 0;
  std::size_t output_bytes = 0;
  double total_ratio = 0;  // input_bytes / output_bytes
  double mean_ratio = 0;   // mean of per-frame ratios
  std::size_t p_frames = 0;
  double encode_scans_per_sec = 0;
  double decode_scans_per_sec = 0;
  double encode_points_per_sec = 0;
  double decode_points_per_sec = 0;
  double encode_scans_per_sec_stddev = 0;  // across repetitions
  double decode_scans_per_sec_stddev = 0;
  bool verified = false;
  std::string hardware;
};

// One untimed warm-up pass, then `repetitions` timed passes over in-memory
// scans. Every pass checks the decoded scans against the input.
BenchReport run_bench(std::span<const Scan> scans, std::size_t input_bytes_per_sample,
                      const ModeConfig& cfg, const CodecOptions& options,
                      std::size_t repetitions);

std::string bench_csv(const BenchReport& report);
std::string bench_json(const BenchReport& report);
std::string hardware_description();

struct SweepRow {
  std::uint32_t precision_um = 0;
  std::size_t samples = 0;
  std::size_t valid_samples = 0;  // nonzero after quantization
  std::size_t output_bytes = 0;
  double bits_per_sample = 0;
  double bits_per_measurement = 0;  // same bytes over valid samples only
  double ratio = 0;
  double max_error_m = 0;  // worst dequantization error over valid samples
};

std::vector<SweepRow> sweep_precision(std::span<const RangeImage> images,
                                      std::span<const std::uint32_t> precisions_um,
                                      SampleWidth width, const ModeConfig& cfg,
                                      const CodecOptions& options);

enum class AblationVariant {
  Pfor,
  DeltaPfor,
  DeltaZigzagPfor,
  MaskDeltaZigzagPfor,
  Full,
};

// One rung of the ladder expressed as pipeline configuration.
struct AblationConfig {
  bool mask = false;
  ValuePipeline pipeline{false, false};
  bool predict = false;
};

AblationConfig ablation_config(AblationVariant v) noexcept;
std::string_view to_string(AblationVariant v) noexcept;

struct AblationRow {
  AblationVariant variant{};
  std::size_t output_bytes = 0;
  double ratio = 0;
};

std::size_t ablation_bytes(std::span<const Scan> scans, const AblationConfig& cfg,
                           const CodecOptions& options);
std::vector<AblationRow> run_ablation(std::span<const Scan> scans,
                                      std::size_t input_bytes_per_sample,
                                      const CodecOptions& options);

struct HeuristicFrame {
  std::size_t index = 0;
  std::size_t i_bytes = 0;
  std::size_t p_bytes = 0;
  ScanMode chosen = ScanMode::Intra;
  ScanMode optimal = ScanMode::Intra;
};

struct HeuristicReport {
  std::size_t evaluated = 0;  // frames with a reference scan
  std::size_t correct = 0;
  std::size_t suboptimal_i = 0;  // chose I where P was smaller
  std::size_t suboptimal_p = 0;  // chose P where I was smaller
  std::vector<HeuristicFrame> frames;

  double accuracy() const noexcept { return evaluated ? double(correct) / evaluated : 1.0; }
  double suboptimal_i_rate() const noexcept { return evaluated ? double(suboptimal_i) / evaluated : 0.0; }
  double suboptimal_p_rate() const noexcept { return evaluated ? double(suboptimal_p) / evaluated : 0.0; }
};

// Brute-forces both full encodings per frame and compares with the trial
// heuristic. Ties count I as optimal.
HeuristicReport evaluate_heuristic(std::span<const Scan> scans, const ModeConfig& cfg,
                                   const CodecOptions& options);

// Total serialized bytes for a whole sequence under one policy.
std::size_t stream_bytes(std::span<const Scan> scans, const ModeConfig& cfg,
                         const CodecOptions& options);

}  // namespace jiffy::bench
