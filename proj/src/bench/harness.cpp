#include "jiffy/bench/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "jiffy/error.hpp"

namespace jiffy::bench {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0;
  for (double x : v) s += x;
  return s / double(v.size());
}

double stddev(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / double(v.size() - 1));
}

void check_uniform_shape(std::span<const Scan> scans) {
  for (const Scan& s : scans)
    if (s.shape() != scans.front().shape())
      throw Error(Errc::shape_mismatch, "all scans in a sequence must share one shape");
}

}  // namespace

std::string hardware_description() {
  std::string cpu = "unknown cpu";
  std::ifstream info("/proc/cpuinfo");
  for (std::string line; std::getline(info, line);) {
    if (line.rfind("model name", 0) == 0) {
      const auto colon = line.find(':');
      if (colon != std::string::npos) cpu = line.substr(colon + 2);
      break;
    }
  }
  return cpu + ", " + std::to_string(std::thread::hardware_concurrency()) + " hw threads";
}

BenchReport run_bench(std::span<const Scan> scans, std::size_t input_bytes_per_sample,
                      const ModeConfig& cfg, const CodecOptions& options,
                      std::size_t repetitions) {
  BenchReport report;
  report.repetitions = repetitions;
  report.hardware = hardware_description();
  if (scans.empty()) return report;
  if (repetitions == 0) throw Error(Errc::invalid_argument, "repetitions must be positive");
  check_uniform_shape(scans);
  const ScanShape shape = scans.front().shape();
  report.scan_type = std::string(to_string(shape.type));
  report.rows = shape.rows;
  report.cols = shape.cols;

  const std::size_t n = scans.size();
  std::vector<EncodedScan> encoded(n);
  std::vector<double> enc_time(n, 0.0);
  std::vector<double> dec_time(n, 0.0);
  std::vector<double> enc_rates;
  std::vector<double> dec_rates;
  bool verified = true;

  // Pass 0 is the warm-up and is not timed into the report.
  for (std::size_t pass = 0; pass <= repetitions; ++pass) {
    Encoder encoder(shape, cfg, options);
    double enc_total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto t0 = Clock::now();
      encoded[i] = encoder.encode(scans[i]);
      const double dt = seconds_since(t0);
      enc_total += dt;
      if (pass > 0) enc_time[i] += dt / double(repetitions);
    }
    Decoder decoder(shape);
    double dec_total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto t0 = Clock::now();
      Scan out = decoder.decode(encoded[i]);
      const double dt = seconds_since(t0);
      dec_total += dt;
      if (pass > 0) dec_time[i] += dt / double(repetitions);
      verified = verified && out == scans[i];
    }
    if (pass > 0) {
      enc_rates.push_back(double(n) / enc_total);
      dec_rates.push_back(double(n) / dec_total);
    }
  }

  const std::size_t points = shape.size();
  double ratio_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    FrameStats f;
    f.index = i;
    f.input_bytes = points * input_bytes_per_sample;
    f.output_bytes = encoded[i].serialized_size();
    f.ratio = double(f.input_bytes) / double(f.output_bytes);
    f.encode_seconds = enc_time[i];
    f.decode_seconds = dec_time[i];
    f.mode = encoded[i].mode;
    report.input_bytes += f.input_bytes;
    report.output_bytes += f.output_bytes;
    report.p_frames += f.mode == ScanMode::Predicted;
    ratio_sum += f.ratio;
    report.frames.push_back(f);
  }
  report.total_ratio = double(report.input_bytes) / double(report.output_bytes);
  report.mean_ratio = ratio_sum / double(n);
  report.encode_scans_per_sec = mean(enc_rates);
  report.decode_scans_per_sec = mean(dec_rates);
  report.encode_scans_per_sec_stddev = stddev(enc_rates);
  report.decode_scans_per_sec_stddev = stddev(dec_rates);
  report.encode_points_per_sec = report.encode_scans_per_sec * double(points);
  report.decode_points_per_sec = report.decode_scans_per_sec * double(points);
  report.verified = verified;
  return report;
}

std::string bench_csv(const BenchReport& r) {
  std::ostringstream os;
  os << "frame,scan_type,mode,input_bytes,output_bytes,ratio,encode_s,decode_s,"
        "encode_scans_per_sec,decode_scans_per_sec,encode_points_per_sec,decode_points_per_sec\n";
  const double points = double(r.rows * r.cols);
  for (const FrameStats& f : r.frames) {
    const double es = f.encode_seconds > 0 ? 1.0 / f.encode_seconds : 0.0;
    const double ds = f.decode_seconds > 0 ? 1.0 / f.decode_seconds : 0.0;
    os << f.index << ',' << r.scan_type << ',' << (f.mode == ScanMode::Predicted ? 'P' : 'I')
       << ',' << f.input_bytes << ',' << f.output_bytes << ',' << f.ratio << ','
       << f.encode_seconds << ',' << f.decode_seconds << ',' << es << ',' << ds << ','
       << es * points << ',' << ds * points << '\n';
  }
  os << "all," << r.scan_type << ",mixed," << r.input_bytes << ',' << r.output_bytes << ','
     << r.mean_ratio << ",,," << r.encode_scans_per_sec << ',' << r.decode_scans_per_sec << ','
     << r.encode_points_per_sec << ',' << r.decode_points_per_sec << '\n';
  return os.str();
}

std::string bench_json(const BenchReport& r) {
  nlohmann::json frames = nlohmann::json::array();
  for (const FrameStats& f : r.frames)
    frames.push_back({{"frame", f.index},
                      {"mode", f.mode == ScanMode::Predicted ? "P" : "I"},
                      {"input_bytes", f.input_bytes},
                      {"output_bytes", f.output_bytes},
                      {"ratio", f.ratio},
                      {"encode_s", f.encode_seconds},
                      {"decode_s", f.decode_seconds}});
  nlohmann::json j = {
      {"scan_type", r.scan_type},
      {"rows", r.rows},
      {"cols", r.cols},
      {"repetitions", r.repetitions},
      {"hardware", r.hardware},
      {"verified", r.verified},
      {"aggregate",
       {{"frames", r.frames.size()},
        {"p_frames", r.p_frames},
        {"input_bytes", r.input_bytes},
        {"output_bytes", r.output_bytes},
        {"mean_ratio", r.mean_ratio},
        {"total_ratio", r.total_ratio},
        {"encode_scans_per_sec", r.encode_scans_per_sec},
        {"decode_scans_per_sec", r.decode_scans_per_sec},
        {"encode_points_per_sec", r.encode_points_per_sec},
        {"decode_points_per_sec", r.decode_points_per_sec},
        {"encode_scans_per_sec_stddev", r.encode_scans_per_sec_stddev},
        {"decode_scans_per_sec_stddev", r.decode_scans_per_sec_stddev}}},
      {"frames", frames},
  };
  return j.dump(2);
}

// ---------------------------------------------------------------------------

std::size_t stream_bytes(std::span<const Scan> scans, const ModeConfig& cfg,
                         const CodecOptions& options) {
  if (scans.empty()) return 0;
  Encoder encoder(scans.front().shape(), cfg, options);
  std::size_t total = 0;
  for (const Scan& s : scans) total += encoder.encode(s).serialized_size();
  return total;
}

std::vector<SweepRow> sweep_precision(std::span<const RangeImage> images,
                                      std::span<const std::uint32_t> precisions_um,
                                      SampleWidth width, const ModeConfig& cfg,
                                      const CodecOptions& options) {
  std::vector<SweepRow> rows;
  for (std::uint32_t p : precisions_um) {
    const QuantizationSpec q{p, width};
    q.validate();
    SweepRow row;
    row.precision_um = p;
    if (!images.empty()) {
      Encoder encoder({images.front().rows, images.front().cols, width, ScanType::Range}, cfg,
                      options);
      for (const RangeImage& im : images) {
        const Scan scan = quantize(im, q, ScanType::Range);
        row.output_bytes += encoder.encode(scan).serialized_size();
        row.samples += scan.size();
        const auto samples = scan.samples();
        for (std::size_t i = 0; i < samples.size(); ++i) {
          if (samples[i] == 0) continue;
          ++row.valid_samples;
          if (samples[i] == max_sample(width)) continue;
          const double err = std::abs(dequantize_value(samples[i], q, ScanType::Range) - im.values[i]);
          row.max_error_m = std::max(row.max_error_m, err);
        }
      }
    }
    row.bits_per_sample = row.samples ? 8.0 * double(row.output_bytes) / double(row.samples) : 0.0;
    row.bits_per_measurement =
        row.valid_samples ? 8.0 * double(row.output_bytes) / double(row.valid_samples) : 0.0;
    row.ratio = row.output_bytes ? double(row.samples * 4) / double(row.output_bytes) : 0.0;
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------

AblationConfig ablation_config(AblationVariant v) noexcept {
  switch (v) {
    case AblationVariant::Pfor: return {false, {false, false}, false};
    case AblationVariant::DeltaPfor: return {false, {true, false}, false};
    case AblationVariant::DeltaZigzagPfor: return {false, {true, true}, false};
    case AblationVariant::MaskDeltaZigzagPfor: return {true, {true, true}, false};
    case AblationVariant::Full: return {true, {true, true}, true};
  }
  return {};
}

std::string_view to_string(AblationVariant v) noexcept {
  switch (v) {
    case AblationVariant::Pfor: return "pfor";
    case AblationVariant::DeltaPfor: return "delta>pfor";
    case AblationVariant::DeltaZigzagPfor: return "delta>zigzag>pfor";
    case AblationVariant::MaskDeltaZigzagPfor: return "mask>delta>zigzag>pfor";
    case AblationVariant::Full: return "mask>predict>delta>zigzag>pfor";
  }
  return "invalid";
}

std::size_t ablation_bytes(std::span<const Scan> scans, const AblationConfig& cfg,
                           const CodecOptions& options) {
  if (!cfg.mask) {
    // Whole frame, zeros included, through the value pipeline alone.
    std::size_t total = 0;
    for (const Scan& s : scans) {
      const std::size_t n = encoded_values_size(s.samples(), cfg.pipeline);
      total += n + varint_size(n);
    }
    return total;
  }
  const ModeConfig mode{cfg.predict ? ModePolicy::Auto : ModePolicy::ForceI, 4};
  return stream_bytes(scans, mode, options);
}

std::vector<AblationRow> run_ablation(std::span<const Scan> scans,
                                      std::size_t input_bytes_per_sample,
                                      const CodecOptions& options) {
  std::size_t input = 0;
  for (const Scan& s : scans) input += s.size() * input_bytes_per_sample;
  std::vector<AblationRow> rows;
  for (AblationVariant v :
       {AblationVariant::Pfor, AblationVariant::DeltaPfor, AblationVariant::DeltaZigzagPfor,
        AblationVariant::MaskDeltaZigzagPfor, AblationVariant::Full}) {
    AblationRow row;
    row.variant = v;
    row.output_bytes = ablation_bytes(scans, ablation_config(v), options);
    row.ratio = row.output_bytes ? double(input) / double(row.output_bytes) : 0.0;
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------

HeuristicReport evaluate_heuristic(std::span<const Scan> scans, const ModeConfig& cfg,
                                   const CodecOptions& options) {
  HeuristicReport report;
  if (scans.empty()) return report;
  check_uniform_shape(scans);
  ModeConfig auto_cfg = cfg;
  auto_cfg.policy = ModePolicy::Auto;
  EncoderState state;
  for (std::size_t k = 0; k < scans.size(); ++k) {
    const Scan& scan = scans[k];
    if (state.has_reference()) {
      HeuristicFrame f;
      f.index = k;
      f.i_bytes = encode_i(scan, options).serialized_size();
      f.p_bytes = encode_p(scan, state, options).serialized_size();
      f.optimal = f.p_bytes < f.i_bytes ? ScanMode::Predicted : ScanMode::Intra;
      f.chosen = select_mode(scan, state, auto_cfg, options);
      ++report.evaluated;
      if (f.chosen == f.optimal) ++report.correct;
      else if (f.chosen == ScanMode::Intra) ++report.suboptimal_i;
      else ++report.suboptimal_p;
      report.frames.push_back(f);
    }
    state.update(scan, extract_mask(scan));
  }
  return report;
}

}  // namespace jiffy::bench
