// jiffy command-line tool: compress, decompress, verify, benchmark and
// analyse sequences of LiDAR scans.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jiffy/bench/harness.hpp"
#include "jiffy/bench/raw_io.hpp"
#include "jiffy/bench/synthetic.hpp"
#include "jiffy/codec.hpp"
#include "jiffy/container.hpp"
#include "jiffy/error.hpp"

namespace {

using namespace jiffy;
using namespace jiffy::bench;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFailure = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InputOptions {
  std::string input;
  std::string shape;
  std::string etype = "float32";
  std::string scan_type;
  int width = 0;
  std::size_t stride = 0;
  std::uint32_t precision_um = 1000;
};

void add_input_options(CLI::App* cmd, InputOptions& o, bool shape_required = true) {
  cmd->add_option("--input", o.input, "Raw little-endian frame file")->required();
  auto* shape = cmd->add_option("--shape", o.shape, "Frame shape as ROWSxCOLS");
  if (shape_required) shape->required();
  cmd->add_option("--etype", o.etype, "Element type")
      ->check(CLI::IsMember({"float32", "uint32", "uint16", "uint8"}));
  cmd->add_option("--scan-type", o.scan_type,
                  "range, range2, signal, signal2, reflectivity, reflectivity2, nearir, generic");
  cmd->add_option("--width", o.width, "Sample width in bytes (1, 2 or 4)")
      ->check(CLI::IsMember({1, 2, 4}));
  cmd->add_option("--stride", o.stride, "Bytes between frame starts (default: packed)");
  cmd->add_option("--precision-um", o.precision_um, "Quantization step in micrometers")
      ->check(CLI::PositiveNumber);
}

std::pair<std::size_t, std::size_t> parse_shape(const std::string& text) {
  std::size_t rows = 0, cols = 0;
  char x = 0;
  std::istringstream is(text);
  if (!(is >> rows >> x >> cols) || (x != 'x' && x != 'X') || rows == 0 || cols == 0 ||
      !is.eof() || rows > 0xFFFF || cols > 0xFFFF)
    throw UsageError("shape must be ROWSxCOLS with both in 1..65535, got '" + text + "'");
  return {rows, cols};
}

struct ResolvedInput {
  RawSequenceSpec raw;
  QuantizationSpec quant;
};

ResolvedInput resolve(const InputOptions& o) {
  ResolvedInput r;
  const auto etype = parse_element_type(o.etype);
  if (!etype) throw UsageError("unknown element type " + o.etype);
  r.raw.path = o.input;
  r.raw.element_type = *etype;
  std::tie(r.raw.rows, r.raw.cols) = parse_shape(o.shape);
  r.raw.frame_stride = o.stride;
  r.raw.scan_type = natural_scan_type(*etype);
  if (!o.scan_type.empty()) {
    const auto t = parse_scan_type(o.scan_type);
    if (!t) throw UsageError("unknown scan type " + o.scan_type);
    r.raw.scan_type = *t;
  }
  r.quant.precision_um = o.precision_um;
  r.quant.width = o.width ? static_cast<SampleWidth>(o.width) : natural_width(*etype);
  return r;
}

ModeConfig parse_mode(const std::string& mode, std::size_t test_lines) {
  ModeConfig cfg;
  cfg.test_lines = test_lines;
  if (mode == "auto") cfg.policy = ModePolicy::Auto;
  else if (mode == "i") cfg.policy = ModePolicy::ForceI;
  else if (mode == "p") cfg.policy = ModePolicy::ForceP;
  else throw UsageError("mode must be auto, i or p");
  return cfg;
}

CodecOptions parse_codec(const std::string& name) {
  CodecOptions options;
  if (!name.empty()) {
    const auto codec = parse_byte_codec(name);
    if (!codec || !codec_available(*codec)) throw UsageError("mask codec " + name + " is not available");
    options.mask_codec = *codec;
  }
  return options;
}

std::string format_ratio(std::size_t in, std::size_t out, std::size_t frames) {
  if (frames == 0 || out == 0) return "n/a";
  std::ostringstream os;
  os << std::fixed << std::setprecision(3) << double(in) / double(out);
  return os.str();
}

// Decodes the container and compares it against the raw input frame by
// frame. Returns the index of the first mismatching frame, if any.
std::optional<std::size_t> verify_against(const std::string& container_path, ResolvedInput in,
                                          std::size_t& frames_checked) {
  std::ifstream file(container_path, std::ios::binary);
  if (!file) throw Error(Errc::io, "cannot open " + container_path);
  StreamReader reader(file);
  const StreamHeader& h = reader.header();
  in.quant.precision_um = h.precision_um;
  in.quant.width = h.width;
  in.raw.scan_type = h.scan_type;
  if (in.raw.rows != h.rows || in.raw.cols != h.cols)
    throw Error(Errc::shape_mismatch, "container shape does not match the raw input shape");
  RawSequenceReader raw(in.raw);
  Decoder decoder(h.shape());
  frames_checked = 0;
  while (true) {
    auto encoded = reader.next();
    auto expected = raw.next_scan(in.quant);
    if (!encoded && !expected) return std::nullopt;
    if (!encoded || !expected) return frames_checked;
    Scan decoded = [&] {
      try {
        return decoder.decode(*encoded);
      } catch (const Error& e) {
        throw e.at_frame(frames_checked);
      }
    }();
    if (!(decoded == *expected)) return frames_checked;
    ++frames_checked;
  }
}

int cmd_compress(const InputOptions& io, const std::string& output, const std::string& mode,
                 std::size_t test_lines, const std::string& codec, bool verify) {
  ResolvedInput in = resolve(io);
  const ModeConfig cfg = parse_mode(mode, test_lines);
  const CodecOptions options = parse_codec(codec);
  RawSequenceReader reader(in.raw);

  StreamHeader header;
  header.scan_type = in.raw.scan_type;
  header.rows = static_cast<std::uint16_t>(in.raw.rows);
  header.cols = static_cast<std::uint16_t>(in.raw.cols);
  header.width = in.quant.width;
  header.precision_um = in.quant.precision_um;
  header.mask_codec = options.mask_codec;
  header.frame_count = static_cast<std::uint32_t>(reader.frame_count());

  std::ofstream out(output, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io, "cannot create " + output);
  StreamWriter writer(out, header);
  Encoder encoder(header.shape(), cfg, options);
  double encode_seconds = 0.0;
  std::size_t p_frames = 0;
  std::size_t payload_bytes = 0;
  while (auto scan = reader.next_scan(in.quant)) {
    const auto t0 = std::chrono::steady_clock::now();
    EncodedScan enc = encoder.encode(*scan);
    encode_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    p_frames += enc.mode == ScanMode::Predicted;
    payload_bytes += enc.serialized_size();
    writer.write(enc);
  }
  writer.finish();
  out.close();

  const std::size_t frames = writer.frames_written();
  const std::size_t in_bytes = frames * in.raw.frame_bytes();
  std::cout << "frames " << frames << ", input " << in_bytes << " B, output "
            << writer.bytes_written() << " B, ratio "
            << format_ratio(in_bytes, writer.bytes_written(), frames) << ", P-scans " << p_frames;
  if (frames && encode_seconds > 0)
    std::cout << ", encode " << std::fixed << std::setprecision(1) << frames / encode_seconds
              << " scans/s";
  std::cout << '\n';

  if (verify) {
    std::size_t checked = 0;
    if (auto bad = verify_against(output, in, checked)) {
      std::cerr << "verify: mismatch at frame " << *bad << '\n';
      return kExitFailure;
    }
    std::cout << "verify: ok (" << checked << " frames)\n";
  }
  return kExitOk;
}

int cmd_decompress(const std::string& input, const std::string& output, const std::string& etype,
                   bool invalid_as_zero) {
  std::ifstream file(input, std::ios::binary);
  if (!file) throw Error(Errc::io, "cannot open " + input);
  StreamReader reader(file);
  const StreamHeader& h = reader.header();
  ElementType type;
  if (etype.empty()) {
    type = is_range_type(h.scan_type) ? ElementType::Float32
           : h.width == SampleWidth::One ? ElementType::Uint8
           : h.width == SampleWidth::Two ? ElementType::Uint16
                                         : ElementType::Uint32;
  } else {
    const auto t = parse_element_type(etype);
    if (!t) throw UsageError("unknown element type " + etype);
    type = *t;
  }
  std::ofstream out(output, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io, "cannot create " + output);
  Decoder decoder(h.shape());
  const QuantizationSpec q{h.precision_um, h.width};
  std::size_t frames = 0;
  while (true) {
    const std::size_t index = reader.frames_read();
    auto enc = reader.next();
    if (!enc) break;
    try {
      write_raw_frame(out, decoder.decode(*enc), type, q, invalid_as_zero);
    } catch (const Error& e) {
      throw e.at_frame(index);
    }
    ++frames;
  }
  std::cout << "frames " << frames << ", shape " << h.rows << "x" << h.cols << ", "
            << to_string(type) << '\n';
  return kExitOk;
}

int cmd_verify(InputOptions io, const std::string& container) {
  if (io.shape.empty()) {
    std::ifstream file(container, std::ios::binary);
    if (!file) throw Error(Errc::io, "cannot open " + container);
    StreamReader reader(file);
    io.shape = std::to_string(reader.header().rows) + "x" + std::to_string(reader.header().cols);
  }
  std::size_t checked = 0;
  if (auto bad = verify_against(container, resolve(io), checked)) {
    std::cerr << "verify: mismatch at frame " << *bad << '\n';
    return kExitFailure;
  }
  std::cout << "verify: ok (" << checked << " frames)\n";
  return kExitOk;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(Errc::io, "cannot create " + path);
  out << text;
}

int cmd_bench(const InputOptions& io, std::size_t reps, const std::string& mode,
              std::size_t test_lines, const std::string& format, const std::string& output) {
  const ResolvedInput in = resolve(io);
  const auto scans = load_scans(in.raw, in.quant);
  const BenchReport report = run_bench(scans, element_size(in.raw.element_type),
                                       parse_mode(mode, test_lines), CodecOptions{}, reps);
  if (format == "json") {
    emit(bench_json(report) + "\n", output);
  } else {
    emit(bench_csv(report), output);
  }
  std::cerr << "scan type " << report.scan_type << ": " << std::fixed << std::setprecision(1)
            << report.encode_scans_per_sec << " (+/- " << report.encode_scans_per_sec_stddev
            << ") encode scans/s, " << report.decode_scans_per_sec << " decode scans/s, "
            << std::setprecision(2) << report.encode_points_per_sec / 1e6
            << " M points/s encode, ratio " << std::setprecision(3) << report.mean_ratio
            << (report.verified ? "" : " [VERIFY FAILED]") << '\n'
            << "hardware: " << report.hardware << '\n';
  return report.verified ? kExitOk : kExitFailure;
}

int cmd_sweep(const InputOptions& io, const std::vector<std::uint32_t>& precisions,
              const std::string& mode) {
  ResolvedInput in = resolve(io);
  if (in.raw.element_type != ElementType::Float32)
    throw UsageError("sweep needs float32 range input");
  const auto images = load_images(in.raw);
  const auto rows = sweep_precision(images, precisions, in.quant.width, parse_mode(mode, 4), {});
  std::cout << "precision_um,bits_per_sample,bits_per_measurement,ratio,output_bytes,max_error_m\n";
  for (const SweepRow& r : rows)
    std::cout << r.precision_um << ',' << r.bits_per_sample << ',' << r.bits_per_measurement << ',' << r.ratio << ','
              << r.output_bytes << ',' << r.max_error_m << '\n';
  return kExitOk;
}

int cmd_ablate(const InputOptions& io) {
  const ResolvedInput in = resolve(io);
  const auto scans = load_scans(in.raw, in.quant);
  const auto rows = run_ablation(scans, element_size(in.raw.element_type), {});
  std::cout << "variant,ratio,output_bytes\n";
  for (const AblationRow& r : rows)
    std::cout << to_string(r.variant) << ',' << r.ratio << ',' << r.output_bytes << '\n';
  return kExitOk;
}

int cmd_heuristic(const InputOptions& io, std::size_t test_lines) {
  const ResolvedInput in = resolve(io);
  const auto scans = load_scans(in.raw, in.quant);
  const auto report = evaluate_heuristic(scans, parse_mode("auto", test_lines), {});
  std::cout << "frames_evaluated,accuracy,suboptimal_i,suboptimal_p\n"
            << report.evaluated << ',' << report.accuracy() << ',' << report.suboptimal_i_rate()
            << ',' << report.suboptimal_p_rate() << '\n';
  return kExitOk;
}

int cmd_gen(const std::string& kind, std::size_t frames, const std::string& shape, double sparsity,
            std::uint64_t seed, double noise_m, const std::string& output) {
  SyntheticConfig cfg;
  const auto k = parse_synthetic_kind(kind);
  if (!k) throw UsageError("unknown synthetic kind " + kind);
  cfg.kind = *k;
  cfg.frames = frames;
  if (shape.empty()) {
    cfg.rows = cfg.kind == SyntheticKind::SparseVertical ? 16 : 128;
    cfg.cols = 1024;
  } else {
    std::tie(cfg.rows, cfg.cols) = parse_shape(shape);
  }
  cfg.sparsity = sparsity;
  cfg.seed = seed;
  cfg.noise_m = noise_m;
  std::ofstream out(output, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io, "cannot create " + output);
  SyntheticGenerator gen(cfg);
  for (std::size_t i = 0; i < frames; ++i) write_raw_image(out, gen.frame(i));
  out.close();
  if (!out) throw Error(Errc::io, "failed writing " + output);
  std::cout << "wrote " << frames << " " << to_string(cfg.kind) << " frames of " << cfg.rows
            << "x" << cfg.cols << " float32 to " << output << '\n';
  return kExitOk;
}

bool is_stream_failure(Errc code) {
  switch (code) {
    case Errc::truncated:
    case Errc::corrupt:
    case Errc::bad_magic:
    case Errc::unsupported_version:
    case Errc::crc_mismatch:
    case Errc::unknown_codec:
    case Errc::missing_reference:
      return true;
    default:
      return false;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"jiffy: lossless LiDAR scan sequence compression"};
  app.require_subcommand(1);

  InputOptions compress_in;
  std::string compress_out, mode = "auto", codec;
  std::size_t test_lines = 4;
  bool compress_verify = false;
  auto* compress = app.add_subcommand("compress", "Compress a raw frame file into a container");
  add_input_options(compress, compress_in);
  compress->add_option("--output", compress_out, "Container file to write")->required();
  compress->add_option("--mode", mode, "Scan coding policy")->check(CLI::IsMember({"auto", "i", "p"}));
  compress->add_option("--test-lines", test_lines, "Scanlines used by the mode heuristic")
      ->check(CLI::PositiveNumber);
  compress->add_option("--codec", codec, "Mask byte codec (zstd, deflate, stored)");
  compress->add_flag("--verify", compress_verify, "Decode and compare after writing");

  std::string decompress_in, decompress_out, decompress_etype;
  bool invalid_as_zero = false;
  auto* decompress = app.add_subcommand("decompress", "Decode a container into raw frames");
  decompress->add_option("--input", decompress_in, "Container file")->required();
  decompress->add_option("--output", decompress_out, "Raw output file")->required();
  decompress->add_option("--etype", decompress_etype, "Output element type (default by scan type)")
      ->check(CLI::IsMember({"float32", "uint32", "uint16", "uint8"}));
  decompress->add_flag("--invalid-as-zero", invalid_as_zero, "Write invalid float samples as 0");

  InputOptions verify_in;
  std::string verify_container;
  auto* verify = app.add_subcommand("verify", "Check a container against its raw input");
  add_input_options(verify, verify_in, false);
  verify->add_option("--container", verify_container, "Container file")->required();

  InputOptions bench_in;
  std::size_t reps = 3;
  std::string bench_format = "csv", bench_out, bench_mode = "auto";
  auto* bench = app.add_subcommand("bench", "Measure ratio and throughput");
  add_input_options(bench, bench_in);
  bench->add_option("--reps", reps, "Timed repetitions after one warm-up pass")->check(CLI::PositiveNumber);
  bench->add_option("--mode", bench_mode, "Scan coding policy")->check(CLI::IsMember({"auto", "i", "p"}));
  bench->add_option("--format", bench_format, "Report format")->check(CLI::IsMember({"csv", "json"}));
  bench->add_option("--report", bench_out, "Write the report to a file instead of stdout");

  InputOptions sweep_in;
  std::vector<std::uint32_t> precisions = {1000, 2000, 4000, 8000};
  auto* sweep = app.add_subcommand("sweep", "Bits per sample across quantization precisions");
  add_input_options(sweep, sweep_in);
  sweep->add_option("--precisions", precisions, "Comma-separated micrometer steps")->delimiter(',');

  InputOptions ablate_in;
  auto* ablate = app.add_subcommand("ablate", "Compression ratio of each pipeline stage");
  add_input_options(ablate, ablate_in);

  InputOptions heuristic_in;
  std::size_t heuristic_lines = 4;
  auto* heuristic = app.add_subcommand("heuristic-eval", "Compare mode heuristic with brute force");
  add_input_options(heuristic, heuristic_in);
  heuristic->add_option("--test-lines", heuristic_lines, "Scanlines used by the heuristic")
      ->check(CLI::PositiveNumber);

  std::string gen_kind = "static_scene", gen_shape, gen_out;
  std::size_t gen_frames = 100;
  double gen_sparsity = 0.3, gen_noise = 0.012;
  std::uint64_t gen_seed = 1;
  auto* gen = app.add_subcommand("gen", "Generate a synthetic float32 range sequence");
  gen->add_option("--kind", gen_kind, "static_scene, driving_like, random, sparse_vertical");
  gen->add_option("--frames", gen_frames, "Number of frames");
  gen->add_option("--shape", gen_shape, "ROWSxCOLS (default 128x1024, 16x1024 for sparse_vertical)");
  gen->add_option("--sparsity", gen_sparsity, "Target fraction of invalid samples")
      ->check(CLI::Range(0.0, 1.0));
  gen->add_option("--noise", gen_noise, "Per-frame range noise std dev in meters");
  gen->add_option("--seed", gen_seed, "Random seed");
  gen->add_option("--output", gen_out, "Raw float32 output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*compress)
      return cmd_compress(compress_in, compress_out, mode, test_lines, codec, compress_verify);
    if (*decompress) return cmd_decompress(decompress_in, decompress_out, decompress_etype, invalid_as_zero);
    if (*verify) return cmd_verify(verify_in, verify_container);
    if (*bench) return cmd_bench(bench_in, reps, bench_mode, test_lines, bench_format, bench_out);
    if (*sweep) return cmd_sweep(sweep_in, precisions, "auto");
    if (*ablate) return cmd_ablate(ablate_in);
    if (*heuristic) return cmd_heuristic(heuristic_in, heuristic_lines);
    if (*gen) return cmd_gen(gen_kind, gen_frames, gen_shape, gen_sparsity, gen_seed, gen_noise, gen_out);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what();
    if (e.frame()) std::cerr << " (frame " << *e.frame() << ")";
    std::cerr << '\n';
    return is_stream_failure(e.code()) ? kExitFailure : kExitUsage;
  }
  return kExitUsage;
}
