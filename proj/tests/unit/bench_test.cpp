#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <cstring>
#include <random>

#include <unistd.h>

#include "jiffy/bench/harness.hpp"
#include "jiffy/bench/raw_io.hpp"
#include "jiffy/bench/synthetic.hpp"
#include "jiffy/error.hpp"

using namespace jiffy;
using namespace jiffy::bench;
namespace fs = std::filesystem;

namespace {

SyntheticConfig small(SyntheticKind kind, std::size_t frames = 6) {
  SyntheticConfig cfg;
  cfg.kind = kind;
  cfg.frames = frames;
  cfg.rows = 32;
  cfg.cols = 256;
  return cfg;
}

double invalid_fraction(const std::vector<RangeImage>& frames) {
  std::size_t bad = 0, total = 0;
  for (const auto& f : frames)
    for (double v : f.values) {
      bad += std::isnan(v);
      ++total;
    }
  return double(bad) / double(total);
}

std::vector<Scan> quantized(const std::vector<RangeImage>& images) {
  std::vector<Scan> out;
  for (const auto& im : images) out.push_back(quantize(im, {}));
  return out;
}

struct TempFile {
  fs::path path;
  explicit TempFile(const std::string& name)
      : path(fs::temp_directory_path() / ("jiffy_unit_" + std::to_string(::getpid()) + "_" + name)) {}
  ~TempFile() { fs::remove(path); }
};

}  // namespace

TEST_CASE("synthetic output is deterministic under a seed") {
  for (auto kind : {SyntheticKind::StaticScene, SyntheticKind::DrivingLike, SyntheticKind::Random,
                    SyntheticKind::SparseVertical}) {
    CAPTURE(to_string(kind));
    SyntheticConfig cfg = small(kind, 3);
    const auto a = generate(cfg);
    const auto b = generate(cfg);
    REQUIRE(a.size() == 3);
    for (std::size_t i = 0; i < a.size(); ++i)
      CHECK(std::memcmp(a[i].values.data(), b[i].values.data(), a[i].values.size() * sizeof(double)) == 0);
    // Random access gives the same frame.
    SyntheticGenerator g(cfg);
    const RangeImage f2 = g.frame(2);
    CHECK(std::memcmp(f2.values.data(), a[2].values.data(), f2.values.size() * sizeof(double)) == 0);
    cfg.seed = 99;
    const auto c = generate(cfg);
    CHECK(std::memcmp(c[1].values.data(), a[1].values.data(), a[1].values.size() * sizeof(double)) != 0);
    CHECK(parse_synthetic_kind(to_string(kind)) == kind);
  }
}

TEST_CASE("sparsity parameter controls the zero fraction") {
  for (double target : {0.1, 0.3, 0.5}) {
    SyntheticConfig cfg = small(SyntheticKind::StaticScene, 4);
    cfg.rows = 64;
    cfg.cols = 512;
    cfg.sparsity = target;
    CHECK(invalid_fraction(generate(cfg)) == doctest::Approx(target).epsilon(0.1));
  }
  SyntheticConfig r = small(SyntheticKind::Random, 4);
  r.sparsity = 0.3;
  CHECK(invalid_fraction(generate(r)) == doctest::Approx(0.3).epsilon(0.1));
}

TEST_CASE("sparse vertical data is sparser than the street scene") {
  SyntheticConfig v = small(SyntheticKind::SparseVertical, 3);
  v.rows = 16;
  SyntheticConfig s = small(SyntheticKind::StaticScene, 3);
  s.sparsity = 0;
  CHECK(invalid_fraction(generate(v)) > 2 * invalid_fraction(generate(s)));
}

TEST_CASE("static scene is more temporally correlated than driving") {
  SyntheticConfig s = small(SyntheticKind::StaticScene, 8);
  SyntheticConfig d = small(SyntheticKind::DrivingLike, 8);
  d.frames = 60;  // reach the moving part of the cycle
  auto dframes = generate(d);
  dframes.erase(dframes.begin(), dframes.begin() + 50);
  CHECK(temporal_correlation(generate(s)) > temporal_correlation(dframes));
}

TEST_CASE("raw float files round-trip through the reader") {
  TempFile tmp("frames.f32");
  SyntheticConfig cfg = small(SyntheticKind::StaticScene, 3);
  const auto images = generate(cfg);
  {
    std::ofstream out(tmp.path, std::ios::binary);
    for (const auto& im : images) write_raw_image(out, im);
  }
  RawSequenceSpec spec{tmp.path, ElementType::Float32, 32, 256, 0, ScanType::Range};
  RawSequenceReader reader(spec);
  CHECK(reader.frame_count() == 3);
  const QuantizationSpec q{};
  for (const auto& im : images) {
    auto s = reader.next_scan(q);
    REQUIRE(s);
    // float32 storage may move a value across a rounding boundary only when
    // it sits within float precision of a tie; compare with a 1-step slack.
    const Scan expect = quantize(im, q);
    for (std::size_t i = 0; i < expect.size(); ++i) {
      const auto a = std::int64_t(s->samples()[i]), b = std::int64_t(expect.samples()[i]);
      REQUIRE(std::abs(a - b) <= (a && b ? 1 : 0));
    }
  }
  CHECK_FALSE(reader.next_scan(q));
}

TEST_CASE("raw integer frames, strides and bad sizes") {
  TempFile tmp("frames.u16");
  {
    std::ofstream out(tmp.path, std::ios::binary);
    for (std::uint16_t f = 0; f < 2; ++f) {
      for (std::uint16_t v = 0; v < 6; ++v) {
        const std::uint16_t x = std::uint16_t(v * 1000 + f);
        out.write(reinterpret_cast<const char*>(&x), 2);
      }
      out.write("PAD!", 4);
    }
  }
  RawSequenceSpec spec{tmp.path, ElementType::Uint16, 2, 3, 16, ScanType::Signal};
  const auto scans = load_scans(spec, {1000, SampleWidth::Two});
  REQUIRE(scans.size() == 2);
  CHECK(scans[1].at(1, 2) == 5001);
  CHECK(scans[0].type() == ScanType::Signal);

  RawSequenceSpec packed{tmp.path, ElementType::Uint16, 5, 1, 0, ScanType::Signal};
  CHECK_THROWS_AS((RawSequenceReader{packed}), Error);
  RawSequenceSpec narrow{tmp.path, ElementType::Uint16, 2, 3, 16, ScanType::Signal};
  CHECK_THROWS_AS((load_scans(narrow, {1000, SampleWidth::One})), Error);
  RawSequenceSpec missing{tmp.path.string() + ".nope", ElementType::Uint16, 2, 3, 0, ScanType::Signal};
  CHECK_THROWS_AS((RawSequenceReader{missing}), Error);
}

TEST_CASE("bench report shape") {
  SyntheticConfig cfg = small(SyntheticKind::StaticScene, 5);
  const auto scans = quantized(generate(cfg));
  const BenchReport r = run_bench(scans, 4, {}, {}, 3);
  CHECK(r.verified);
  CHECK(r.frames.size() == 5);
  CHECK(r.repetitions == 3);
  CHECK(r.total_ratio > 1.0);
  CHECK(r.encode_scans_per_sec > 0);
  CHECK(r.encode_points_per_sec == doctest::Approx(r.encode_scans_per_sec * 32 * 256));
  CHECK(r.encode_scans_per_sec_stddev >= 0);
  double mean = 0;
  for (const auto& f : r.frames) {
    CHECK(f.ratio == doctest::Approx(double(f.input_bytes) / double(f.output_bytes)));
    mean += f.ratio;
  }
  CHECK(r.mean_ratio == doctest::Approx(mean / 5));
  CHECK(r.p_frames >= 3);
  const std::string csv = bench_csv(r);
  CHECK(csv.find("scans_per_sec") != std::string::npos);
  CHECK(csv.find("points_per_sec") != std::string::npos);
  CHECK(bench_json(r).find("\"encode_scans_per_sec\"") != std::string::npos);
}

TEST_CASE("static data compresses better than random data") {
  const auto s = quantized(generate(small(SyntheticKind::StaticScene, 4)));
  const auto r = quantized(generate(small(SyntheticKind::Random, 4)));
  CHECK(run_bench(s, 4, {}, {}, 1).total_ratio > run_bench(r, 4, {}, {}, 1).total_ratio);
}

TEST_CASE("precision sweep") {
  SyntheticConfig cfg = small(SyntheticKind::StaticScene, 4);
  cfg.sparsity = 0;
  const auto images = generate(cfg);
  const std::vector<std::uint32_t> one{1000};
  CHECK(sweep_precision(images, one, SampleWidth::Four, {}, {}).size() == 1);
  const std::vector<std::uint32_t> ps{1000, 2000, 4000, 8000, 16000};
  const auto rows = sweep_precision(images, ps, SampleWidth::Four, {}, {});
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].max_error_m <= ps[i] * 1e-6 / 2 + 1e-9);
    CHECK(rows[i].bits_per_sample == doctest::Approx(8.0 * rows[i].output_bytes / rows[i].samples));
    if (i) CHECK(rows[i].bits_per_sample <= rows[i - 1].bits_per_sample);
  }
  CHECK(rows[0].bits_per_sample - rows[1].bits_per_sample == doctest::Approx(1.0).epsilon(0.3));
}

TEST_CASE("ablation ladder edge cases") {
  const ScanShape shape{128, 1024, SampleWidth::Four, ScanType::Range};
  const std::vector<Scan> zeros(4, Scan(shape));
  const auto z = run_ablation(zeros, 4, {});
  REQUIRE(z.size() == 5);
  CHECK(z[3].ratio > 20 * z[0].ratio);
  CHECK(z[4].ratio > 20 * z[0].ratio);

  const std::vector<Scan> constant(4, Scan(shape, std::vector<std::uint32_t>(shape.size(), 4242)));
  const auto c = run_ablation(constant, 4, {});
  CHECK(c[4].ratio >= c[3].ratio);
  CHECK(to_string(AblationVariant::Full) == "mask>predict>delta>zigzag>pfor");
}

TEST_CASE("heuristic evaluation edge cases") {
  const ScanShape shape{16, 128, SampleWidth::Four, ScanType::Range};
  std::mt19937_64 rng(3);
  std::vector<std::uint32_t> base(shape.size());
  for (std::size_t i = 0; i < base.size(); ++i)
    base[i] = std::uint32_t(10000 + 4000 * std::sin(0.1 * double(i)) + rng() % 3000);
  const std::vector<Scan> still(6, Scan(shape, base));
  const auto s = evaluate_heuristic(still, {}, {});
  CHECK(s.evaluated == 5);
  CHECK(s.accuracy() == 1.0);

  const auto rnd = quantized(generate(small(SyntheticKind::Random, 8)));
  const auto r = evaluate_heuristic(rnd, {}, {});
  CHECK(r.accuracy() == 1.0);
  for (const auto& f : r.frames) CHECK(f.chosen == ScanMode::Intra);
  CHECK(r.suboptimal_i + r.suboptimal_p + r.correct == r.evaluated);
}
