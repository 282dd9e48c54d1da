#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "jiffy/canonicalize.hpp"
#include "jiffy/error.hpp"
#include "jiffy/quantize.hpp"
#include "jiffy/scan.hpp"

using namespace jiffy;

TEST_CASE("scan rejects samples wider than its width") {
  CHECK_NOTHROW(Scan({1, 2, SampleWidth::One, ScanType::Reflectivity}, {0, 255}));
  CHECK_THROWS_AS((Scan({1, 2, SampleWidth::One, ScanType::Reflectivity}, {0, 256})), Error);
  CHECK_THROWS_AS((Scan({2, 2, SampleWidth::Four, ScanType::Range}, {1, 2, 3})), Error);
  CHECK_THROWS_AS((Scan({0, 2, SampleWidth::Four, ScanType::Range})), Error);
}

TEST_CASE("scan type names round-trip") {
  for (int t = 0; t < 8; ++t) {
    const auto type = *scan_type_from_u8(std::uint8_t(t));
    CHECK(parse_scan_type(to_string(type)) == type);
  }
  CHECK_FALSE(scan_type_from_u8(8));
  CHECK_FALSE(sample_width_from_u8(3));
}

TEST_CASE("quantize examples") {
  const QuantizationSpec mm{1000, SampleWidth::Four};
  CHECK(quantize_value(1.2344, mm, ScanType::Range) == 1234);
  CHECK(quantize_value(std::nan(""), mm, ScanType::Range) == 0);
  CHECK(quantize_value(std::numeric_limits<double>::infinity(), mm, ScanType::Range) == 0);
  CHECK(quantize_value(-1.0, mm, ScanType::Range) == 0);
  // Tie resolves to even.
  CHECK(quantize_value(3.0005, mm, ScanType::Range) == 3000);
  CHECK(std::abs(dequantize_value(3000, mm, ScanType::Range) - 3.0005) <= 0.0005 + 1e-12);
  CHECK(quantize_value(2.5e-4, mm, ScanType::Range) == 0);  // rounds into the sentinel
  CHECK(dequantize_value(1234, mm, ScanType::Range) == doctest::Approx(1.234).epsilon(1e-15));
  CHECK(std::isnan(dequantize_value(0, mm, ScanType::Range)));
}

TEST_CASE("quantize clamps to the sample width") {
  const QuantizationSpec two{1000, SampleWidth::Two};
  CHECK(quantize_value(65.535, two, ScanType::Range) == 65535);
  CHECK(quantize_value(500.0, two, ScanType::Range) == 65535);
  const QuantizationSpec one{1000, SampleWidth::One};
  CHECK(quantize_value(300.0, one, ScanType::Signal) == 255);
  CHECK(quantize_value(17.4, one, ScanType::Signal) == 17);
}

TEST_CASE("quantize rejects bad specs and shapes") {
  CHECK_THROWS_AS((QuantizationSpec{0, SampleWidth::Four}.validate()), Error);
  RangeImage im(2, 2, {1, 2, 3, 4});
  im.values.pop_back();
  CHECK_THROWS_AS((quantize(im, {})), Error);
}

TEST_CASE("quantize roundtrip error is at most half a step") {
  std::mt19937_64 rng(7);
  for (std::uint32_t p : {1u, 3u, 1000u, 2000u, 4000u, 8000u, 12345u}) {
    const QuantizationSpec q{p, SampleWidth::Four};
    const double half = q.step_meters() / 2;
    std::uniform_real_distribution<double> r(half * 1.01, 200.0);
    for (int i = 0; i < 20000; ++i) {
      const double x = r(rng);
      const double back = dequantize_value(quantize_value(x, q, ScanType::Range), q, ScanType::Range);
      REQUIRE(std::abs(back - x) <= half * (1 + 1e-9));
    }
  }
}

TEST_CASE("image quantize and dequantize") {
  const QuantizationSpec q{1000, SampleWidth::Four};
  RangeImage im(1, 4, {1.0, std::nan(""), 0.0, 2.0004});
  const Scan s = quantize(im, q);
  CHECK(std::vector<std::uint32_t>(s.samples().begin(), s.samples().end()) ==
        std::vector<std::uint32_t>{1000, 0, 0, 2000});
  const RangeImage back = dequantize(s, q);
  CHECK(back(0, 0) == doctest::Approx(1.0));
  CHECK(std::isnan(back(0, 1)));
  CHECK(std::isnan(back(0, 2)));
}

TEST_CASE("canonicalize axis-aligned point") {
  BeamLayout layout = BeamLayout::uniform(5, 16, 0.2, -0.2);
  // Row 2 has altitude 0.
  const std::vector<Point3> pts{{1, 0, 0}};
  const RangeImage im = canonicalize(pts, layout);
  for (std::size_t r = 0; r < 5; ++r)
    for (std::size_t c = 0; c < 16; ++c) {
      if (r == 2 && c == 0) {
        CHECK(im(r, c) == doctest::Approx(1.0));
      } else {
        CHECK(std::isnan(im(r, c)));
      }
    }
}

TEST_CASE("canonicalize of no points is all invalid") {
  const RangeImage im = canonicalize({}, BeamLayout::uniform(4, 8, 0.1, -0.1));
  for (double v : im.values) CHECK(std::isnan(v));
}

TEST_CASE("beam layout validation") {
  BeamLayout bad = BeamLayout::uniform(4, 8, 0.1, -0.1);
  bad.altitude_angles[2] = bad.altitude_angles[1];
  CHECK_THROWS_AS((bad.validate()), Error);
  BeamLayout short_offsets = BeamLayout::uniform(4, 8, 0.1, -0.1);
  short_offsets.azimuth_offsets.pop_back();
  CHECK_THROWS_AS((short_offsets.validate()), Error);
}

namespace {

double angle_gap(double a, double b) {
  double d = std::fmod(std::abs(a - b), 2 * std::numbers::pi);
  return std::min(d, 2 * std::numbers::pi - d);
}

}  // namespace

TEST_CASE("canonicalize matches a brute-force nearest-bin oracle") {
  std::mt19937_64 rng(11);
  BeamLayout layout = BeamLayout::uniform(16, 64, 0.3, -0.3);
  std::uniform_real_distribution<double> off(-0.02, 0.02);
  for (double& o : layout.azimuth_offsets) o = off(rng);
  const double step = 2 * std::numbers::pi / 64;

  std::uniform_real_distribution<double> alt(-0.3, 0.3), az(-std::numbers::pi, std::numbers::pi),
      rng_m(0.5, 80);
  std::vector<Point3> pts;
  std::vector<double> ranges;
  for (int i = 0; i < 3000; ++i) {
    const double a = alt(rng), z = az(rng), r = rng_m(rng);
    pts.push_back({r * std::cos(a) * std::cos(z), r * std::cos(a) * std::sin(z), r * std::sin(a)});
    ranges.push_back(r);
  }
  const RangeImage im = canonicalize(pts, layout);

  // Oracle: scan every row and every column for the smallest angular gap.
  std::vector<double> expect(16 * 64, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Point3& p = pts[i];
    const double range = std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z);
    const double a = std::asin(p.z / range), z = std::atan2(p.y, p.x);
    std::size_t best_r = 0;
    for (std::size_t r = 1; r < 16; ++r)
      if (std::abs(a - layout.altitude_angles[r]) < std::abs(a - layout.altitude_angles[best_r])) best_r = r;
    std::size_t best_c = 0;
    for (std::size_t c = 1; c < 64; ++c)
      if (angle_gap(z, c * step + layout.azimuth_offsets[best_r]) <
          angle_gap(z, best_c * step + layout.azimuth_offsets[best_r]))
        best_c = c;
    double& slot = expect[best_r * 64 + best_c];
    if (std::isnan(slot) || range < slot) slot = range;
  }
  std::size_t filled = 0;
  for (std::size_t k = 0; k < expect.size(); ++k) {
    if (std::isnan(expect[k])) {
      CHECK(std::isnan(im.values[k]));
    } else {
      ++filled;
      CHECK(im.values[k] == doctest::Approx(expect[k]).epsilon(1e-12));
    }
  }
  CHECK(filled > 500);

  // Every filled bin holds the range of some point whose angles are within
  // half a bin of that bin's angles.
  for (std::size_t r = 0; r < 16; ++r)
    for (std::size_t c = 0; c < 64; ++c) {
      const double v = im(r, c);
      if (std::isnan(v)) continue;
      bool found = false;
      for (std::size_t i = 0; i < pts.size() && !found; ++i) {
        if (ranges[i] != doctest::Approx(v).epsilon(1e-12)) continue;
        const Point3& p = pts[i];
        const double a = std::asin(p.z / ranges[i]), z = std::atan2(p.y, p.x);
        found = angle_gap(z, c * step + layout.azimuth_offsets[r]) <= step / 2 + 1e-12 &&
                std::abs(a - layout.altitude_angles[r]) <= 0.3 / 15 + 1e-12;
      }
      CHECK(found);
    }
}

TEST_CASE("canonicalize keeps the nearer of two colliding points") {
  BeamLayout layout = BeamLayout::uniform(1, 8, 0.0, 0.0);
  const std::vector<Point3> pts{{5, 0, 0}, {2, 0.001, 0}, {9, 0, 0}};
  const RangeImage im = canonicalize(pts, layout);
  CHECK(im(0, 0) == doctest::Approx(std::hypot(2.0, 0.001)));
}
