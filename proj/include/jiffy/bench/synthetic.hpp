#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "jiffy/scan.hpp"

namespace jiffy::bench {

enum class SyntheticKind { StaticScene, DrivingLike, Random, SparseVertical };

std::optional<SyntheticKind> parse_synthetic_kind(std::string_view name) noexcept;
std::string_view to_string(SyntheticKind kind) noexcept;

struct SyntheticConfig {
  SyntheticKind kind = SyntheticKind::StaticScene;
  std::size_t frames = 100;
  std::size_t rows = 128;
  std::size_t cols = 1024;
  // Target fraction of zero samples. Geometry (sky, max range) already
  // produces some; dropout patches make up the rest.
  double sparsity = 0.3;
  std::uint64_t seed = 1;
  double noise_m = 0.012;    // per-frame range noise, std dev
  double texture_m = 0.05;   // static surface roughness, half-amplitude
  double max_range_m = 120.0;
};

// Street scene ray-cast through a spinning-LiDAR beam pattern.
//   static_scene     fixed sensor; only per-frame noise and a little mask
//                    flicker change between frames
//   driving_like     stop-and-go drive down the street with cross traffic
//   random           independent uniform ranges and i.i.d. dropouts
//   sparse_vertical  16-beam sensor on a drone, mounted vertically
// Output is deterministic for a given config. Invalid samples are NaN.
class SyntheticGenerator {
 public:
  explicit SyntheticGenerator(SyntheticConfig cfg);
  ~SyntheticGenerator();
  SyntheticGenerator(SyntheticGenerator&&) noexcept;
  SyntheticGenerator& operator=(SyntheticGenerator&&) noexcept;

  const SyntheticConfig& config() const noexcept { return cfg_; }
  RangeImage frame(std::size_t index);

 private:
  struct Impl;
  SyntheticConfig cfg_;
  std::unique_ptr<Impl> impl_;
};

std::vector<RangeImage> generate(const SyntheticConfig& cfg);

// Pearson correlation of valid samples shared by consecutive frames,
// averaged over the sequence.
double temporal_correlation(const std::vector<RangeImage>& frames);

}  // namespace jiffy::bench
