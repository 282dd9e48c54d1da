#include "jiffy/bench/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "jiffy/error.hpp"

namespace jiffy::bench {

std::optional<SyntheticKind> parse_synthetic_kind(std::string_view name) noexcept {
  if (name == "static_scene") return SyntheticKind::StaticScene;
  if (name == "driving_like") return SyntheticKind::DrivingLike;
  if (name == "random") return SyntheticKind::Random;
  if (name == "sparse_vertical") return SyntheticKind::SparseVertical;
  return std::nullopt;
}

std::string_view to_string(SyntheticKind kind) noexcept {
  switch (kind) {
    case SyntheticKind::StaticScene: return "static_scene";
    case SyntheticKind::DrivingLike: return "driving_like";
    case SyntheticKind::Random: return "random";
    case SyntheticKind::SparseVertical: return "sparse_vertical";
  }
  return "invalid";
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kFrameDt = 0.1;  // 10 Hz spin rate

struct Vec3 {
  double x, y, z;
};

inline Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }

inline std::uint64_t splitmix(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Uniform [0, 1) from a world-space cell and a salt.
inline double cell_hash(Vec3 p, double cell, std::uint64_t salt) noexcept {
  const auto ix = static_cast<std::int64_t>(std::floor(p.x / cell));
  const auto iy = static_cast<std::int64_t>(std::floor(p.y / cell));
  const auto iz = static_cast<std::int64_t>(std::floor(p.z / cell));
  std::uint64_t h = splitmix(salt ^ static_cast<std::uint64_t>(ix));
  h = splitmix(h ^ static_cast<std::uint64_t>(iy));
  h = splitmix(h ^ static_cast<std::uint64_t>(iz));
  return double(h >> 11) * 0x1.0p-53;
}

// Box-Muller over the standard engine so output does not depend on the
// standard library's distribution implementations.
class Noise {
 public:
  explicit Noise(std::uint64_t seed) : eng_(seed) {}
  double uniform() { return double(eng_() >> 11) * 0x1.0p-53; }
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0;
  bool has_spare_ = false;
};

struct Box {
  Vec3 lo, hi;
};

// Slab test; returns entry distance or +inf.
inline double hit_box(const Box& b, Vec3 o, Vec3 d) noexcept {
  double t0 = 0.0;
  double t1 = std::numeric_limits<double>::infinity();
  const double os[3] = {o.x, o.y, o.z};
  const double ds[3] = {d.x, d.y, d.z};
  const double lo[3] = {b.lo.x, b.lo.y, b.lo.z};
  const double hi[3] = {b.hi.x, b.hi.y, b.hi.z};
  for (int a = 0; a < 3; ++a) {
    if (std::abs(ds[a]) < 1e-12) {
      if (os[a] < lo[a] || os[a] > hi[a]) return std::numeric_limits<double>::infinity();
      continue;
    }
    double ta = (lo[a] - os[a]) / ds[a];
    double tb = (hi[a] - os[a]) / ds[a];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return std::numeric_limits<double>::infinity();
  }
  return t0 > 0.0 ? t0 : std::numeric_limits<double>::infinity();
}

struct World {
  bool street = true;  // two facades along x
  double wall_left = 8.0;
  double wall_right = -9.0;
  double wall_height = 14.0;
  std::vector<Box> boxes;
};

// Distance to a facade at y = wall, with recessed windows.
inline double hit_wall(double wall, double height, Vec3 o, Vec3 d) noexcept {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if ((wall > o.y && d.y <= 0) || (wall < o.y && d.y >= 0)) return inf;
  double t = (wall - o.y) / d.y;
  Vec3 p = o + t * d;
  if (p.z < 0.0 || p.z > height) return inf;
  const double wx = p.x - 4.0 * std::floor(p.x / 4.0);
  const double wz = p.z - 3.5 * std::floor(p.z / 3.5);
  if (wx > 1.0 && wx < 2.6 && wz > 1.0 && wz < 2.3) {
    const double recess = wall > 0 ? 0.25 : -0.25;
    t = (wall + recess - o.y) / d.y;
  }
  return t;
}

double cast(const World& w, Vec3 o, Vec3 d) noexcept {
  double t = std::numeric_limits<double>::infinity();
  if (d.z < 0) t = -o.z / d.z;
  if (w.street) {
    t = std::min(t, hit_wall(w.wall_left, w.wall_height, o, d));
    t = std::min(t, hit_wall(w.wall_right, w.wall_height, o, d));
  }
  for (const Box& b : w.boxes) t = std::min(t, hit_box(b, o, d));
  return t;
}

Box make_box(double cx, double cy, double sx, double sy, double sz) {
  return {{cx - sx / 2, cy - sy / 2, 0.0}, {cx + sx / 2, cy + sy / 2, sz}};
}

std::vector<Box> parked_cars(std::uint64_t seed) {
  std::vector<Box> boxes;
  Noise rng(splitmix(seed ^ 0xCA25));
  for (double x = -200; x < 1500; x += 9.0 + 6.0 * rng.uniform()) {
    if (rng.uniform() < 0.55) boxes.push_back(make_box(x, 5.8, 4.5, 1.8, 1.5));
    if (rng.uniform() < 0.45) boxes.push_back(make_box(x + 3, -6.8, 4.5, 1.8, 1.5));
    if (rng.uniform() < 0.3) boxes.push_back(make_box(x + 1, 7.3, 0.4, 0.4, 3.0));  // pole
  }
  return boxes;
}

}  // namespace

struct SyntheticGenerator::Impl {
  std::vector<Vec3> dirs;  // per pixel, sensor frame after mount rotation
  World world;
  std::vector<Box> parked;
  double height = 2.0;
  double drop_prob = 0.0;
  double flicker = 0.002;
  std::vector<double> static_base;  // cached geometry for the fixed sensor
  std::vector<double> speed;        // per-frame speed profile, m/s
};

SyntheticGenerator::SyntheticGenerator(SyntheticConfig cfg) : cfg_(cfg), impl_(std::make_unique<Impl>()) {
  if (cfg_.rows == 0 || cfg_.cols == 0)
    throw Error(Errc::invalid_argument, "synthetic shape must be nonzero");
  if (!(cfg_.sparsity >= 0.0 && cfg_.sparsity <= 1.0))
    throw Error(Errc::invalid_argument, "sparsity must be in [0, 1]");
  Impl& s = *impl_;
  s.flicker = std::min(s.flicker, cfg_.sparsity);
  const bool vertical = cfg_.kind == SyntheticKind::SparseVertical;
  const double half_fov = (vertical ? 45.0 : 22.5) * std::numbers::pi / 180.0;

  s.dirs.resize(cfg_.rows * cfg_.cols);
  for (std::size_t r = 0; r < cfg_.rows; ++r) {
    const double alt =
        cfg_.rows == 1 ? 0.0 : half_fov - 2.0 * half_fov * double(r) / double(cfg_.rows - 1);
    for (std::size_t c = 0; c < cfg_.cols; ++c) {
      const double az = 2.0 * std::numbers::pi * double(c) / double(cfg_.cols);
      Vec3 d{std::cos(alt) * std::cos(az), std::cos(alt) * std::sin(az), std::sin(alt)};
      // Vertical mount: the scan plane becomes x-z.
      if (vertical) d = {d.x, -d.z, d.y};
      s.dirs[r * cfg_.cols + c] = d;
    }
  }

  if (vertical) {
    s.height = 15.0;
    s.world.street = false;
    Noise rng(splitmix(cfg_.seed ^ 0x7EE));
    for (double x = -100; x < 800; x += 6.0 + 10.0 * rng.uniform())
      s.world.boxes.push_back(make_box(x, 8.0 * (rng.uniform() - 0.5), 3.0, 3.0, 4.0 + 8.0 * rng.uniform()));
  } else {
    s.parked = parked_cars(cfg_.seed);
  }

  // Stop-and-go drive: 12 s cycles of 4 s stopped, ramps, 6.4 s cruising.
  s.speed.resize(cfg_.frames);
  for (std::size_t i = 0; i < cfg_.frames; ++i) {
    const std::size_t phase = i % 120;
    double v = 0.0;
    if (cfg_.kind == SyntheticKind::DrivingLike) {
      if (phase < 40) v = 0.0;
      else if (phase < 48) v = 12.0 * double(phase - 39) / 9.0;
      else if (phase < 112) v = 12.0;
      else v = 12.0 * double(120 - phase) / 9.0;
    } else if (vertical) {
      v = 3.0;
    }
    s.speed[i] = v;
  }

  if (cfg_.kind != SyntheticKind::Random) {
    // Geometric sparsity of the first frame sets the extra dropout rate.
    World w = s.world;
    w.boxes.insert(w.boxes.end(), s.parked.begin(), s.parked.end());
    const Vec3 o{0.0, 0.0, s.height};
    std::size_t invalid = 0;
    for (const Vec3& d : s.dirs)
      if (!(cast(w, o, d) <= cfg_.max_range_m)) ++invalid;
    const double g = double(invalid) / double(s.dirs.size());
    if (g < cfg_.sparsity)
      s.drop_prob = std::clamp((cfg_.sparsity - g) / (1.0 - g) - s.flicker, 0.0, 1.0);
  }
}

SyntheticGenerator::~SyntheticGenerator() = default;
SyntheticGenerator::SyntheticGenerator(SyntheticGenerator&&) noexcept = default;
SyntheticGenerator& SyntheticGenerator::operator=(SyntheticGenerator&&) noexcept = default;

RangeImage SyntheticGenerator::frame(std::size_t index) {
  Impl& s = *impl_;
  const std::size_t n = cfg_.rows * cfg_.cols;
  RangeImage out(cfg_.rows, cfg_.cols);
  Noise rng(splitmix(cfg_.seed * 0x100000001B3ull + index));

  if (cfg_.kind == SyntheticKind::Random) {
    for (std::size_t i = 0; i < n; ++i) {
      const double drop = rng.uniform();
      const double r = 1.0 + 99.0 * rng.uniform();
      out.values[i] = drop < cfg_.sparsity ? kNaN : r;
    }
    return out;
  }

  const bool fixed = cfg_.kind == SyntheticKind::StaticScene;
  std::vector<double> base;
  if (fixed && !s.static_base.empty()) {
    base = s.static_base;
  } else {
    double px = 0.0;
    for (std::size_t k = 0; k < index && k < s.speed.size(); ++k) px += s.speed[k] * kFrameDt;
    World w = s.world;
    const double t_now = double(index) * kFrameDt;
    for (const Box& b : s.parked)
      if (b.hi.x > px - cfg_.max_range_m && b.lo.x < px + cfg_.max_range_m) w.boxes.push_back(b);
    if (cfg_.kind == SyntheticKind::DrivingLike) {
      // Traffic in both lanes and pedestrians; positions wrap around the sensor.
      const struct { double y, speed, offset, sx, sy, sz; } movers[] = {
          {2.5, 9.0, 25.0, 4.5, 1.8, 1.5},   {-3.0, -11.0, 70.0, 4.8, 1.9, 1.6},
          {-3.0, -11.0, 10.0, 4.5, 1.8, 1.5}, {6.6, 1.4, 8.0, 0.6, 0.6, 1.8},
          {-7.8, -1.2, 15.0, 0.6, 0.6, 1.7},
      };
      for (const auto& m : movers) {
        const double span = 120.0;
        double x = m.offset + m.speed * t_now - px;
        x = x - span * std::floor((x + span / 2) / span);
        w.boxes.push_back(make_box(px + x, m.y, m.sx, m.sy, m.sz));
      }
    }
    const Vec3 o{px, 0.0, s.height};
    base.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Vec3 d = s.dirs[i];
      const double t = cast(w, o, d);
      if (!(t <= cfg_.max_range_m)) {
        base[i] = kNaN;
        continue;
      }
      const Vec3 hit = o + t * d;
      if (cell_hash(hit, 0.6, cfg_.seed ^ 0xD0) < s.drop_prob) {
        base[i] = kNaN;
        continue;
      }
      base[i] = t + cfg_.texture_m * (2.0 * cell_hash(hit, 0.04, cfg_.seed ^ 0x7E) - 1.0);
    }
    if (fixed) s.static_base = base;
  }

  for (std::size_t i = 0; i < n; ++i) {
    const double noise = rng.gaussian();
    const double flick = rng.uniform();
    const double v = base[i];
    if (std::isnan(v) || flick < s.flicker) continue;
    const double r = v + cfg_.noise_m * noise;
    out.values[i] = r > 0.05 ? r : kNaN;
  }
  return out;
}

std::vector<RangeImage> generate(const SyntheticConfig& cfg) {
  SyntheticGenerator gen(cfg);
  std::vector<RangeImage> frames;
  frames.reserve(cfg.frames);
  for (std::size_t i = 0; i < cfg.frames; ++i) frames.push_back(gen.frame(i));
  return frames;
}

double temporal_correlation(const std::vector<RangeImage>& frames) {
  if (frames.size() < 2) return 1.0;
  double total = 0.0;
  for (std::size_t k = 1; k < frames.size(); ++k) {
    const auto& a = frames[k - 1].values;
    const auto& b = frames[k].values;
    double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (std::isnan(a[i]) || std::isnan(b[i])) continue;
      sa += a[i];
      sb += b[i];
      saa += a[i] * a[i];
      sbb += b[i] * b[i];
      sab += a[i] * b[i];
      ++n;
    }
    if (n < 2) continue;
    const double cov = sab - sa * sb / n;
    const double va = saa - sa * sa / n;
    const double vb = sbb - sb * sb / n;
    if (va > 0 && vb > 0) total += cov / std::sqrt(va * vb);
  }
  return total / double(frames.size() - 1);
}

}  // namespace jiffy::bench
