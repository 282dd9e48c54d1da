#include "jiffy/canonicalize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "jiffy/error.hpp"

namespace jiffy {

void BeamLayout::validate() const {
  if (altitude_angles.empty() || cols == 0)
    throw Error(Errc::invalid_argument, "beam layout needs at least one row and column");
  if (azimuth_offsets.size() != altitude_angles.size())
    throw Error(Errc::invalid_argument, "one azimuth offset per row is required");
  if (altitude_angles.size() > 1) {
    const bool descending = altitude_angles[1] < altitude_angles[0];
    for (std::size_t i = 1; i < altitude_angles.size(); ++i) {
      const bool ok = descending ? altitude_angles[i] < altitude_angles[i - 1]
                                 : altitude_angles[i] > altitude_angles[i - 1];
      if (!ok) throw Error(Errc::invalid_argument, "altitude angles must be strictly monotone");
    }
  }
}

BeamLayout BeamLayout::uniform(std::size_t rows, std::size_t cols, double top_rad,
                               double bottom_rad) {
  BeamLayout layout;
  layout.cols = cols;
  layout.altitude_angles.resize(rows);
  layout.azimuth_offsets.assign(rows, 0.0);
  for (std::size_t r = 0; r < rows; ++r)
    layout.altitude_angles[r] =
        rows == 1 ? top_rad : top_rad + (bottom_rad - top_rad) * double(r) / double(rows - 1);
  return layout;
}

namespace {

std::size_t nearest_row(const std::vector<double>& alt, double altitude) {
  const std::size_t n = alt.size();
  if (n == 1) return 0;
  const bool descending = alt[1] < alt[0];
  // First index whose angle is at or past the query in scan order.
  std::size_t hi;
  if (descending)
    hi = std::lower_bound(alt.begin(), alt.end(), altitude, std::greater<>()) - alt.begin();
  else
    hi = std::lower_bound(alt.begin(), alt.end(), altitude) - alt.begin();
  if (hi == 0) return 0;
  if (hi == n) return n - 1;
  const double d_lo = std::abs(altitude - alt[hi - 1]);
  const double d_hi = std::abs(alt[hi] - altitude);
  return d_hi < d_lo ? hi : hi - 1;
}

}  // namespace

BeamBin nearest_bin(const BeamLayout& layout, double altitude, double azimuth) {
  const std::size_t row = nearest_row(layout.altitude_angles, altitude);
  const double step = 2.0 * std::numbers::pi / double(layout.cols);
  const double t = (azimuth - layout.azimuth_offsets[row]) / step;
  // Round half down so exact ties land on the lower column.
  const auto c = static_cast<long long>(std::ceil(t - 0.5));
  const auto n = static_cast<long long>(layout.cols);
  const long long wrapped = ((c % n) + n) % n;
  return {row, static_cast<std::size_t>(wrapped)};
}

RangeImage canonicalize(std::span<const Point3> points, const BeamLayout& layout) {
  layout.validate();
  RangeImage image(layout.rows(), layout.cols);
  for (const Point3& p : points) {
    const double range = std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z);
    if (!(range > 0.0) || !std::isfinite(range)) continue;
    const double altitude = std::asin(std::clamp(p.z / range, -1.0, 1.0));
    const double azimuth = std::atan2(p.y, p.x);
    const BeamBin bin = nearest_bin(layout, altitude, azimuth);
    double& slot = image(bin.row, bin.col);
    if (std::isnan(slot) || range < slot) slot = range;
  }
  return image;
}

}  // namespace jiffy
