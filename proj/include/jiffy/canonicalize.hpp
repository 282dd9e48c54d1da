#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "jiffy/scan.hpp"

namespace jiffy {

struct Point3 {
  double x = 0;
  double y = 0;
  double z = 0;
};

// Beam geometry of a spinning sensor. Row r fires at altitude_angles[r];
// column c of row r is centred on azimuth 2*pi*c/cols + azimuth_offsets[r].
struct BeamLayout {
  std::vector<double> altitude_angles;  // radians, strictly monotone
  std::vector<double> azimuth_offsets;  // radians
  std::size_t cols = 0;

  std::size_t rows() const noexcept { return altitude_angles.size(); }
  void validate() const;

  // Evenly spaced altitudes from top_rad down to bottom_rad, no offsets.
  static BeamLayout uniform(std::size_t rows, std::size_t cols, double top_rad, double bottom_rad);
};

struct BeamBin {
  std::size_t row;
  std::size_t col;
};

// Nearest (row, col) bin for a direction. Exact ties go to the lower index.
BeamBin nearest_bin(const BeamLayout& layout, double altitude, double azimuth);

// Converts Cartesian points to a range image. Points at the origin are
// skipped; when several points share a bin the closest return wins; bins
// that receive no point are NaN.
RangeImage canonicalize(std::span<const Point3> points, const BeamLayout& layout);

}  // namespace jiffy
