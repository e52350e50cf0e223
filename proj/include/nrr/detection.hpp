#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "nrr/baseline_ft.hpp"

namespace nrr {

// Cell-averaging CFAR over a 3 (range) x 5 (angle) neighborhood, no guard
// cells. A cell is a hit when value > alpha * (neighborhood mean + offset);
// the cell under test is excluded from the mean and windows truncate at the
// map edge.
struct CfarConfig {
  double alpha = 3.0;
  double offset = 0.0;
  int window_range = 3;
  int window_angle = 5;

  void validate() const;  // throws std::invalid_argument
};

struct DetectionMap {
  int n_range = 0;
  int n_angle = 0;
  std::vector<uint8_t> hits;

  DetectionMap() = default;
  DetectionMap(int nr, int na)
      : n_range(nr), n_angle(na), hits(static_cast<size_t>(nr) * na, 0) {}

  bool at(int j, int l) const { return hits[static_cast<size_t>(j) * n_angle + l] != 0; }
  void set(int j, int l, bool v) { hits[static_cast<size_t>(j) * n_angle + l] = v ? 1 : 0; }

  int count() const;
  // Hit coordinates in row-major order.
  std::vector<std::pair<int, int>> hit_coords() const;
};

// Throws std::invalid_argument when the map is smaller than the window.
DetectionMap ca_cfar(const RangeAngleMap& map, const CfarConfig& cfg);

}  // namespace nrr
