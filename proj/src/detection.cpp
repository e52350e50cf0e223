#include "nrr/detection.hpp"

#include <stdexcept>

namespace nrr {

void CfarConfig::validate() const {
  if (!(alpha > 0.0)) throw std::invalid_argument("cfar: alpha must be > 0");
  if (!(offset >= 0.0)) throw std::invalid_argument("cfar: offset must be >= 0");
  if (window_range < 1 || window_range % 2 == 0)
    throw std::invalid_argument("cfar: window_range must be odd and >= 1");
  if (window_angle < 1 || window_angle % 2 == 0)
    throw std::invalid_argument("cfar: window_angle must be odd and >= 1");
}

int DetectionMap::count() const {
  int c = 0;
  for (uint8_t h : hits) c += h != 0;
  return c;
}

std::vector<std::pair<int, int>> DetectionMap::hit_coords() const {
  std::vector<std::pair<int, int>> out;
  for (int j = 0; j < n_range; ++j)
    for (int l = 0; l < n_angle; ++l)
      if (at(j, l)) out.emplace_back(j, l);
  return out;
}

DetectionMap ca_cfar(const RangeAngleMap& map, const CfarConfig& cfg) {
  cfg.validate();
  if (map.n_range < cfg.window_range || map.n_angle < cfg.window_angle)
    throw std::invalid_argument("cfar: map smaller than the averaging window");

  const int nr = map.n_range;
  const int na = map.n_angle;
  const int hr = cfg.window_range / 2;
  const int ha = cfg.window_angle / 2;

  // Direct window sums in row-major order. The window is 15 cells, so this
  // stays cheap, and the summation order is pinned (no prefix-sum rounding
  // differences against a straightforward reference).
  DetectionMap det(nr, na);
  for (int j = 0; j < nr; ++j) {
    const int j0 = j - hr < 0 ? 0 : j - hr;
    const int j1 = j + hr >= nr ? nr - 1 : j + hr;
    for (int l = 0; l < na; ++l) {
      const int l0 = l - ha < 0 ? 0 : l - ha;
      const int l1 = l + ha >= na ? na - 1 : l + ha;
      const double cut = map.at(j, l);
      double sum = 0.0;
      for (int jj = j0; jj <= j1; ++jj)
        for (int ll = l0; ll <= l1; ++ll)
          if (jj != j || ll != l) sum += map.at(jj, ll);
      const int cells = (j1 - j0 + 1) * (l1 - l0 + 1) - 1;
      const double mean = sum / cells;
      det.set(j, l, cut > cfg.alpha * (mean + cfg.offset));
    }
  }
  return det;
}

}  // namespace nrr
