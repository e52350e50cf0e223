#pragma once

#include <string>
#include <vector>

#include "nrr/resonator.hpp"

namespace nrr {

// Non-negative range-angle intensity map, row-major [range_bin][angle_bin].
struct RangeAngleMap {
  int n_range = 0;
  int n_angle = 0;
  std::vector<double> values;
  std::string source;   // model tag
  int chirp_first = 0;  // chirp span the map was computed from
  int chirp_last = 0;

  RangeAngleMap() = default;
  RangeAngleMap(int nr, int na)
      : n_range(nr), n_angle(na), values(static_cast<size_t>(nr) * na, 0.0) {}

  double& at(int j, int l) { return values[static_cast<size_t>(j) * n_angle + l]; }
  double at(int j, int l) const { return values[static_cast<size_t>(j) * n_angle + l]; }
  double total() const;
};

// Classical two-dimensional Fourier map: DFT over samples per antenna, then
// the same steering rows the resonator grid uses over antennas, magnitude
// out. Bin conventions match the grid exactly, so map cell (j, l) and neuron
// (j, l) describe the same physical hypothesis.
RangeAngleMap ft_map(ChirpView chirp, const GridConfig& grid);
RangeAngleMap ft_map(const ChirpFrame& frame, int chirp, const GridConfig& grid);

// Incoherent (magnitude) average over several chirps. Empty list throws.
RangeAngleMap ft_map_avg(const std::vector<ChirpView>& chirps, const GridConfig& grid);
RangeAngleMap ft_map_avg(const ChirpFrame& frame, const GridConfig& grid);

// In-place forward DFT, X[k] = sum_n x[n] exp(-i 2 pi k n / N). Radix-2 when
// N is a power of two, direct evaluation otherwise.
void dft_forward(std::vector<cplx>& x);

}  // namespace nrr
