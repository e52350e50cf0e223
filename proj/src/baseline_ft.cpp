#include "nrr/baseline_ft.hpp"

#include <cmath>
#include <stdexcept>

namespace nrr {

double RangeAngleMap::total() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

namespace {

bool is_pow2(size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void fft_radix2(std::vector<cplx>& x) {
  const size_t n = x.size();
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * kPi / static_cast<double>(len);
    const cplx wl{std::cos(ang), std::sin(ang)};
    for (size_t i = 0; i < n; i += len) {
      cplx w{1.0, 0.0};
      for (size_t k = 0; k < len / 2; ++k) {
        const cplx u = x[i + k];
        const cplx v = x[i + k + len / 2] * w;
        x[i + k] = u + v;
        x[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

void dft_direct(std::vector<cplx>& x) {
  const size_t n = x.size();
  std::vector<cplx> out(n, cplx{0.0, 0.0});
  for (size_t k = 0; k < n; ++k) {
    for (size_t i = 0; i < n; ++i) {
      const double ang = -2.0 * kPi * static_cast<double>(k) * static_cast<double>(i) /
                         static_cast<double>(n);
      out[k] += x[i] * cplx{std::cos(ang), std::sin(ang)};
    }
  }
  x = std::move(out);
}

}  // namespace

void dft_forward(std::vector<cplx>& x) {
  if (x.empty()) return;
  if (is_pow2(x.size()))
    fft_radix2(x);
  else
    dft_direct(x);
}

RangeAngleMap ft_map(ChirpView chirp, const GridConfig& grid) {
  grid.validate();
  if (chirp.n_samples != grid.n_samples)
    throw std::invalid_argument("ft_map: chirp sample count mismatch");
  WeightMatrix w(grid.n_angle_bins, chirp.n_vx);

  // Time-dimension DFT per antenna, keeping the configured range bins.
  std::vector<cplx> range_spectrum(static_cast<size_t>(grid.n_range_bins) * chirp.n_vx);
  std::vector<cplx> column(chirp.n_samples);
  for (int m = 0; m < chirp.n_vx; ++m) {
    for (int n = 0; n < chirp.n_samples; ++n) column[n] = chirp.at(n, m);
    dft_forward(column);
    for (int j = 0; j < grid.n_range_bins; ++j)
      range_spectrum[static_cast<size_t>(j) * chirp.n_vx + m] = column[j];
  }

  RangeAngleMap map(grid.n_range_bins, grid.n_angle_bins);
  map.source = "ft";
  for (int j = 0; j < grid.n_range_bins; ++j) {
    const cplx* row = range_spectrum.data() + static_cast<size_t>(j) * chirp.n_vx;
    for (int l = 0; l < grid.n_angle_bins; ++l) {
      map.at(j, l) =
          magnitude(dendritic_project({row, static_cast<size_t>(chirp.n_vx)}, w.row(l)));
    }
  }
  return map;
}

RangeAngleMap ft_map(const ChirpFrame& frame, int chirp, const GridConfig& grid) {
  if (chirp < 0 || chirp >= frame.n_chirps())
    throw std::invalid_argument("ft_map: chirp index out of range");
  RangeAngleMap m = ft_map(view_chirp(frame, chirp), grid);
  m.chirp_first = m.chirp_last = chirp;
  return m;
}

RangeAngleMap ft_map_avg(const std::vector<ChirpView>& chirps, const GridConfig& grid) {
  if (chirps.empty()) throw std::invalid_argument("ft_map_avg: no chirps given");
  RangeAngleMap acc = ft_map(chirps[0], grid);
  for (size_t c = 1; c < chirps.size(); ++c) {
    const RangeAngleMap m = ft_map(chirps[c], grid);
    for (size_t i = 0; i < acc.values.size(); ++i) acc.values[i] += m.values[i];
  }
  const double inv = 1.0 / static_cast<double>(chirps.size());
  for (auto& v : acc.values) v *= inv;
  return acc;
}

RangeAngleMap ft_map_avg(const ChirpFrame& frame, const GridConfig& grid) {
  std::vector<ChirpView> views;
  views.reserve(frame.n_chirps());
  for (int c = 0; c < frame.n_chirps(); ++c) views.push_back(view_chirp(frame, c));
  RangeAngleMap m = ft_map_avg(views, grid);
  m.chirp_first = 0;
  m.chirp_last = frame.n_chirps() - 1;
  return m;
}

}  // namespace nrr
