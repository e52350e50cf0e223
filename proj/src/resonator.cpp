#include "nrr/resonator.hpp"

#include <cmath>

namespace nrr {

void GridConfig::validate() const {
  if (n_range_bins < 1) throw std::invalid_argument("grid: n_range_bins must be >= 1");
  if (n_angle_bins < 1) throw std::invalid_argument("grid: n_angle_bins must be >= 1");
  if (n_samples < 2) throw std::invalid_argument("grid: n_samples must be >= 2");
  if (n_range_bins > n_samples)
    throw std::invalid_argument("grid: n_range_bins must not exceed n_samples");
  if (!(alpha_g > 0.0 && alpha_g <= 1.0))
    throw std::invalid_argument("grid: alpha_g must be in (0, 1]");
  if (!(alpha_x > 0.0 && alpha_x <= 1.0))
    throw std::invalid_argument("grid: alpha_x must be in (0, 1]");
}

WeightMatrix::WeightMatrix(int n_angle_bins, int n_vx)
    : n_angle_bins_(n_angle_bins), n_vx_(n_vx) {
  if (n_angle_bins < 1 || n_vx < 1)
    throw std::invalid_argument("weight matrix: dimensions must be >= 1");
  rows_.resize(static_cast<size_t>(n_angle_bins) * n_vx);
  for (int l = 0; l < n_angle_bins; ++l) {
    const double phi = phase(l);
    for (int m = 0; m < n_vx; ++m) {
      const double ang = -phi * m;
      rows_[static_cast<size_t>(l) * n_vx + m] = cplx{std::cos(ang), std::sin(ang)};
    }
  }
}

double WeightMatrix::angle_rad(int l) const {
  double s = phase(l) / kPi;
  if (s < -1.0) s = -1.0;
  if (s > 1.0) s = 1.0;
  return std::asin(s);
}

RotationTable::RotationTable(int n_range_bins, int n_samples) : n_samples_(n_samples) {
  if (n_range_bins < 1 || n_samples < 1)
    throw std::invalid_argument("rotation table: dimensions must be >= 1");
  rot_.resize(n_range_bins);
  for (int j = 0; j < n_range_bins; ++j) {
    const double w = delta_omega(j);
    rot_[j] = cplx{std::cos(w), std::sin(w)};
  }
}

cplx analytic_state(double t, std::span<const ToneDrive> drives, double omega_res) {
  cplx total{0.0, 0.0};
  const cplx res_phase{std::cos(omega_res * t), std::sin(omega_res * t)};
  for (const auto& d : drives) {
    const double detune = omega_res - d.omega;
    if (std::abs(detune * t) < 1e-12) {
      total += d.amplitude * t * res_phase;
    } else {
      const cplx delta{std::cos(detune * t), -std::sin(detune * t)};
      total += cplx{0.0, 1.0} * d.amplitude * res_phase * (delta - cplx{1.0, 0.0}) / detune;
    }
  }
  return total;
}

namespace {
GridConfig validated(GridConfig cfg) {
  cfg.validate();
  return cfg;
}
}  // namespace

ResonatorGrid::ResonatorGrid(GridConfig cfg)
    : cfg_(validated(cfg)),
      weights_(cfg.n_angle_bins, cfg.n_angle_bins),
      rotations_(cfg.n_range_bins, cfg.n_samples),
      neurons_(static_cast<size_t>(cfg.n_neurons())),
      drive_(static_cast<size_t>(cfg.n_angle_bins) * cfg.n_samples) {}

void ResonatorGrid::reset_all() {
  for (auto& n : neurons_) n = NeuronState{};
}

void ResonatorGrid::check_shape(ChirpView chirp) const {
  if (chirp.n_samples != cfg_.n_samples)
    throw std::invalid_argument("resonator grid: chirp sample count mismatch");
  if (chirp.n_vx != weights_.n_vx())
    throw std::invalid_argument("resonator grid: chirp antenna count mismatch");
}

void ResonatorGrid::begin_chirp(ChirpResetMode mode) {
  for (auto& n : neurons_) {
    n.resonator = cplx{0.0, 0.0};
    n.mag_filt = 0.0;
    n.mag_peak = 0.0;
    n.gap_peak = 0.0;
    if (mode == ChirpResetMode::reset) n.slope = 0.0;
  }
}

void ResonatorGrid::project_chirp(ChirpView chirp, std::vector<cplx>& drive_out,
                                  int threads) const {
  check_shape(chirp);
  drive_out.resize(static_cast<size_t>(cfg_.n_angle_bins) * cfg_.n_samples);
  parallel_for_chunks(cfg_.n_angle_bins, threads, [&](int, int begin, int end) {
    for (int l = begin; l < end; ++l) {
      const auto row = weights_.row(l);
      cplx* out = drive_out.data() + static_cast<size_t>(l) * cfg_.n_samples;
      for (int n = 0; n < cfg_.n_samples; ++n)
        out[n] = dendritic_project({chirp.sample_row(n), static_cast<size_t>(chirp.n_vx)}, row);
    }
  });
}

}  // namespace nrr
