#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nrr/types.hpp"

namespace nrr {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kPi = 3.141592653589793238462643383279502884;

// FMCW sensor parameters. Defaults are the desk profile used throughout the
// tests; paper() is the full published sensor configuration.
struct RadarParams {
  double f0_hz = 76.0e9;            // carrier
  double bandwidth_hz = 507.6e6;    // chirp sweep bandwidth
  int n_samples = 512;              // IF samples per chirp
  int n_chirps = 8;                 // chirps per frame
  int n_vx = 32;                    // virtual antennas (1 TX x 32 RX)
  double t_chirp_s = 20.52e-6;      // active chirp duration
  double t_wait_s = 5.96e-6;        // idle time between chirps
  double antenna_spacing_wl = 0.5;  // element spacing in wavelengths

  static RadarParams desk();
  static RadarParams paper();

  void validate() const;  // throws std::invalid_argument

  double sample_dt_s() const { return t_chirp_s / n_samples; }

  // IF beat frequency of a static target at range r (rad/s).
  double beat_omega(double range_m) const {
    return 2.0 * kPi * (2.0 * bandwidth_hz * range_m) / (kSpeedOfLight * t_chirp_s);
  }

  // Phase advance per sample for a target at range r (radians).
  double beat_phase_per_sample(double range_m) const {
    return beat_omega(range_m) * sample_dt_s();
  }

  // One range bin covers c / (2B) metres.
  double range_bin_width_m() const { return kSpeedOfLight / (2.0 * bandwidth_hz); }

  // Ranges at or beyond this alias (beat phase per sample >= pi).
  double max_unambiguous_range_m() const {
    return 0.5 * n_samples * range_bin_width_m();
  }

  // Phase shift between adjacent antennas for azimuth theta (radians).
  double antenna_phase(double azimuth_rad) const;
};

struct PointTarget {
  double range_m = 0.0;
  double azimuth_rad = 0.0;   // 0 = boresight, positive toward higher bins
  double rcs = 1.0;           // linear amplitude scale (a = rcs / (r/1m)^2)
  double velocity_mps = 0.0;  // carried in files; synthesis treats targets as static
};

struct Scene {
  std::vector<PointTarget> targets;
  double noise_stddev = 0.0;  // per-component white Gaussian noise
  uint64_t seed = 0;
  RadarParams params;
  std::string recipe;  // provenance tag, informational only

  void validate() const;  // throws std::invalid_argument / data_error
};

// Raw IF data cube, complex float64 in [chirp][sample][antenna] order.
class ChirpFrame {
public:
  ChirpFrame() = default;
  ChirpFrame(int n_chirps, int n_samples, int n_vx);

  int n_chirps() const { return n_chirps_; }
  int n_samples() const { return n_samples_; }
  int n_vx() const { return n_vx_; }

  cplx& at(int chirp, int sample, int antenna) {
    return data_[index(chirp, sample, antenna)];
  }
  cplx at(int chirp, int sample, int antenna) const {
    return data_[index(chirp, sample, antenna)];
  }

  const cplx* chirp_data(int chirp) const {
    return data_.data() + static_cast<size_t>(chirp) * n_samples_ * n_vx_;
  }
  cplx* chirp_data(int chirp) {
    return data_.data() + static_cast<size_t>(chirp) * n_samples_ * n_vx_;
  }

  std::vector<cplx>& data() { return data_; }
  const std::vector<cplx>& data() const { return data_; }

private:
  size_t index(int chirp, int sample, int antenna) const {
    return (static_cast<size_t>(chirp) * n_samples_ + sample) * n_vx_ + antenna;
  }

  int n_chirps_ = 0;
  int n_samples_ = 0;
  int n_vx_ = 0;
  std::vector<cplx> data_;
};

// Lightweight non-owning view of one chirp, [sample][antenna].
struct ChirpView {
  const cplx* data = nullptr;
  int n_samples = 0;
  int n_vx = 0;

  cplx at(int sample, int antenna) const {
    return data[static_cast<size_t>(sample) * n_vx + antenna];
  }
  const cplx* sample_row(int sample) const {
    return data + static_cast<size_t>(sample) * n_vx;
  }
};

inline ChirpView view_chirp(const ChirpFrame& frame, int chirp) {
  return ChirpView{frame.chirp_data(chirp), frame.n_samples(), frame.n_vx()};
}

}  // namespace nrr
