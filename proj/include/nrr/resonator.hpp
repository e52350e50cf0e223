#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "nrr/parallel.hpp"
#include "nrr/radar.hpp"

namespace nrr {

// Grid geometry plus the two envelope-path filter constants. One neuron per
// (range bin, angle bin); range bin j resonates at delta_omega = 2*pi*j/n_samples
// per sample, angle bin l listens through steering row l.
struct GridConfig {
  int n_range_bins = 256;
  int n_angle_bins = 32;  // must equal the frame's antenna count
  int n_samples = 512;
  double alpha_g = 0.001;  // envelope-gradient filter constant
  double alpha_x = 1.0;    // input-magnitude smoothing; 1.0 disables

  void validate() const;  // throws std::invalid_argument
  int n_neurons() const { return n_range_bins * n_angle_bins; }

  static GridConfig for_params(const RadarParams& p) {
    GridConfig g;
    g.n_samples = p.n_samples;
    g.n_angle_bins = p.n_vx;
    g.n_range_bins = p.n_samples / 2;
    return g;
  }
};

// Dendritic steering weights W[l][m] = exp(-i m phi_l) with
// phi_l = -pi + 2*pi*l / n_vx (ascending phase, angle bin 0 at -pi).
class WeightMatrix {
public:
  WeightMatrix(int n_angle_bins, int n_vx);

  int n_angle_bins() const { return n_angle_bins_; }
  int n_vx() const { return n_vx_; }

  std::span<const cplx> row(int l) const {
    return {rows_.data() + static_cast<size_t>(l) * n_vx_, static_cast<size_t>(n_vx_)};
  }
  double phase(int l) const { return -kPi + 2.0 * kPi * l / n_angle_bins_; }
  // Azimuth this bin points at (for half-wavelength spacing).
  double angle_rad(int l) const;

private:
  int n_angle_bins_ = 0;
  int n_vx_ = 0;
  std::vector<cplx> rows_;
};

// Per-range-bin rotation factors exp(i 2*pi*j / n_samples).
class RotationTable {
public:
  RotationTable(int n_range_bins, int n_samples);

  cplx rot(int j) const { return rot_[j]; }
  double delta_omega(int j) const { return 2.0 * kPi * j / n_samples_; }
  int n_samples() const { return n_samples_; }

private:
  int n_samples_ = 0;
  std::vector<cplx> rot_;
};

// Full per-neuron state: complex resonator plus the envelope/gradient chain.
struct NeuronState {
  cplx resonator{0.0, 0.0};
  double mag_filt = 0.0;  // alpha_x-smoothed |resonator| feeding the envelope
  double mag_peak = 0.0;  // running max of the smoothed magnitude (upper envelope)
  double gap_peak = 0.0;  // running max of mag_peak - smoothed magnitude (drop envelope)
  double slope = 0.0;     // filtered envelope gradient g

  double envelope() const { return mag_peak - gap_peak; }
};

// What one sample update changed, plus the raw magnitude it saw.
struct EnvelopeDeltas {
  double d_peak = 0.0;
  double d_gap = 0.0;
  double mag_raw = 0.0;
  double d_envelope() const { return d_peak - d_gap; }
};

// One dendritic projection: y = sum_m w[m] * x[m].
inline cplx dendritic_project(std::span<const cplx> x, std::span<const cplx> w_row) {
  if (x.size() != w_row.size())
    throw std::invalid_argument("dendritic_project: antenna count mismatch");
  cplx acc{0.0, 0.0};
  for (size_t m = 0; m < x.size(); ++m) acc += w_row[m] * x[m];
  return acc;
}

// Resonate-and-fire sample update: rotate, then add the new input.
inline void rf_step(NeuronState& st, cplx drive, cplx rotation) {
  st.resonator = rotation * st.resonator + drive;
}

// Envelope update on an externally supplied magnitude. alpha_x exponentially
// smooths the magnitude first (1.0 = no smoothing); the peak/gap ratchets
// track the smoothed value. Shared verbatim by the live path and the sweep's
// refilter path so both produce identical bits.
inline EnvelopeDeltas envelope_update_mag(NeuronState& st, double mag, double alpha_x) {
  EnvelopeDeltas d;
  d.mag_raw = mag;
  st.mag_filt = (1.0 - alpha_x) * st.mag_filt + alpha_x * mag;
  const double m = st.mag_filt;
  if (m > st.mag_peak) {
    d.d_peak = m - st.mag_peak;
    st.mag_peak = m;
  }
  const double gap = st.mag_peak - m;
  if (gap > st.gap_peak) {
    d.d_gap = gap - st.gap_peak;
    st.gap_peak = gap;
  }
  return d;
}

inline EnvelopeDeltas envelope_update(NeuronState& st, double alpha_x) {
  return envelope_update_mag(st, magnitude(st.resonator), alpha_x);
}

// Leaky integration of the envelope change.
inline void gradient_update(NeuronState& st, double d_envelope, double alpha_g) {
  st.slope = (1.0 - alpha_g) * st.slope + alpha_g * d_envelope;
}

// Closed-form resonator state under a sum of constant-amplitude tones,
// s(t) = sum_k i*A_k * exp(i w t) * (exp(-i (w - w_k) t) - 1) / (w - w_k),
// continuous-time reference for the discrete update.
struct ToneDrive {
  cplx amplitude;  // a_k * beta_kl after dendritic projection
  double omega;    // rad/s
};
cplx analytic_state(double t, std::span<const ToneDrive> drives, double omega_res);

enum class ChirpResetMode {
  reset,       // clear everything including the gradient (independent chirp)
  continuous,  // clear resonator + envelope, keep the gradient
};

// The range-angle grid of resonate-and-fire neurons. process_chirp computes
// all dendritic projections, then advances every neuron over the chirp.
// The visitor runs after each neuron's per-sample update:
//   vis(worker, neuron_idx, range_bin, angle_bin, sample, state, deltas)
// Neurons are partitioned contiguously over workers; a neuron is always
// advanced by exactly one worker, so results do not depend on the worker
// count. Per-sample state updates follow the fixed order
// rf_step -> envelope_update -> gradient_update -> visitor.
class ResonatorGrid {
public:
  explicit ResonatorGrid(GridConfig cfg);

  const GridConfig& config() const { return cfg_; }
  const WeightMatrix& weights() const { return weights_; }
  const RotationTable& rotations() const { return rotations_; }

  std::span<const NeuronState> neurons() const { return neurons_; }
  NeuronState& neuron(int j, int l) { return neurons_[neuron_index(j, l)]; }
  const NeuronState& neuron(int j, int l) const { return neurons_[neuron_index(j, l)]; }
  int neuron_index(int j, int l) const { return j * cfg_.n_angle_bins + l; }

  void reset_all();

  // Dendritic stage alone: drive_out[l * n_samples + n] = y_l(n).
  void project_chirp(ChirpView chirp, std::vector<cplx>& drive_out, int threads) const;

  template <class Visitor>
  void process_chirp(ChirpView chirp, ChirpResetMode mode, int threads, Visitor&& vis) {
    check_shape(chirp);
    project_chirp(chirp, drive_, threads);
    begin_chirp(mode);
    const int n_samples = cfg_.n_samples;
    const double alpha_x = cfg_.alpha_x;
    const double alpha_g = cfg_.alpha_g;
    parallel_for_chunks(cfg_.n_neurons(), threads, [&](int worker, int begin, int end) {
      for (int idx = begin; idx < end; ++idx) {
        const int j = idx / cfg_.n_angle_bins;
        const int l = idx % cfg_.n_angle_bins;
        const cplx rot = rotations_.rot(j);
        const cplx* drv = drive_.data() + static_cast<size_t>(l) * n_samples;
        NeuronState st = neurons_[idx];
        for (int n = 0; n < n_samples; ++n) {
          rf_step(st, drv[n], rot);
          const EnvelopeDeltas d = envelope_update(st, alpha_x);
          gradient_update(st, d.d_envelope(), alpha_g);
          vis(worker, idx, j, l, n, st, d);
        }
        neurons_[idx] = st;
      }
    });
  }

  // process_chirp without a visitor.
  void run_chirp(ChirpView chirp, ChirpResetMode mode, int threads) {
    process_chirp(chirp, mode, threads,
                  [](int, int, int, int, int, const NeuronState&, const EnvelopeDeltas&) {});
  }

private:
  void check_shape(ChirpView chirp) const;
  void begin_chirp(ChirpResetMode mode);

  GridConfig cfg_;
  WeightMatrix weights_;
  RotationTable rotations_;
  std::vector<NeuronState> neurons_;
  std::vector<cplx> drive_;  // [angle_bin][sample] scratch
};

}  // namespace nrr
