#pragma once

#include <cstdint>
#include <stdexcept>

namespace nrr {

// One spike. Packed binary form is u16 x4 + i8 = 72 bits; bandwidth
// accounting uses that record size.
struct SpikeEvent {
  uint16_t chirp = 0;
  uint16_t sample = 0;
  uint16_t range_bin = 0;
  uint16_t angle_bin = 0;
  int8_t polarity = 1;

  friend bool operator==(const SpikeEvent&, const SpikeEvent&) = default;
};

inline constexpr int kSpikeEventBits = 72;

// ---- adaptive threshold codec ----------------------------------------------
// Tracks the two envelope extrema with ladder thresholds gamma, 2*gamma, ...
// Readout n_pos - n_neg approximates (mag_peak - gap_peak) / gamma.

struct AdaptiveParams {
  double gamma = 0.1;
  void validate() const {
    if (!(gamma > 0.0)) throw std::invalid_argument("adaptive codec: gamma must be > 0");
  }
};

struct AdaptiveState {
  double up_threshold = 0.0;
  double down_threshold = 0.0;
  uint32_t pos_count = 0;
  uint32_t neg_count = 0;

  void begin_chirp(const AdaptiveParams& p) {
    up_threshold = p.gamma;
    down_threshold = p.gamma;
    pos_count = 0;
    neg_count = 0;
  }
};

struct AdaptiveStepResult {
  int pos = 0;
  int neg = 0;
};

// A jump across several ladder rungs emits one spike per rung, all in the
// same sample.
inline AdaptiveStepResult adaptive_step(AdaptiveState& st, double mag_peak,
                                        double gap_peak, const AdaptiveParams& p) {
  AdaptiveStepResult r;
  while (mag_peak > st.up_threshold) {
    st.up_threshold += p.gamma;
    ++st.pos_count;
    ++r.pos;
  }
  while (gap_peak > st.down_threshold) {
    st.down_threshold += p.gamma;
    ++st.neg_count;
    ++r.neg;
  }
  return r;
}

inline double decode_adaptive(uint32_t pos_count, uint32_t neg_count) {
  return static_cast<double>(pos_count) - static_cast<double>(neg_count);
}

// ---- LIF codecs -------------------------------------------------------------
// Euler-integrated leaky integrate-and-fire driven by the envelope gradient.

struct LifParams {
  double threshold = 0.35;  // u_th
  double rest_input = 0.0;  // u_rest, added to the drive
  double tau = 100.0;       // membrane time constant, in samples
  bool leak = true;         // false gives the pure integrator reference

  void validate() const {
    if (!(threshold > 0.0)) throw std::invalid_argument("lif codec: threshold must be > 0");
    if (!(tau > 0.0)) throw std::invalid_argument("lif codec: tau must be > 0");
  }
};

struct LifState {
  double membrane = 0.0;
  uint32_t spike_count = 0;
  int32_t spike_sample = -1;  // time codec: first crossing this chirp
  bool fired = false;         // time codec: refractory until chirp end

  void begin_chirp() {
    membrane = 0.0;
    spike_count = 0;
    spike_sample = -1;
    fired = false;
  }
};

// Rate codec: spike on crossing, reset by subtraction, unbounded count.
inline bool rate_lif_step(LifState& st, double drive, const LifParams& p) {
  const double input = drive + p.rest_input;
  st.membrane += (p.leak ? (input - st.membrane) : input) / p.tau;
  if (st.membrane >= p.threshold) {
    st.membrane -= p.threshold;
    ++st.spike_count;
    return true;
  }
  return false;
}

// Time codec: at most one spike per chirp, then refractory to chirp end.
inline bool time_lif_step(LifState& st, double drive, int sample, const LifParams& p) {
  if (st.fired) return false;
  const double input = drive + p.rest_input;
  st.membrane += (p.leak ? (input - st.membrane) : input) / p.tau;
  if (st.membrane >= p.threshold) {
    st.fired = true;
    st.spike_sample = sample;
    ++st.spike_count;
    return true;
  }
  return false;
}

inline double decode_rate(uint32_t spike_count) { return static_cast<double>(spike_count); }

// Earlier spike = larger value; no spike decodes to 0.
inline double decode_time(int32_t spike_sample, int chirp_samples) {
  if (spike_sample < 0) return 0.0;
  return static_cast<double>(chirp_samples - spike_sample);
}

}  // namespace nrr
