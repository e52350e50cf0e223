#pragma once

#include <string>
#include <vector>

#include "nrr/baseline_ft.hpp"
#include "nrr/detection.hpp"
#include "nrr/resonator.hpp"
#include "nrr/spike_codecs.hpp"

namespace nrr {

enum class Model { ft, gradient, adaptive, rate, time_codec };
enum class ChirpMode { single, continuous, average };

const std::vector<std::string>& model_names();
std::string model_name(Model m);
Model parse_model(const std::string& name);  // invalid_argument lists valid names

const std::vector<std::string>& chirp_mode_names();
std::string chirp_mode_name(ChirpMode m);
ChirpMode parse_chirp_mode(const std::string& name);

// Codec + detector parameters for one processing run. Grid geometry and the
// gradient-path constants live in GridConfig.
struct ModelParams {
  AdaptiveParams adaptive;
  LifParams rate;       // defaults are the published single-chirp values
  LifParams time;       // idem (threshold 231, rest 250, tau 200)
  CfarConfig cfar;

  static ModelParams paper_single();
  static ModelParams paper_multi();  // published 8-chirp codec values
  void validate() const;
};

struct FrameOutput {
  RangeAngleMap map;
  std::vector<SpikeEvent> spikes;   // all events across processed chirps
  uint64_t counted_events = 0;      // events on the chirp(s) the map reads out
  int chirps_used = 0;
};

// All four grid readouts from one resonator pass over the frame.
struct GridOutputs {
  FrameOutput gradient;
  FrameOutput adaptive;
  FrameOutput rate;
  FrameOutput time;
};

// Runs the resonator grid over the frame under the given chirp protocol and
// decodes every spiking model. single: chirp 0 only; continuous: all chirps
// without gradient reset, map read from the final chirp; average: every chirp
// independently (full reset), per-chirp maps averaged.
// counted_events covers the readout span: chirp 0 / final chirp / all chirps.
// chirp_limit > 0 caps how many chirps of the frame are used.
GridOutputs process_frame_grid(const ChirpFrame& frame, ChirpMode mode,
                               const GridConfig& grid, const ModelParams& params,
                               int threads, int chirp_limit = 0);

FrameOutput process_frame_ft(const ChirpFrame& frame, ChirpMode mode,
                             const GridConfig& grid, int threads, int chirp_limit = 0);

// Single-model convenience wrapper over the two functions above.
FrameOutput process_frame(const ChirpFrame& frame, Model model, ChirpMode mode,
                          const GridConfig& grid, const ModelParams& params,
                          int threads, int chirp_limit = 0);

// Decoded maps captured every `stride` samples while processing chirp 0
// (single-chirp protocol). stride must divide n_samples; the last snapshot
// equals the full single-chirp map. Not defined for the Fourier model.
std::vector<RangeAngleMap> checkpoint_maps(const ChirpFrame& frame, Model model,
                                           const GridConfig& grid,
                                           const ModelParams& params, int stride,
                                           int threads);

// Bits to ship one map as dense float32.
inline double dense_map_bits(const GridConfig& g) {
  return static_cast<double>(g.n_range_bins) * g.n_angle_bins * 32.0;
}

// Spike-stream bits relative to the dense map.
inline double bandwidth_ratio(uint64_t events, const GridConfig& g) {
  return static_cast<double>(events) * kSpikeEventBits / dense_map_bits(g);
}

}  // namespace nrr
