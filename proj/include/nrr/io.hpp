#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "nrr/eval.hpp"
#include "nrr/pipeline.hpp"
#include "nrr/radar.hpp"
#include "nrr/resonator.hpp"
#include "nrr/sweep.hpp"

namespace nrr {

// All binary formats are little-endian with a 4-byte magic and a u16 version.
// Frames: "NRRF" | u16 version | u32 n_chirps | u32 n_samples | u32 n_vx |
//         float32 re,im pairs in [chirp][sample][antenna] order.
// Maps:   "NRRM" | u16 version | u32 n_range | u32 n_angle | float32 row-major.
// Grids:  "NRRG" | u16 version | u32 n_range | u32 n_angle | per cell
//         float32 {g, s_max, w_max, mag}.
// Spikes: "NRRS" | u16 version | u64 count | packed records
//         {u16 chirp, u16 sample, u16 range_bin, u16 angle_bin, i8 polarity}.
// Readers validate magic, version and payload size and throw data_error.

inline constexpr uint16_t kFormatVersion = 1;

void write_scene_json(const Scene& scene, const std::filesystem::path& path);
Scene read_scene_json(const std::filesystem::path& path);

void write_frame(const ChirpFrame& frame, const std::filesystem::path& path);
ChirpFrame read_frame(const std::filesystem::path& path);

void write_map(const RangeAngleMap& map, const std::filesystem::path& path);
RangeAngleMap read_map(const std::filesystem::path& path);
void write_map_csv(const RangeAngleMap& map, const std::filesystem::path& path);

void write_grid_snapshot(const ResonatorGrid& grid, const std::filesystem::path& path);
void write_grid_snapshot_csv(const ResonatorGrid& grid, const std::filesystem::path& path);

void write_spikes(std::span<const SpikeEvent> spikes, const std::filesystem::path& path);
std::vector<SpikeEvent> read_spikes(const std::filesystem::path& path);
void write_spikes_csv(std::span<const SpikeEvent> spikes, const std::filesystem::path& path);

// Serialized forms used by the byte-level determinism checks.
std::vector<uint8_t> map_bytes(const RangeAngleMap& map);
std::vector<uint8_t> spike_bytes(std::span<const SpikeEvent> spikes);

// Processing parameters: grid constants, codec params, CFAR. JSON with a
// schema_version field; unknown fields rejected.
struct ParamsFile {
  GridConfig grid;        // geometry fields ignored on read (frames define them)
  ModelParams params;
};
void write_params_json(const ParamsFile& p, const std::filesystem::path& path);
ParamsFile read_params_json(const std::filesystem::path& path);
// Applies alpha/codec/cfar values from `file` onto (grid, params), leaving
// geometry from the frame untouched.
void apply_params(const ParamsFile& file, GridConfig& grid, ModelParams& params);

// Per-frame processing sidecar (model, mode, counted events, chirp span).
struct FrameMeta {
  std::string model;
  std::string mode;
  uint64_t counted_events = 0;
  int chirps_used = 0;
};
void write_frame_meta(const FrameMeta& m, const std::filesystem::path& path);
FrameMeta read_frame_meta(const std::filesystem::path& path);

void write_report_json(const EvalReport& r, const std::filesystem::path& path);
EvalReport read_report_json(const std::filesystem::path& path);
// Summary table, one row per report: model, mode, f_score, precision, recall,
// snr, avg_spike_events, bandwidth_ratio.
void write_report_csv(std::span<const EvalReport> reports, const std::filesystem::path& path);

void write_sweep_csv(const SweepResult& r, const std::filesystem::path& path);

void write_early_curve_csv(const EarlyCurve& c, const std::filesystem::path& path);

// Sweep specification JSON: {"stage", "model", "mode", optional "chirp_limit",
// optional "grids": {name: [values]}, optional "fixed": params-file object}.
// Missing grids fall back to the stage defaults for the model.
SweepSpec read_sweep_spec_json(const std::filesystem::path& path);

}  // namespace nrr
