#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nrr/detection.hpp"
#include "nrr/pipeline.hpp"
#include "nrr/radar.hpp"

namespace nrr {

// ---- ground-truth labels ----------------------------------------------------

struct BinLabel {
  std::vector<std::pair<int, int>> bins;  // (range_bin, angle_bin) per target
};

// Continuous range -> bin index, round half up.
int range_bin_of(double range_m, const RadarParams& p, const GridConfig& grid);
// Azimuth -> nearest steering bin, circular in phase; exact midpoints round
// half up, matching the range axis.
int angle_bin_of(double azimuth_rad, const RadarParams& p, const GridConfig& grid);

// Throws data_error when a target falls outside the grid.
BinLabel label_bins(const Scene& scene, const GridConfig& grid);

// ---- scoring ----------------------------------------------------------------

struct MatchCounts {
  int tp = 0;
  int fp = 0;
  int fn = 0;
};

// Greedy one-to-one matching of detections to labels within a Chebyshev
// radius (default 1 bin). Labels are visited in (range, angle) order; each
// takes the nearest unused detection, ties broken by bin index, so the result
// is deterministic and symmetric for equal-distance configurations.
MatchCounts score(const DetectionMap& det, const BinLabel& labels, int radius = 1);

double precision(const MatchCounts& c);
double recall(const MatchCounts& c);
double f_score(const MatchCounts& c);

// Mean over targets of map[label] / sum(map); 0 when the map is all zero.
double snr_adjusted(const RangeAngleMap& map, const BinLabel& labels);

// ---- dataset-level reports ----------------------------------------------------

struct SceneEval {
  std::string recipe;
  MatchCounts counts;
  double precision = 0.0;
  double recall = 0.0;
  double f_score = 0.0;
  double snr = 0.0;
  uint64_t spike_events = 0;
  double bandwidth_ratio = 0.0;
};

struct EvalSummary {
  int scenes = 0;
  double f_score = 0.0;  // equal-weight means over scenes
  double precision = 0.0;
  double recall = 0.0;
  double snr = 0.0;
  double spike_events = 0.0;
  double bandwidth_ratio = 0.0;
};

struct EvalReport {
  std::string model;
  std::string mode;
  CfarConfig cfar;
  int match_radius = 1;
  EvalSummary overall;
  std::vector<std::pair<std::string, EvalSummary>> per_recipe;
  std::vector<SceneEval> per_scene;
};

EvalSummary summarize(const std::vector<SceneEval>& scenes);

// One prediction (map + spike count) per scene, same order as labels.
struct ScenePrediction {
  RangeAngleMap map;
  uint64_t spike_events = 0;
  std::string recipe;
};

EvalReport evaluate_predictions(const std::vector<ScenePrediction>& preds,
                                const std::vector<BinLabel>& labels,
                                const CfarConfig& cfar, const GridConfig& grid,
                                const std::string& model_tag,
                                const std::string& mode_tag, int match_radius = 1);

// ---- early detection ----------------------------------------------------------

struct EarlyCurvePoint {
  int sample;  // samples consumed at this checkpoint: stride, 2*stride, ...
  MatchCounts counts;
  double precision = 0.0;
  double recall = 0.0;
  double f_score = 0.0;
};

struct EarlyCurve {
  std::vector<EarlyCurvePoint> points;
};

// Detection quality at every `stride` samples of chirp 0, aggregated over the
// dataset (counts summed per checkpoint, metrics from the sums).
EarlyCurve early_detection_curve(const std::vector<ChirpFrame>& frames,
                                 const std::vector<Scene>& scenes, Model model,
                                 const GridConfig& grid, const ModelParams& params,
                                 int stride, int threads);

}  // namespace nrr
