#include "nrr/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace nrr {

int range_bin_of(double range_m, const RadarParams& p, const GridConfig& grid) {
  const double bin = range_m / p.range_bin_width_m();
  const int j = static_cast<int>(std::floor(bin + 0.5));  // round half up
  if (j < 0 || j >= grid.n_range_bins)
    throw data_error("label: range " + std::to_string(range_m) +
                     " m falls outside the range grid");
  return j;
}

int angle_bin_of(double azimuth_rad, const RadarParams& p, const GridConfig& grid) {
  const double phi = p.antenna_phase(azimuth_rad);
  // Steering phases are -pi + 2*pi*l/n; nearest bin, circular, ties downward.
  const double step = 2.0 * kPi / grid.n_angle_bins;
  double pos = (phi + kPi) / step;
  pos -= grid.n_angle_bins * std::floor(pos / grid.n_angle_bins);  // wrap into [0, n)
  int l = static_cast<int>(std::floor(pos + 0.5));
  if (l >= grid.n_angle_bins) l = 0;  // wrapped around the circular seam
  return l;
}

BinLabel label_bins(const Scene& scene, const GridConfig& grid) {
  BinLabel out;
  for (const auto& t : scene.targets)
    out.bins.emplace_back(range_bin_of(t.range_m, scene.params, grid),
                          angle_bin_of(t.azimuth_rad, scene.params, grid));
  return out;
}

MatchCounts score(const DetectionMap& det, const BinLabel& labels, int radius) {
  if (radius < 0) throw std::invalid_argument("score: radius must be >= 0");
  const auto hits = det.hit_coords();
  std::vector<bool> used(hits.size(), false);

  // Labels sorted by bin index; each takes its nearest unused detection.
  std::vector<std::pair<int, int>> ordered = labels.bins;
  std::sort(ordered.begin(), ordered.end());

  MatchCounts c;
  for (const auto& [lj, ll] : ordered) {
    int best = -1;
    int best_dist = std::numeric_limits<int>::max();
    for (size_t h = 0; h < hits.size(); ++h) {
      if (used[h]) continue;
      const int dj = std::abs(hits[h].first - lj);
      const int dl = std::abs(hits[h].second - ll);
      const int dist = std::max(dj, dl);
      if (dist > radius) continue;
      if (dist < best_dist) {  // row-major hit order breaks distance ties
        best_dist = dist;
        best = static_cast<int>(h);
      }
    }
    if (best >= 0) {
      used[best] = true;
      ++c.tp;
    } else {
      ++c.fn;
    }
  }
  c.fp = static_cast<int>(hits.size()) - c.tp;
  return c;
}

double precision(const MatchCounts& c) {
  const int denom = c.tp + c.fp;
  return denom == 0 ? 0.0 : static_cast<double>(c.tp) / denom;
}

double recall(const MatchCounts& c) {
  const int denom = c.tp + c.fn;
  return denom == 0 ? 0.0 : static_cast<double>(c.tp) / denom;
}

double f_score(const MatchCounts& c) {
  const double p = precision(c);
  const double r = recall(c);
  return (p + r) == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

double snr_adjusted(const RangeAngleMap& map, const BinLabel& labels) {
  if (labels.bins.empty()) return 0.0;
  const double total = map.total();
  if (total <= 0.0) return 0.0;
  double acc = 0.0;
  for (const auto& [j, l] : labels.bins) {
    if (j < 0 || j >= map.n_range || l < 0 || l >= map.n_angle)
      throw std::invalid_argument("snr_adjusted: label outside the map");
    acc += map.at(j, l) / total;
  }
  return acc / static_cast<double>(labels.bins.size());
}

EvalSummary summarize(const std::vector<SceneEval>& scenes) {
  EvalSummary s;
  s.scenes = static_cast<int>(scenes.size());
  if (scenes.empty()) return s;
  for (const auto& e : scenes) {
    s.f_score += e.f_score;
    s.precision += e.precision;
    s.recall += e.recall;
    s.snr += e.snr;
    s.spike_events += static_cast<double>(e.spike_events);
    s.bandwidth_ratio += e.bandwidth_ratio;
  }
  const double inv = 1.0 / s.scenes;
  s.f_score *= inv;
  s.precision *= inv;
  s.recall *= inv;
  s.snr *= inv;
  s.spike_events *= inv;
  s.bandwidth_ratio *= inv;
  return s;
}

EvalReport evaluate_predictions(const std::vector<ScenePrediction>& preds,
                                const std::vector<BinLabel>& labels,
                                const CfarConfig& cfar, const GridConfig& grid,
                                const std::string& model_tag,
                                const std::string& mode_tag, int match_radius) {
  if (preds.size() != labels.size())
    throw std::invalid_argument("evaluate: prediction and label counts differ");
  cfar.validate();

  EvalReport report;
  report.model = model_tag;
  report.mode = mode_tag;
  report.cfar = cfar;
  report.match_radius = match_radius;
  report.per_scene.reserve(preds.size());

  for (size_t i = 0; i < preds.size(); ++i) {
    const DetectionMap det = ca_cfar(preds[i].map, cfar);
    SceneEval e;
    e.recipe = preds[i].recipe;
    e.counts = score(det, labels[i], match_radius);
    e.precision = precision(e.counts);
    e.recall = recall(e.counts);
    e.f_score = f_score(e.counts);
    e.snr = snr_adjusted(preds[i].map, labels[i]);
    e.spike_events = preds[i].spike_events;
    e.bandwidth_ratio = bandwidth_ratio(preds[i].spike_events, grid);
    report.per_scene.push_back(e);
  }

  report.overall = summarize(report.per_scene);

  std::map<std::string, std::vector<SceneEval>> by_recipe;
  for (const auto& e : report.per_scene) by_recipe[e.recipe].push_back(e);
  for (const auto& [name, list] : by_recipe)
    report.per_recipe.emplace_back(name, summarize(list));
  return report;
}

EarlyCurve early_detection_curve(const std::vector<ChirpFrame>& frames,
                                 const std::vector<Scene>& scenes, Model model,
                                 const GridConfig& grid, const ModelParams& params,
                                 int stride, int threads) {
  if (frames.size() != scenes.size())
    throw std::invalid_argument("early_detection_curve: frame and scene counts differ");
  if (frames.empty())
    throw std::invalid_argument("early_detection_curve: no frames given");

  const int n_checkpoints = grid.n_samples / (stride < 1 ? 1 : stride);
  EarlyCurve curve;
  curve.points.resize(static_cast<size_t>(n_checkpoints));
  for (int ck = 0; ck < n_checkpoints; ++ck) curve.points[ck].sample = (ck + 1) * stride;

  for (size_t i = 0; i < frames.size(); ++i) {
    const BinLabel labels = label_bins(scenes[i], grid);
    const std::vector<RangeAngleMap> maps =
        checkpoint_maps(frames[i], model, grid, params, stride, threads);
    for (int ck = 0; ck < n_checkpoints; ++ck) {
      const MatchCounts c = score(ca_cfar(maps[ck], params.cfar), labels, 1);
      curve.points[ck].counts.tp += c.tp;
      curve.points[ck].counts.fp += c.fp;
      curve.points[ck].counts.fn += c.fn;
    }
  }
  for (auto& pt : curve.points) {
    pt.precision = precision(pt.counts);
    pt.recall = recall(pt.counts);
    pt.f_score = f_score(pt.counts);
  }
  return curve;
}

}  // namespace nrr
