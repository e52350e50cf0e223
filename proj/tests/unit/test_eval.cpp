#include <doctest.h>

#include <cmath>

#include "nrr/eval.hpp"
#include "nrr/signal_sim.hpp"

using namespace nrr;

namespace {

RadarParams small_params() {
  RadarParams p = RadarParams::desk();
  p.n_samples = 64;
  p.n_chirps = 1;
  p.n_vx = 8;
  return p;
}

DetectionMap det_with(int nr, int na, std::initializer_list<std::pair<int, int>> cells) {
  DetectionMap d(nr, na);
  for (auto [j, l] : cells) d.set(j, l, true);
  return d;
}

BinLabel labels_of(std::initializer_list<std::pair<int, int>> cells) {
  BinLabel b;
  b.bins = cells;
  return b;
}

}  // namespace

TEST_CASE("range labels round half up") {
  const RadarParams p = small_params();
  const GridConfig g = GridConfig::for_params(p);
  const double bw = p.range_bin_width_m();
  CHECK(range_bin_of(10.0 * bw, p, g) == 10);
  CHECK(range_bin_of(10.49 * bw, p, g) == 10);
  CHECK(range_bin_of(10.5 * bw, p, g) == 11);
  CHECK(range_bin_of(10.51 * bw, p, g) == 11);
  CHECK_THROWS_AS(range_bin_of(g.n_range_bins * bw, p, g), data_error);
}

TEST_CASE("angle labels pick the circularly nearest steering bin") {
  const RadarParams p = small_params();  // 8 angle bins, half-wavelength spacing
  const GridConfig g = GridConfig::for_params(p);
  // Bin l sits at phase -pi + 2 pi l / 8; phase = pi sin(az).
  CHECK(angle_bin_of(0.0, p, g) == 4);                  // phase 0
  CHECK(angle_bin_of(std::asin(0.25), p, g) == 5);      // phase pi/4
  CHECK(angle_bin_of(std::asin(-0.5), p, g) == 2);      // phase -pi/2
  // Phase 0.99 pi wraps around: closer to bin 0 (at -pi == pi) than to bin 7.
  CHECK(angle_bin_of(std::asin(0.99), p, g) == 0);
  // Exact midpoint between bins 4 and 5 rounds half up, like the range axis.
  CHECK(angle_bin_of(std::asin(0.125), p, g) == 5);
}

TEST_CASE("scene labels combine both axes") {
  const RadarParams p = small_params();
  const GridConfig g = GridConfig::for_params(p);
  Scene s;
  s.params = p;
  s.noise_stddev = 0.0;
  s.targets = {{20 * p.range_bin_width_m(), 0.0, 1.0, 0.0},
               {5 * p.range_bin_width_m(), std::asin(0.25), 1.0, 0.0}};
  const BinLabel lab = label_bins(s, g);
  REQUIRE(lab.bins.size() == 2);
  CHECK(lab.bins[0] == std::pair<int, int>{20, 4});
  CHECK(lab.bins[1] == std::pair<int, int>{5, 5});
}

TEST_CASE("matching basics") {
  const BinLabel labs = labels_of({{10, 4}, {20, 2}});
  SUBCASE("perfect hits") {
    const MatchCounts c = score(det_with(32, 8, {{10, 4}, {20, 2}}), labs);
    CHECK(c.tp == 2);
    CHECK(c.fp == 0);
    CHECK(c.fn == 0);
  }
  SUBCASE("no hits at all") {
    const MatchCounts c = score(det_with(32, 8, {}), labs);
    CHECK(c.tp == 0);
    CHECK(c.fn == 2);
  }
  SUBCASE("a diagonal neighbor still matches at radius one") {
    const MatchCounts c = score(det_with(32, 8, {{11, 5}, {20, 2}}), labs);
    CHECK(c.tp == 2);
    CHECK(c.fp == 0);
  }
  SUBCASE("two bins away does not match") {
    const MatchCounts c = score(det_with(32, 8, {{12, 4}}), labs);
    CHECK(c.tp == 0);
    CHECK(c.fp == 1);
    CHECK(c.fn == 2);
  }
  SUBCASE("one detection cannot serve two labels") {
    const MatchCounts c = score(det_with(32, 8, {{10, 4}}), labels_of({{10, 4}, {11, 4}}));
    CHECK(c.tp == 1);
    CHECK(c.fn == 1);
    CHECK(c.fp == 0);
  }
  SUBCASE("extra detections near a matched label are false positives") {
    const MatchCounts c = score(det_with(32, 8, {{10, 4}, {10, 5}, {11, 4}}),
                                labels_of({{10, 4}}));
    CHECK(c.tp == 1);
    CHECK(c.fp == 2);
  }
  SUBCASE("each label takes its nearest detection") {
    // Detection (10,4) is exact for label one; (21,2) is distance one from
    // label two. Both match.
    const MatchCounts c = score(det_with(32, 8, {{21, 2}, {10, 4}}), labs);
    CHECK(c.tp == 2);
  }
}

TEST_CASE("metric edge cases") {
  MatchCounts none;
  CHECK(precision(none) == 0.0);
  CHECK(recall(none) == 0.0);
  CHECK(f_score(none) == 0.0);
  MatchCounts mixed{1, 1, 1};
  CHECK(precision(mixed) == doctest::Approx(0.5));
  CHECK(recall(mixed) == doctest::Approx(0.5));
  CHECK(f_score(mixed) == doctest::Approx(0.5));
  MatchCounts perfect{4, 0, 0};
  CHECK(f_score(perfect) == doctest::Approx(1.0));
}

TEST_CASE("adjusted signal ratio") {
  RangeAngleMap m(8, 8);
  SUBCASE("all mass on the label") {
    m.at(3, 3) = 5.0;
    CHECK(snr_adjusted(m, labels_of({{3, 3}})) == doctest::Approx(1.0));
  }
  SUBCASE("uniform map gives one over the cell count") {
    for (auto& v : m.values) v = 0.7;
    CHECK(snr_adjusted(m, labels_of({{2, 5}})) == doctest::Approx(1.0 / 64.0));
  }
  SUBCASE("mean over several labels") {
    m.at(1, 1) = 3.0;
    m.at(6, 2) = 1.0;
    const double got = snr_adjusted(m, labels_of({{1, 1}, {6, 2}}));
    CHECK(got == doctest::Approx(0.5 * (3.0 / 4.0 + 1.0 / 4.0)));
  }
  SUBCASE("zero map scores zero") {
    CHECK(snr_adjusted(m, labels_of({{0, 0}})) == 0.0);
  }
}

TEST_CASE("summaries weight scenes equally") {
  SceneEval a, b;
  a.recipe = "r1";
  a.f_score = 1.0;
  a.precision = 1.0;
  a.recall = 1.0;
  a.snr = 0.4;
  a.spike_events = 100;
  a.bandwidth_ratio = 0.01;
  b.recipe = "r2";
  b.f_score = 0.0;
  b.snr = 0.2;
  b.spike_events = 300;
  b.bandwidth_ratio = 0.03;
  const EvalSummary s = summarize({a, b});
  CHECK(s.scenes == 2);
  CHECK(s.f_score == doctest::Approx(0.5));
  CHECK(s.snr == doctest::Approx(0.3));
  CHECK(s.spike_events == doctest::Approx(200.0));
  CHECK(s.bandwidth_ratio == doctest::Approx(0.02));
}

TEST_CASE("prediction evaluation groups by recipe") {
  const GridConfig g{8, 8, 16, 0.001, 1.0};
  std::vector<ScenePrediction> preds(3);
  std::vector<BinLabel> labels(3);
  for (int i = 0; i < 3; ++i) {
    preds[i].map = RangeAngleMap(8, 8);
    preds[i].map.at(4, 4) = 10.0;
    preds[i].spike_events = 50;
    labels[i] = labels_of({{4, 4}});
  }
  preds[0].recipe = "alpha";
  preds[1].recipe = "beta";
  preds[2].recipe = "beta";
  CfarConfig cfar;
  const EvalReport rep = evaluate_predictions(preds, labels, cfar, g, "ft", "single");
  CHECK(rep.overall.scenes == 3);
  CHECK(rep.overall.f_score == doctest::Approx(1.0));
  REQUIRE(rep.per_recipe.size() == 2);
  CHECK(rep.per_recipe[0].first == "alpha");
  CHECK(rep.per_recipe[0].second.scenes == 1);
  CHECK(rep.per_recipe[1].first == "beta");
  CHECK(rep.per_recipe[1].second.scenes == 2);
  CHECK(rep.per_scene.size() == 3);
  // Bandwidth: 50 events * 72 bits over an 8x8 map of 32-bit cells.
  CHECK(rep.per_scene[0].bandwidth_ratio == doctest::Approx(50.0 * 72 / (64.0 * 32)));
}

TEST_CASE("a single end-of-chirp checkpoint reproduces full-chirp scoring") {
  RadarParams p = small_params();
  Scene s;
  s.params = p;
  s.noise_stddev = 0.05;
  s.seed = 3;
  s.targets = {{5.0, 0.2, 2.0, 0.0}};
  const ChirpFrame f = synthesize(s);
  GridConfig grid = GridConfig::for_params(p);
  grid.alpha_x = 0.6;
  grid.alpha_g = 0.01;
  ModelParams mp = ModelParams::paper_single();
  const EarlyCurve curve = early_detection_curve({f}, {s}, Model::gradient, grid, mp,
                                                 p.n_samples, 1);
  REQUIRE(curve.points.size() == 1);
  CHECK(curve.points.back().sample == p.n_samples);

  const FrameOutput full = process_frame(f, Model::gradient, ChirpMode::single, grid, mp, 1);
  const MatchCounts want = score(ca_cfar(full.map, mp.cfar), label_bins(s, grid));
  CHECK(curve.points[0].counts.tp == want.tp);
  CHECK(curve.points[0].counts.fp == want.fp);
  CHECK(curve.points[0].counts.fn == want.fn);
}

TEST_CASE("early curves have one point per stride") {
  RadarParams p = small_params();
  Scene s;
  s.params = p;
  s.noise_stddev = 0.05;
  s.seed = 4;
  s.targets = {{5.0, 0.0, 2.0, 0.0}};
  const ChirpFrame f = synthesize(s);
  GridConfig grid = GridConfig::for_params(p);
  const EarlyCurve curve = early_detection_curve({f}, {s}, Model::rate, grid,
                                                 ModelParams::paper_single(), 16, 1);
  REQUIRE(curve.points.size() == 4);
  CHECK(curve.points[0].sample == 16);
  CHECK(curve.points[3].sample == 64);
}
