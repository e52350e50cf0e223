#include "nrr/signal_sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "nrr/rng.hpp"

namespace nrr {

ChirpFrame synthesize(const Scene& scene) {
  scene.validate();
  const RadarParams& p = scene.params;
  ChirpFrame frame(p.n_chirps, p.n_samples, p.n_vx);

  // Deterministic tone part, identical for every chirp (targets are static).
  std::vector<cplx> tone(static_cast<size_t>(p.n_samples) * p.n_vx, cplx{0.0, 0.0});
  std::vector<cplx> steer(p.n_vx);
  for (const auto& t : scene.targets) {
    const double phase_step = p.beat_phase_per_sample(t.range_m);
    const double a = t.rcs / (t.range_m * t.range_m);
    const double ant_phase = p.antenna_phase(t.azimuth_rad);
    const cplx ant_rot{std::cos(ant_phase), std::sin(ant_phase)};
    cplx s{a, 0.0};
    for (int m = 0; m < p.n_vx; ++m) {
      steer[m] = s;
      s *= ant_rot;
    }
    const cplx time_rot{std::cos(phase_step), std::sin(phase_step)};
    cplx tphase{1.0, 0.0};
    for (int n = 0; n < p.n_samples; ++n) {
      cplx* row = tone.data() + static_cast<size_t>(n) * p.n_vx;
      for (int m = 0; m < p.n_vx; ++m) row[m] += tphase * steer[m];
      tphase *= time_rot;
    }
  }
  for (int c = 0; c < p.n_chirps; ++c)
    std::memcpy(frame.chirp_data(c), tone.data(), tone.size() * sizeof(cplx));

  if (scene.noise_stddev > 0.0) {
    // Noise order is part of the format: [chirp][sample][antenna], re then im.
    Rng rng(scene.seed);
    for (auto& v : frame.data())
      v += cplx{scene.noise_stddev * rng.normal(), scene.noise_stddev * rng.normal()};
  }
  return frame;
}

const std::vector<std::string>& recipe_names() {
  static const std::vector<std::string> names = {
      "close_targets_2010", "close_targets_0010", "mixed_5", "persons_5", "targets_8"};
  return names;
}

std::string recipe_name(Recipe r) { return recipe_names()[static_cast<size_t>(r)]; }

Recipe parse_recipe(const std::string& name) {
  const auto& names = recipe_names();
  for (size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<Recipe>(i);
  std::string msg = "unknown recipe '" + name + "', valid recipes:";
  for (const auto& n : names) msg += " " + n;
  throw std::invalid_argument(msg);
}

namespace {

// Range band targets are drawn from: the configured desk-scale band, clipped
// against the sensor's own limits (a couple of bins off DC, a few bins of
// margin before the alias limit).
struct RangeBand {
  double lo;
  double hi;
};

RangeBand usable_band(const RadarParams& p) {
  const double bin_w = p.range_bin_width_m();
  RangeBand b{std::max(kFieldRangeMin, 2.0 * bin_w),
              std::min(kFieldRangeMax, p.max_unambiguous_range_m() - 4.0 * bin_w)};
  if (!(b.hi > b.lo))
    throw std::invalid_argument("make_dataset: no usable range band for these parameters");
  return b;
}

PointTarget random_target(Rng& rng, double sigma, double rmin, double rmax) {
  PointTarget t;
  t.range_m = rng.uniform(rmin, rmax);
  t.azimuth_rad = std::asin(rng.uniform(-kFieldSinAzMax, kFieldSinAzMax));
  t.rcs = rcs_from_sigma(sigma);
  return t;
}

// Close-target pairs keep their label bins 1..3 range bins and 0..2 angle
// bins apart. Offsets are drawn in continuous bin units; the lower offset
// bound of 1.0 range bin guarantees the rounded labels never collapse into
// the same cell.
Scene close_pair_scene(Rng& rng, const RadarParams& p, const RangeBand& band,
                       double sigma_a, double sigma_b) {
  Scene s;
  // Keep the pair away from both band edges so the offset partner stays in.
  const double bin_w = p.range_bin_width_m();
  PointTarget a =
      random_target(rng, sigma_a, band.lo + 3.0 * bin_w, band.hi - 3.0 * bin_w);

  const double dj = rng.uniform(1.0, 3.0) * (rng.uniform01() < 0.5 ? -1.0 : 1.0);
  const double dl = rng.uniform(-2.0, 2.0);

  PointTarget b;
  b.rcs = rcs_from_sigma(sigma_b);
  b.range_m = a.range_m + dj * bin_w;
  const double sin_step = 1.0 / p.antenna_spacing_wl / p.n_vx;  // one angle bin in sin space
  double sin_b = std::sin(a.azimuth_rad) + dl * sin_step;
  sin_b = std::clamp(sin_b, -kFieldSinAzMax, kFieldSinAzMax);
  b.azimuth_rad = std::asin(sin_b);
  s.targets = {a, b};
  return s;
}

Scene multi_scene(Rng& rng, const RangeBand& band, const std::vector<double>& sigmas) {
  Scene s;
  for (double sigma : sigmas)
    s.targets.push_back(random_target(rng, sigma, band.lo, band.hi));
  return s;
}

}  // namespace

std::vector<Scene> make_dataset(Recipe recipe, int n_scenes, uint64_t seed,
                                const RadarParams& params, double noise_stddev) {
  if (n_scenes < 1) throw std::invalid_argument("make_dataset: n_scenes must be >= 1");
  params.validate();
  const RangeBand band = usable_band(params);
  static const double kSigmaChoices[] = {0.0, 5.0, 10.0, 15.0, 20.0};

  std::vector<Scene> scenes;
  scenes.reserve(n_scenes);
  for (int i = 0; i < n_scenes; ++i) {
    const uint64_t scene_seed = mix_seed(seed, static_cast<uint64_t>(i));
    Rng rng(scene_seed);
    Scene s;
    switch (recipe) {
      case Recipe::close_targets_2010:
        s = close_pair_scene(rng, params, band, 20.0, 10.0);
        break;
      case Recipe::close_targets_0010:
        s = close_pair_scene(rng, params, band, 0.0, 10.0);
        break;
      case Recipe::mixed_5:
        s = multi_scene(rng, band, {0.0, 5.0, 10.0, 15.0, 20.0});
        break;
      case Recipe::persons_5:
        s = multi_scene(rng, band, {0.0, 0.0, 5.0, 5.0, 10.0});
        break;
      case Recipe::targets_8: {
        const int n = rng.uniform_int(1, 8);
        std::vector<double> sigmas;
        for (int k = 0; k < n; ++k) sigmas.push_back(kSigmaChoices[rng.uniform_int(0, 4)]);
        s = multi_scene(rng, band, sigmas);
        break;
      }
    }
    s.params = params;
    s.noise_stddev = noise_stddev;
    s.seed = scene_seed;
    s.recipe = recipe_name(recipe);
    s.validate();
    scenes.push_back(std::move(s));
  }
  return scenes;
}

}  // namespace nrr
