#pragma once

#include <string>
#include <vector>

#include "nrr/radar.hpp"

namespace nrr {

// Renders the IF data cube for a labeled point-target scene:
//   x[c][n][m] = sum_k a_k * exp(i m phi_k) * exp(i omega_k n dt) + noise
// with a_k = rcs_k / (r_k/1m)^2, phi_k the per-antenna phase shift and
// omega_k the beat frequency. Targets are static, so the deterministic tone
// part is identical across chirps; only the noise differs.
// Throws data_error when a target's beat phase per sample reaches pi
// (beyond the unambiguous range).
ChirpFrame synthesize(const Scene& scene);

enum class Recipe {
  close_targets_2010,  // two close targets, sigma 10 and 20
  close_targets_0010,  // two close targets, sigma 0 and 10
  mixed_5,             // five targets, sigma {0, 5, 10, 15, 20}
  persons_5,           // five person-like targets, sigma {0, 0, 5, 5, 10}
  targets_8,           // 1..8 targets, random sigma
};

const std::vector<std::string>& recipe_names();
std::string recipe_name(Recipe r);
Recipe parse_recipe(const std::string& name);  // invalid_argument lists valid names

// Catalogued sigma values map onto the linear amplitude scale stored in
// PointTarget::rcs; the +1 keeps sigma = 0 targets visible.
inline double rcs_from_sigma(double sigma) { return 1.0 + sigma / 10.0; }

// Scene generation constants. Targets are drawn over a desk-scale band
// [kFieldRangeMin, kFieldRangeMax]: reflectors sit within arm's reach of the
// sensor, as in the person/office scenes the recipes describe. The placement
// band is a generator choice, and the near band is the regime the whole
// processing chain is sized for. With the inverse-square amplitude model,
// keeping every target inside a few meters keeps even the weakest-catalogue
// reflector's per-sample envelope growth of order one. That matters because
// the spike readouts emit integer counts: a detector offset large enough to
// reject a lone count in an otherwise empty neighborhood (< ~1) must stay
// below the weakest real response, which a far-field band (amplitudes
// ~1/r^2 ~ 1e-3) cannot satisfy. The floor keeps the model away from its
// r -> 0 divergence; the noise default keeps a noise-only resonator's
// envelope two orders below the weakest target response.
inline constexpr double kDefaultNoiseStddev = 3e-4;
inline constexpr double kFieldRangeMin = 1.0;    // m
inline constexpr double kFieldRangeMax = 3.5;    // m
inline constexpr double kFieldSinAzMax = 0.93;   // |sin(azimuth)| bound

// Deterministic labeled scenes for a recipe. Scene i uses seed
// mix_seed(seed, i); equal inputs give bit-identical scenes.
std::vector<Scene> make_dataset(Recipe recipe, int n_scenes, uint64_t seed,
                                const RadarParams& params = RadarParams::desk(),
                                double noise_stddev = kDefaultNoiseStddev);

}  // namespace nrr
