#include "nrr/radar.hpp"

#include <cmath>
#include <stdexcept>

namespace nrr {

RadarParams RadarParams::desk() { return RadarParams{}; }

RadarParams RadarParams::paper() {
  RadarParams p;
  p.n_chirps = 32;
  return p;
}

void RadarParams::validate() const {
  if (!(f0_hz > 0.0)) throw std::invalid_argument("radar params: f0 must be > 0");
  if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("radar params: bandwidth must be > 0");
  if (n_samples < 2) throw std::invalid_argument("radar params: n_samples must be >= 2");
  if (n_chirps < 1) throw std::invalid_argument("radar params: n_chirps must be >= 1");
  if (n_vx < 1) throw std::invalid_argument("radar params: n_vx must be >= 1");
  if (!(t_chirp_s > 0.0)) throw std::invalid_argument("radar params: t_chirp must be > 0");
  if (t_wait_s < 0.0) throw std::invalid_argument("radar params: t_wait must be >= 0");
  if (!(antenna_spacing_wl > 0.0))
    throw std::invalid_argument("radar params: antenna spacing must be > 0");
}

double RadarParams::antenna_phase(double azimuth_rad) const {
  return 2.0 * kPi * antenna_spacing_wl * std::sin(azimuth_rad);
}

void Scene::validate() const {
  params.validate();
  if (!(noise_stddev >= 0.0))
    throw std::invalid_argument("scene: noise_stddev must be >= 0");
  for (const auto& t : targets) {
    if (!(t.range_m > 0.0)) throw std::invalid_argument("scene: target range must be > 0");
    if (!(t.rcs >= 0.0)) throw std::invalid_argument("scene: target rcs must be >= 0");
    if (t.range_m >= params.max_unambiguous_range_m())
      throw data_error("scene: target at " + std::to_string(t.range_m) +
                       " m is at or beyond the unambiguous range limit of " +
                       std::to_string(params.max_unambiguous_range_m()) + " m");
  }
}

ChirpFrame::ChirpFrame(int n_chirps, int n_samples, int n_vx)
    : n_chirps_(n_chirps),
      n_samples_(n_samples),
      n_vx_(n_vx),
      data_(static_cast<size_t>(n_chirps) * n_samples * n_vx, cplx{0.0, 0.0}) {
  if (n_chirps < 1 || n_samples < 1 || n_vx < 1)
    throw std::invalid_argument("chirp frame: all dimensions must be >= 1");
}

}  // namespace nrr
