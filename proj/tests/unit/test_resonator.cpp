#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "../oracles.hpp"
#include "nrr/resonator.hpp"
#include "nrr/rng.hpp"
#include "nrr/signal_sim.hpp"

using namespace nrr;

namespace {

RadarParams small_params() {
  RadarParams p = RadarParams::desk();
  p.n_samples = 64;
  p.n_chirps = 2;
  p.n_vx = 8;
  return p;
}

Scene small_scene(double noise, uint64_t seed) {
  Scene s;
  s.params = small_params();
  s.noise_stddev = noise;
  s.seed = seed;
  s.targets = {{4.0, 0.3, 2.0, 0.0}, {7.5, -0.5, 1.0, 0.0}};
  return s;
}

std::vector<cplx> random_signal(int n, uint64_t seed) {
  Rng rng(seed);
  std::vector<cplx> y(n);
  for (auto& v : y) v = cplx(rng.normal(), rng.normal());
  return y;
}

}  // namespace

TEST_CASE("dendritic projection basics") {
  const WeightMatrix w(8, 8);
  std::vector<cplx> zero(8, cplx(0.0));
  CHECK(dendritic_project(zero, w.row(3)) == cplx(0.0));

  // A wave matched to row l sums coherently to n_vx.
  for (int l : {0, 3, 7}) {
    std::vector<cplx> matched(8);
    for (int m = 0; m < 8; ++m) matched[m] = std::polar(1.0, w.phase(l) * m);
    const cplx y = dendritic_project(matched, w.row(l));
    CHECK(std::abs(y - cplx(8.0)) < 1e-12);
  }

  // Random input agrees with a plainly written dot product.
  const auto x = random_signal(8, 21);
  for (int l = 0; l < 8; ++l) {
    cplx want = 0.0;
    for (int m = 0; m < 8; ++m) want += std::polar(1.0, -w.phase(l) * m) * x[m];
    CHECK(std::abs(dendritic_project(x, w.row(l)) - want) < 1e-12);
  }

  std::vector<cplx> wrong(7, cplx(1.0));
  CHECK_THROWS_AS(dendritic_project(wrong, w.row(0)), std::invalid_argument);
}

TEST_CASE("unit rotation accumulates the drive sum") {
  NeuronState st;
  for (int n = 0; n < 10; ++n) rf_step(st, cplx(1.0), cplx(1.0));
  CHECK(st.resonator == cplx(10.0));
}

TEST_CASE("resonator state carries the bin DFT at every step") {
  const int n_samples = 64;
  const RotationTable rots(32, n_samples);
  const auto y = random_signal(n_samples, 5);
  for (int j : {0, 1, 5, 17, 31}) {
    NeuronState st;
    std::vector<cplx> prefix;
    for (int n = 0; n < n_samples; ++n) {
      rf_step(st, y[n], rots.rot(j));
      prefix.push_back(y[n]);
      // |s_n| equals the magnitude of bin j of the prefix seen so far.
      if (n % 13 == 0 || n == n_samples - 1) {
        std::vector<cplx> padded = prefix;  // prefix DFT at the full-length bin spacing
        padded.resize(n_samples, cplx(0.0));
        const cplx want = oracle::dft_bin(padded, j);
        CHECK(std::abs(magnitude(st.resonator) - std::abs(want)) <=
              1e-9 * std::max(1.0, std::abs(want)));
      }
    }
    // Full-chirp phase relation: rot * s_N == DFT_j(y).
    const cplx want = oracle::dft_bin(y, j);
    const cplx got = rots.rot(j) * st.resonator;
    CHECK(std::abs(got - want) <= 1e-9 * std::max(1.0, std::abs(want)));
  }
}

TEST_CASE("a matched tone drives the state to N") {
  const int n_samples = 64;
  const RotationTable rots(32, n_samples);
  const int j = 9;
  NeuronState st;
  for (int n = 0; n < n_samples; ++n)
    rf_step(st, std::polar(1.0, rots.delta_omega(j) * n), rots.rot(j));
  CHECK(magnitude(st.resonator) == doctest::Approx(n_samples).epsilon(1e-12));
}

TEST_CASE("analytic tone response matches numerical integration") {
  const double omega_res = 3.7;
  SUBCASE("single detuned tone") {
    const std::vector<ToneDrive> drives = {{cplx(1.5, -0.5), 5.2}};
    const cplx want = oracle::rk4_resonator(omega_res, drives, 20.0, 200000);
    const cplx got = analytic_state(20.0, drives, omega_res);
    CHECK(std::abs(got - want) < 1e-7 * std::abs(want));
  }
  SUBCASE("matched tone grows linearly") {
    const std::vector<ToneDrive> drives = {{cplx(0.0, 2.0), omega_res}};
    const cplx want = oracle::rk4_resonator(omega_res, drives, 8.0, 100000);
    const cplx got = analytic_state(8.0, drives, omega_res);
    CHECK(std::abs(got - want) < 1e-7 * std::abs(want));
    CHECK(std::abs(got) == doctest::Approx(2.0 * 8.0).epsilon(1e-9));
  }
  SUBCASE("three tones superpose") {
    const std::vector<ToneDrive> drives = {
        {cplx(1.0, 0.0), 1.0}, {cplx(0.0, -1.0), 3.7}, {cplx(-2.0, 0.3), 9.9}};
    const cplx want = oracle::rk4_resonator(omega_res, drives, 12.0, 200000);
    const cplx got = analytic_state(12.0, drives, omega_res);
    CHECK(std::abs(got - want) < 1e-6 * std::abs(want));
  }
  SUBCASE("tiny detuning is continuous with the matched branch") {
    const std::vector<ToneDrive> nearly = {{cplx(1.0, 0.0), omega_res + 1e-14}};
    const std::vector<ToneDrive> exact = {{cplx(1.0, 0.0), omega_res}};
    const cplx a = analytic_state(5.0, nearly, omega_res);
    const cplx b = analytic_state(5.0, exact, omega_res);
    CHECK(std::abs(a - b) < 1e-9);
  }
}

TEST_CASE("discrete update converges first order to the continuous response") {
  const double omega_res = 5.0, omega = 7.0, t_end = 1.0;
  const std::vector<ToneDrive> drives = {{cplx(1.0, 0.0), omega}};
  const cplx exact = analytic_state(t_end, drives, omega_res);
  auto discrete = [&](int n_steps) {
    const double h = t_end / n_steps;
    const cplx rot = std::polar(1.0, omega_res * h);
    cplx s = 0.0;
    for (int n = 0; n < n_steps; ++n) s = rot * s + h * std::polar(1.0, omega * n * h);
    return s;
  };
  const double e1 = std::abs(discrete(512) - exact);
  const double e2 = std::abs(discrete(1024) - exact);
  CHECK(e2 < e1);
  CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.25));
}

TEST_CASE("envelope chain on hand-worked sequences") {
  SUBCASE("rising magnitudes keep the drop envelope at zero") {
    NeuronState st;
    const double mags[] = {1.0, 2.0, 3.0};
    double total_d_peak = 0.0;
    for (double m : mags) {
      const EnvelopeDeltas d = envelope_update_mag(st, m, 1.0);
      CHECK(d.d_gap == 0.0);
      total_d_peak += d.d_peak;
    }
    CHECK(st.mag_peak == 3.0);
    CHECK(st.gap_peak == 0.0);
    CHECK(st.envelope() == 3.0);
    CHECK(total_d_peak == 3.0);
  }
  SUBCASE("a full collapse cancels the envelope") {
    NeuronState st;
    envelope_update_mag(st, 2.0, 1.0);
    const EnvelopeDeltas d = envelope_update_mag(st, 0.0, 1.0);
    CHECK(d.d_peak == 0.0);
    CHECK(d.d_gap == 2.0);
    CHECK(st.envelope() == 0.0);
  }
  SUBCASE("smoothing constant below one filters the magnitude first") {
    NeuronState st;
    Rng rng(2);
    double filt = 0.0, peak = 0.0, gap_pk = 0.0;
    for (int i = 0; i < 200; ++i) {
      const double m = std::abs(rng.normal());
      envelope_update_mag(st, m, 0.3);
      filt = 0.7 * filt + 0.3 * m;
      peak = std::max(peak, filt);
      gap_pk = std::max(gap_pk, peak - filt);
      CHECK(st.mag_filt == doctest::Approx(filt).epsilon(1e-12));
      CHECK(st.mag_peak == doctest::Approx(peak).epsilon(1e-12));
      CHECK(st.gap_peak == doctest::Approx(gap_pk).epsilon(1e-12));
    }
  }
}

TEST_CASE("gradient filter closed form and fixpoint") {
  const double alpha_g = 0.01, c = 0.8;
  NeuronState st;
  const int n = 300;
  for (int i = 0; i < n; ++i) gradient_update(st, c, alpha_g);
  CHECK(st.slope == doctest::Approx(c * (1.0 - std::pow(1.0 - alpha_g, n))).epsilon(1e-12));
  NeuronState fix;
  fix.slope = c;
  gradient_update(fix, c, alpha_g);
  CHECK(fix.slope == doctest::Approx(c).epsilon(1e-15));
}

TEST_CASE("grid magnitudes equal the brute-force range-angle transform") {
  const Scene s = small_scene(0.05, 77);
  const ChirpFrame f = synthesize(s);
  GridConfig cfg = GridConfig::for_params(s.params);
  ResonatorGrid grid(cfg);
  grid.run_chirp(view_chirp(f, 0), ChirpResetMode::reset, 1);
  const ChirpView chirp = view_chirp(f, 0);
  for (int j = 0; j < cfg.n_range_bins; j += 3) {
    for (int l = 0; l < cfg.n_angle_bins; ++l) {
      const double want = std::abs(oracle::range_angle_bin(chirp, j, l, cfg.n_angle_bins));
      const double got = magnitude(grid.neuron(j, l).resonator);
      CHECK(std::abs(got - want) <= 1e-9 * std::max(1.0, want));
    }
  }
}

TEST_CASE("grid chain matches a plainly written scalar trace across two chirps") {
  const Scene s = small_scene(0.05, 13);
  const ChirpFrame f = synthesize(s);
  GridConfig cfg = GridConfig::for_params(s.params);
  cfg.alpha_x = 0.6;
  cfg.alpha_g = 0.01;
  ResonatorGrid grid(cfg);
  grid.run_chirp(view_chirp(f, 0), ChirpResetMode::reset, 1);
  grid.run_chirp(view_chirp(f, 1), ChirpResetMode::continuous, 1);

  const WeightMatrix w(cfg.n_angle_bins, cfg.n_angle_bins);
  for (int j : {2, 13, 27}) {
    for (int l : {0, 5}) {
      const cplx rot = std::polar(1.0, 2.0 * kPi * j / cfg.n_samples);
      cplx res = 0.0;
      double filt = 0.0, peak = 0.0, gap_pk = 0.0, slope = 0.0;
      for (int c = 0; c < 2; ++c) {
        res = 0.0;  // per-chirp reset, gradient carries over
        filt = peak = gap_pk = 0.0;
        for (int n = 0; n < cfg.n_samples; ++n) {
          cplx y = 0.0;
          for (int m = 0; m < cfg.n_angle_bins; ++m)
            y += std::polar(1.0, -w.phase(l) * m) * f.at(c, n, m);
          res = rot * res + y;
          filt = (1.0 - cfg.alpha_x) * filt + cfg.alpha_x * std::abs(res);
          double d_peak = 0.0, d_gap = 0.0;
          if (filt > peak) {
            d_peak = filt - peak;
            peak = filt;
          }
          if (peak - filt > gap_pk) {
            d_gap = (peak - filt) - gap_pk;
            gap_pk = peak - filt;
          }
          slope = (1.0 - cfg.alpha_g) * slope + cfg.alpha_g * (d_peak - d_gap);
        }
      }
      const NeuronState& st = grid.neuron(j, l);
      CHECK(std::abs(st.resonator - res) <= 1e-10 * std::max(1.0, std::abs(res)));
      CHECK(st.mag_filt == doctest::Approx(filt).epsilon(1e-10));
      CHECK(st.mag_peak == doctest::Approx(peak).epsilon(1e-10));
      CHECK(st.gap_peak == doctest::Approx(gap_pk).epsilon(1e-10).scale(1.0));
      CHECK(st.slope == doctest::Approx(slope).epsilon(1e-10).scale(1e-6));
    }
  }
}

TEST_CASE("worker count does not change any neuron state") {
  const Scene s = small_scene(0.1, 31);
  const ChirpFrame f = synthesize(s);
  const GridConfig cfg = GridConfig::for_params(s.params);
  ResonatorGrid g1(cfg), g4(cfg);
  for (int c = 0; c < 2; ++c) {
    g1.run_chirp(view_chirp(f, c), c ? ChirpResetMode::continuous : ChirpResetMode::reset, 1);
    g4.run_chirp(view_chirp(f, c), c ? ChirpResetMode::continuous : ChirpResetMode::reset, 4);
  }
  for (int idx = 0; idx < cfg.n_neurons(); ++idx) {
    const NeuronState &a = g1.neurons()[idx], &b = g4.neurons()[idx];
    CHECK(a.resonator == b.resonator);
    CHECK(a.mag_filt == b.mag_filt);
    CHECK(a.mag_peak == b.mag_peak);
    CHECK(a.gap_peak == b.gap_peak);
    CHECK(a.slope == b.slope);
  }
}

TEST_CASE("envelopes are monotone and the readout never goes negative") {
  const Scene s = small_scene(0.2, 8);
  const ChirpFrame f = synthesize(s);
  GridConfig cfg = GridConfig::for_params(s.params);
  cfg.alpha_x = 0.6;
  ResonatorGrid grid(cfg);
  std::vector<double> last_peak(cfg.n_neurons(), 0.0), last_gap(cfg.n_neurons(), 0.0);
  bool monotone = true, nonneg = true;
  grid.process_chirp(view_chirp(f, 0), ChirpResetMode::reset, 2,
                     [&](int, int idx, int, int, int, const NeuronState& st,
                         const EnvelopeDeltas&) {
                       monotone &= st.mag_peak >= last_peak[idx];
                       monotone &= st.gap_peak >= last_gap[idx];
                       nonneg &= st.envelope() >= 0.0;
                       last_peak[idx] = st.mag_peak;
                       last_gap[idx] = st.gap_peak;
                     });
  CHECK(monotone);
  CHECK(nonneg);
}

TEST_CASE("chirp reset modes clear exactly what they should") {
  const Scene s = small_scene(0.05, 4);
  const ChirpFrame f = synthesize(s);
  GridConfig cfg = GridConfig::for_params(s.params);
  cfg.alpha_g = 0.01;
  ResonatorGrid grid(cfg);
  grid.run_chirp(view_chirp(f, 0), ChirpResetMode::reset, 1);
  const double slope_before = grid.neuron(14, 3).slope;
  REQUIRE(slope_before != 0.0);

  // Continuous: envelope restarts, gradient decays from its carried value.
  ChirpFrame zero(s.params.n_chirps, s.params.n_samples, s.params.n_vx);
  grid.run_chirp(view_chirp(zero, 0), ChirpResetMode::continuous, 1);
  const NeuronState& st = grid.neuron(14, 3);
  CHECK(st.mag_peak == 0.0);
  CHECK(st.resonator == cplx(0.0));
  CHECK(st.slope == doctest::Approx(slope_before *
                                    std::pow(1.0 - cfg.alpha_g, cfg.n_samples))
                        .epsilon(1e-12));

  // Reset: the gradient goes too.
  grid.run_chirp(view_chirp(zero, 0), ChirpResetMode::reset, 1);
  CHECK(grid.neuron(14, 3).slope == 0.0);
}

TEST_CASE("steering rows cover -pi to pi and the middle row points broadside") {
  const WeightMatrix w(32, 32);
  CHECK(w.phase(0) == doctest::Approx(-kPi));
  CHECK(w.phase(16) == doctest::Approx(0.0));
  CHECK(w.angle_rad(16) == doctest::Approx(0.0));
  for (int l = 0; l + 1 < 32; ++l) CHECK(w.phase(l) < w.phase(l + 1));
}

TEST_CASE("rotation table matches its definition") {
  const RotationTable r(32, 64);
  for (int j = 0; j < 32; j += 5) {
    CHECK(std::abs(r.rot(j) - std::polar(1.0, 2.0 * kPi * j / 64.0)) < 1e-15);
    CHECK(r.delta_omega(j) == doctest::Approx(2.0 * kPi * j / 64.0));
  }
}

TEST_CASE("grid configuration validation") {
  GridConfig bad = GridConfig::for_params(small_params());
  bad.alpha_x = 0.0;
  CHECK_THROWS_AS(ResonatorGrid{bad}, std::invalid_argument);
  bad = GridConfig::for_params(small_params());
  bad.alpha_g = -0.1;
  CHECK_THROWS_AS(ResonatorGrid{bad}, std::invalid_argument);
  bad = GridConfig::for_params(small_params());
  bad.n_range_bins = 0;
  CHECK_THROWS_AS(ResonatorGrid{bad}, std::invalid_argument);

  // Frame shape must match the grid.
  ResonatorGrid grid(GridConfig::for_params(small_params()));
  ChirpFrame wrong(1, 64, 4);
  CHECK_THROWS_AS(grid.run_chirp(view_chirp(wrong, 0), ChirpResetMode::reset, 1),
                  std::invalid_argument);
}
