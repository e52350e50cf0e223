#include "nrr/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nrr/detection.hpp"
#include "nrr/signal_sim.hpp"
#include "nrr/parallel.hpp"

namespace nrr {

std::vector<TrainScene> make_training_set(const std::vector<Scene>& scenes,
                                          const GridConfig& grid) {
  std::vector<TrainScene> out;
  out.reserve(scenes.size());
  for (const auto& s : scenes) {
    TrainScene t;
    t.scene = s;
    t.frame = synthesize(s);
    t.labels = label_bins(s, grid);
    out.push_back(std::move(t));
  }
  return out;
}

namespace {

// Five logarithmic steps (x1/4 .. x4) around a center value.
std::vector<double> log_bracket(double center) {
  return {center / 4.0, center / 2.0, center, center * 2.0, center * 4.0};
}

struct ComboAxes {
  std::vector<std::string> names;           // sorted
  std::vector<std::vector<double>> values;  // aligned with names

  size_t total() const {
    size_t t = 1;
    for (const auto& v : values) t *= v.size();
    return t;
  }
  // Flat enumeration index -> per-axis value indices (first axis outermost).
  std::vector<size_t> decode(size_t flat) const {
    std::vector<size_t> idx(values.size(), 0);
    for (size_t a = values.size(); a-- > 0;) {
      idx[a] = flat % values[a].size();
      flat /= values[a].size();
    }
    return idx;
  }
  std::vector<double> values_at(const std::vector<size_t>& idx) const {
    std::vector<double> v(idx.size());
    for (size_t a = 0; a < idx.size(); ++a) v[a] = values[a][idx[a]];
    return v;
  }
  size_t axis(const std::string& name) const {
    for (size_t a = 0; a < names.size(); ++a)
      if (names[a] == name) return a;
    throw std::invalid_argument("sweep: missing grid axis " + name);
  }
};

// Expected axis names per (stage, model); the fallback pins an axis to its
// currently configured value when the spec does not grid it.
std::vector<std::string> axis_names(SweepStage stage, Model model) {
  if (stage == SweepStage::gradient_cfar) {
    if (model == Model::ft) return {"cfar_alpha", "cfar_offset"};
    return {"alpha_g", "alpha_x", "cfar_alpha", "cfar_offset"};
  }
  if (model == Model::adaptive) return {"gamma"};
  return {"tau", "u_rest", "u_th"};
}

double fixed_axis_value(const std::string& name, const SweepSpec& spec) {
  const LifParams& lif =
      spec.model == Model::time_codec ? spec.fixed.time : spec.fixed.rate;
  if (name == "alpha_g") return spec.base_grid.alpha_g;
  if (name == "alpha_x") return spec.base_grid.alpha_x;
  if (name == "cfar_alpha") return spec.fixed.cfar.alpha;
  if (name == "cfar_offset") return spec.fixed.cfar.offset;
  if (name == "gamma") return spec.fixed.adaptive.gamma;
  if (name == "u_th") return lif.threshold;
  if (name == "u_rest") return lif.rest_input;
  if (name == "tau") return lif.tau;
  throw std::invalid_argument("sweep: unknown parameter " + name);
}

ComboAxes build_axes(const SweepSpec& spec) {
  const std::vector<std::string> expected = axis_names(spec.stage, spec.model);
  for (const auto& [name, vals] : spec.grids) {
    if (std::find(expected.begin(), expected.end(), name) == expected.end())
      throw std::invalid_argument("sweep: parameter '" + name +
                                  "' is not part of this stage's grid");
    if (vals.empty())
      throw std::invalid_argument("sweep: empty value list for " + name);
  }
  ComboAxes axes;
  axes.names = expected;  // already sorted alphabetically
  for (const auto& name : expected) {
    auto it = spec.grids.find(name);
    if (it != spec.grids.end())
      axes.values.push_back(it->second);
    else
      axes.values.push_back({fixed_axis_value(name, spec)});
  }
  return axes;
}

void apply_axis_value(const std::string& name, double v, GridConfig& grid,
                      ModelParams& params, Model model) {
  LifParams& lif = model == Model::time_codec ? params.time : params.rate;
  if (name == "alpha_g") grid.alpha_g = v;
  else if (name == "alpha_x") grid.alpha_x = v;
  else if (name == "cfar_alpha") params.cfar.alpha = v;
  else if (name == "cfar_offset") params.cfar.offset = v;
  else if (name == "gamma") params.adaptive.gamma = v;
  else if (name == "u_th") lif.threshold = v;
  else if (name == "u_rest") lif.rest_input = v;
  else if (name == "tau") lif.tau = v;
  else throw std::invalid_argument("sweep: unknown parameter " + name);
}

struct Accum {
  double f = 0.0, p = 0.0, r = 0.0;
};

void score_into(const RangeAngleMap& map, const CfarConfig& cfar, const BinLabel& labels,
                int radius, Accum& acc) {
  const MatchCounts c = score(ca_cfar(map, cfar), labels, radius);
  acc.f += f_score(c);
  acc.p += precision(c);
  acc.r += recall(c);
}

int sweep_chirps(const SweepSpec& spec, const ChirpFrame& frame) {
  if (spec.mode == ChirpMode::single) return 1;
  int n = frame.n_chirps();
  if (spec.chirp_limit > 0 && spec.chirp_limit < n) n = spec.chirp_limit;
  return n;
}

SweepResult finalize(const SweepSpec& spec, const ComboAxes& axes,
                     const std::vector<Accum>& acc, size_t n_scenes) {
  SweepResult res;
  res.param_names = axes.names;
  const size_t total = axes.total();
  res.rows.reserve(total);
  // Divide, don't multiply by a reciprocal: callers cross-check these means
  // against an independent recompute and expect bit-for-bit agreement.
  const double n = static_cast<double>(n_scenes);
  for (size_t c = 0; c < total; ++c) {
    SweepRow row;
    row.values = axes.values_at(axes.decode(c));
    row.f_score = acc[c].f / n;
    row.precision = acc[c].p / n;
    row.recall = acc[c].r / n;
    if (res.best_index < 0 || row.f_score > res.best_f) {
      res.best_index = static_cast<int>(c);
      res.best_f = row.f_score;
    }
    res.rows.push_back(std::move(row));
  }
  res.best_grid = spec.base_grid;
  res.best_params = spec.fixed;
  const auto& best_row = res.rows[static_cast<size_t>(res.best_index)];
  for (size_t a = 0; a < axes.names.size(); ++a)
    apply_axis_value(axes.names[a], best_row.values[a], res.best_grid, res.best_params,
                     spec.model);
  return res;
}

// ---- stage 1, Fourier baseline: CFAR grid only -------------------------------

SweepResult sweep_stage1_ft(const SweepSpec& spec, const std::vector<TrainScene>& train,
                            int threads, const ComboAxes& axes) {
  const auto& alphas = axes.values[axes.axis("cfar_alpha")];
  const auto& offsets = axes.values[axes.axis("cfar_offset")];
  std::vector<Accum> acc(axes.total());
  for (const auto& ts : train) {
    const RangeAngleMap map =
        process_frame_ft(ts.frame, spec.mode, spec.base_grid, threads, spec.chirp_limit).map;
    size_t combo = 0;
    for (double a : alphas) {
      for (double o : offsets) {
        CfarConfig cfar = spec.fixed.cfar;
        cfar.alpha = a;
        cfar.offset = o;
        score_into(map, cfar, ts.labels, spec.match_radius, acc[combo++]);
      }
    }
  }
  return finalize(spec, axes, acc, train.size());
}

// ---- stage 1, gradient model --------------------------------------------------
// Records raw resonator magnitudes once per chirp, then replays the envelope
// chain per alpha_x (producing the envelope-delta stream) and the slope
// recursion per alpha_g. The replay uses the same inline update functions as
// the live pipeline, so every slope value matches the direct path bit for bit.

SweepResult sweep_stage1_gradient(const SweepSpec& spec,
                                  const std::vector<TrainScene>& train, int threads,
                                  const ComboAxes& axes) {
  const auto& ag_vals = axes.values[axes.axis("alpha_g")];
  const auto& ax_vals = axes.values[axes.axis("alpha_x")];
  const auto& ca_vals = axes.values[axes.axis("cfar_alpha")];
  const auto& co_vals = axes.values[axes.axis("cfar_offset")];
  const size_t n_filter = ag_vals.size() * ax_vals.size();
  const size_t n_cfar = ca_vals.size() * co_vals.size();

  ResonatorGrid rg(spec.base_grid);
  const int n_neurons = spec.base_grid.n_neurons();
  const int n_samples = spec.base_grid.n_samples;
  std::vector<double> mag_stream(static_cast<size_t>(n_neurons) * n_samples);
  std::vector<double> denv_stream(mag_stream.size());
  // slope banks indexed [ig * n_ax + ix][neuron]
  std::vector<std::vector<double>> slopes(n_filter, std::vector<double>(n_neurons, 0.0));

  std::vector<Accum> acc(axes.total());
  for (const auto& ts : train) {
    for (auto& bank : slopes) std::fill(bank.begin(), bank.end(), 0.0);
    const int chirps = sweep_chirps(spec, ts.frame);
    for (int c = 0; c < chirps; ++c) {
      rg.process_chirp(view_chirp(ts.frame, c), ChirpResetMode::reset, threads,
                       [&](int, int idx, int, int, int n, const NeuronState&,
                           const EnvelopeDeltas& d) {
                         mag_stream[static_cast<size_t>(idx) * n_samples + n] = d.mag_raw;
                       });
      for (size_t ix = 0; ix < ax_vals.size(); ++ix) {
        const double ax = ax_vals[ix];
        parallel_for_chunks(n_neurons, threads, [&](int, int begin, int end) {
          for (int idx = begin; idx < end; ++idx) {
            NeuronState st;  // envelope restarts every chirp
            const size_t base = static_cast<size_t>(idx) * n_samples;
            for (int n = 0; n < n_samples; ++n) {
              const EnvelopeDeltas d = envelope_update_mag(st, mag_stream[base + n], ax);
              denv_stream[base + n] = d.d_envelope();
            }
          }
        });
        for (size_t ig = 0; ig < ag_vals.size(); ++ig) {
          const double ag = ag_vals[ig];
          std::vector<double>& bank = slopes[ig * ax_vals.size() + ix];
          parallel_for_chunks(n_neurons, threads, [&](int, int begin, int end) {
            for (int idx = begin; idx < end; ++idx) {
              NeuronState st;
              st.slope = bank[idx];
              const size_t base = static_cast<size_t>(idx) * n_samples;
              for (int n = 0; n < n_samples; ++n)
                gradient_update(st, denv_stream[base + n], ag);
              bank[idx] = st.slope;
            }
          });
        }
      }
    }

    // Score every filter combo under every CFAR combo.
    RangeAngleMap map(spec.base_grid.n_range_bins, spec.base_grid.n_angle_bins);
    map.source = "gradient";
    for (size_t ig = 0; ig < ag_vals.size(); ++ig) {
      for (size_t ix = 0; ix < ax_vals.size(); ++ix) {
        const std::vector<double>& bank = slopes[ig * ax_vals.size() + ix];
        for (int idx = 0; idx < n_neurons; ++idx)
          map.values[idx] = bank[idx] > 0.0 ? bank[idx] : 0.0;
        size_t cfar_combo = 0;
        for (double a : ca_vals) {
          for (double o : co_vals) {
            CfarConfig cfar = spec.fixed.cfar;
            cfar.alpha = a;
            cfar.offset = o;
            const size_t combo = (ig * ax_vals.size() + ix) * n_cfar + cfar_combo++;
            score_into(map, cfar, ts.labels, spec.match_radius, acc[combo]);
          }
        }
      }
    }
  }
  return finalize(spec, axes, acc, train.size());
}

// ---- stage 2: codec grids under fixed gradient + CFAR -------------------------
// Records the live slope (or envelope-extrema) streams per chirp, then
// advances one codec state bank per combination over the recorded stream.
// Conservative no-spike bounds skip neurons a combination cannot fire for;
// skipped neurons keep their freshly reset state, which matches the live
// path's readout exactly.

struct LifBound {
  // Largest membrane value reachable over one chirp given the peak drive.
  static bool can_skip(double max_drive, const LifParams& p, int n_samples) {
    if (!p.leak || p.tau < 1.0) return false;
    const double top = max_drive + p.rest_input;
    if (top <= 0.0) return true;
    const double factor = 1.0 - std::pow(1.0 - 1.0 / p.tau, n_samples);
    return top * factor < p.threshold;
  }
};

SweepResult sweep_codec(const SweepSpec& spec, const std::vector<TrainScene>& train,
                        int threads, const ComboAxes& axes) {
  const bool is_adaptive = spec.model == Model::adaptive;
  const bool is_time = spec.model == Model::time_codec;
  const size_t total = axes.total();

  // Pre-build the parameter set of every combination.
  std::vector<AdaptiveParams> adaptive_params;
  std::vector<LifParams> lif_params;
  for (size_t c = 0; c < total; ++c) {
    const auto vals = axes.values_at(axes.decode(c));
    GridConfig g = spec.base_grid;
    ModelParams mp = spec.fixed;
    for (size_t a = 0; a < axes.names.size(); ++a)
      apply_axis_value(axes.names[a], vals[a], g, mp, spec.model);
    if (is_adaptive) {
      mp.adaptive.validate();
      adaptive_params.push_back(mp.adaptive);
    } else {
      const LifParams& lp = is_time ? mp.time : mp.rate;
      lp.validate();
      lif_params.push_back(lp);
    }
  }

  ResonatorGrid rg(spec.base_grid);
  const int n_neurons = spec.base_grid.n_neurons();
  const int n_samples = spec.base_grid.n_samples;

  std::vector<double> slope_stream, peak_stream, gap_stream;
  if (is_adaptive) {
    peak_stream.resize(static_cast<size_t>(n_neurons) * n_samples);
    gap_stream.resize(peak_stream.size());
  } else {
    slope_stream.resize(static_cast<size_t>(n_neurons) * n_samples);
  }
  std::vector<double> max_drive(n_neurons);   // per-chirp peak slope
  std::vector<double> final_peak(n_neurons);  // per-chirp final mag_peak

  std::vector<std::vector<AdaptiveState>> adaptive_banks;
  std::vector<std::vector<LifState>> lif_banks;
  if (is_adaptive)
    adaptive_banks.assign(total, std::vector<AdaptiveState>(n_neurons));
  else
    lif_banks.assign(total, std::vector<LifState>(n_neurons));

  std::vector<Accum> acc(total);
  for (const auto& ts : train) {
    const int chirps = sweep_chirps(spec, ts.frame);
    for (int c = 0; c < chirps; ++c) {
      // Chirp 0 resets the gradient (fresh grid per scene), later chirps obey
      // the protocol, exactly like the live pipeline.
      const ChirpResetMode reset = (c == 0 || spec.mode != ChirpMode::continuous)
                                       ? ChirpResetMode::reset
                                       : ChirpResetMode::continuous;
      if (is_adaptive) {
        rg.process_chirp(view_chirp(ts.frame, c), reset, threads,
                         [&](int, int idx, int, int, int n, const NeuronState& st,
                             const EnvelopeDeltas&) {
                           const size_t at = static_cast<size_t>(idx) * n_samples + n;
                           peak_stream[at] = st.mag_peak;
                           gap_stream[at] = st.gap_peak;
                           if (n == n_samples - 1) final_peak[idx] = st.mag_peak;
                         });
      } else {
        rg.process_chirp(view_chirp(ts.frame, c), reset, threads,
                         [&](int, int idx, int, int, int n, const NeuronState& st,
                             const EnvelopeDeltas&) {
                           const size_t at = static_cast<size_t>(idx) * n_samples + n;
                           slope_stream[at] = st.slope;
                           if (n == 0 || st.slope > max_drive[idx]) max_drive[idx] = st.slope;
                         });
      }

      for (size_t combo = 0; combo < total; ++combo) {
        if (is_adaptive) {
          const AdaptiveParams p = adaptive_params[combo];
          std::vector<AdaptiveState>& bank = adaptive_banks[combo];
          parallel_for_chunks(n_neurons, threads, [&](int, int begin, int end) {
            for (int idx = begin; idx < end; ++idx) {
              bank[idx].begin_chirp(p);
              if (final_peak[idx] <= p.gamma) continue;  // no rung ever crossed
              const size_t base = static_cast<size_t>(idx) * n_samples;
              for (int n = 0; n < n_samples; ++n)
                adaptive_step(bank[idx], peak_stream[base + n], gap_stream[base + n], p);
            }
          });
        } else {
          const LifParams p = lif_params[combo];
          std::vector<LifState>& bank = lif_banks[combo];
          parallel_for_chunks(n_neurons, threads, [&](int, int begin, int end) {
            for (int idx = begin; idx < end; ++idx) {
              bank[idx].begin_chirp();
              if (LifBound::can_skip(max_drive[idx], p, n_samples)) continue;
              const size_t base = static_cast<size_t>(idx) * n_samples;
              if (is_time) {
                for (int n = 0; n < n_samples; ++n) {
                  if (time_lif_step(bank[idx], slope_stream[base + n], n, p)) break;
                }
              } else {
                for (int n = 0; n < n_samples; ++n)
                  rate_lif_step(bank[idx], slope_stream[base + n], p);
              }
            }
          });
        }
      }
    }

    // Readout after the final chirp, fixed CFAR, score.
    RangeAngleMap map(spec.base_grid.n_range_bins, spec.base_grid.n_angle_bins);
    map.source = model_name(spec.model);
    for (size_t combo = 0; combo < total; ++combo) {
      if (is_adaptive) {
        const std::vector<AdaptiveState>& bank = adaptive_banks[combo];
        for (int idx = 0; idx < n_neurons; ++idx) {
          const double v = decode_adaptive(bank[idx].pos_count, bank[idx].neg_count);
          map.values[idx] = v > 0.0 ? v : 0.0;
        }
      } else if (is_time) {
        const std::vector<LifState>& bank = lif_banks[combo];
        for (int idx = 0; idx < n_neurons; ++idx)
          map.values[idx] = decode_time(bank[idx].spike_sample, n_samples);
      } else {
        const std::vector<LifState>& bank = lif_banks[combo];
        for (int idx = 0; idx < n_neurons; ++idx)
          map.values[idx] = decode_rate(bank[idx].spike_count);
      }
      score_into(map, spec.fixed.cfar, ts.labels, spec.match_radius, acc[combo]);
    }
  }
  return finalize(spec, axes, acc, train.size());
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec, const std::vector<TrainScene>& train,
                      int threads) {
  if (train.empty()) throw std::invalid_argument("sweep: empty training set");
  spec.base_grid.validate();
  spec.fixed.validate();
  const ComboAxes axes = build_axes(spec);
  if (spec.stage == SweepStage::gradient_cfar) {
    if (spec.model == Model::ft) return sweep_stage1_ft(spec, train, threads, axes);
    if (spec.model != Model::gradient)
      throw std::invalid_argument("sweep: stage 1 runs on the gradient or ft model");
    return sweep_stage1_gradient(spec, train, threads, axes);
  }
  if (spec.model == Model::ft || spec.model == Model::gradient)
    throw std::invalid_argument("sweep: codec stage needs a spiking codec model");
  return sweep_codec(spec, train, threads, axes);
}

std::map<std::string, std::vector<double>> default_stage1_grids(Model model) {
  std::map<std::string, std::vector<double>> g;
  g["cfar_alpha"] = {1.5, 2.0, 3.0, 4.5, 7.0};
  g["cfar_offset"] = {0.0, 1e-3, 1e-2, 1e-1, 1.0};
  if (model != Model::ft) {
    g["alpha_g"] = log_bracket(0.001);
    g["alpha_x"] = {0.15, 0.3, 0.6, 0.8, 1.0};
  }
  return g;
}

std::map<std::string, std::vector<double>> default_codec_grids(Model model,
                                                               ChirpMode mode) {
  std::map<std::string, std::vector<double>> g;
  const bool multi = mode != ChirpMode::single;
  switch (model) {
    case Model::adaptive:
      g["gamma"] = log_bracket(0.1);
      break;
    case Model::rate:
      g["u_th"] = log_bracket(multi ? 1.5 : 0.35);
      g["u_rest"] = {0.0};
      g["tau"] = log_bracket(100.0);
      break;
    case Model::time_codec:
      g["u_th"] = log_bracket(multi ? 232.0 : 231.0);
      g["u_rest"] = log_bracket(250.0);
      g["tau"] = log_bracket(200.0);
      break;
    default:
      throw std::invalid_argument("default_codec_grids: needs a spiking codec model");
  }
  return g;
}

}  // namespace nrr
