#include "nrr/pipeline.hpp"

#include <algorithm>
#include <stdexcept>

namespace nrr {

const std::vector<std::string>& model_names() {
  static const std::vector<std::string> names = {"ft", "gradient", "adaptive", "rate", "time"};
  return names;
}

std::string model_name(Model m) { return model_names()[static_cast<size_t>(m)]; }

Model parse_model(const std::string& name) {
  const auto& names = model_names();
  for (size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<Model>(i);
  std::string msg = "unknown model '" + name + "', valid models:";
  for (const auto& n : names) msg += " " + n;
  throw std::invalid_argument(msg);
}

const std::vector<std::string>& chirp_mode_names() {
  static const std::vector<std::string> names = {"single", "continuous", "average"};
  return names;
}

std::string chirp_mode_name(ChirpMode m) {
  return chirp_mode_names()[static_cast<size_t>(m)];
}

ChirpMode parse_chirp_mode(const std::string& name) {
  const auto& names = chirp_mode_names();
  for (size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<ChirpMode>(i);
  std::string msg = "unknown chirp mode '" + name + "', valid modes:";
  for (const auto& n : names) msg += " " + n;
  throw std::invalid_argument(msg);
}

ModelParams ModelParams::paper_single() {
  ModelParams p;
  p.adaptive.gamma = 0.1;
  p.rate = LifParams{0.35, 0.0, 100.0, true};
  p.time = LifParams{231.0, 250.0, 200.0, true};
  p.cfar = CfarConfig{};
  return p;
}

ModelParams ModelParams::paper_multi() {
  ModelParams p = paper_single();
  p.rate.threshold = 1.5;
  p.time.threshold = 232.0;
  return p;
}

void ModelParams::validate() const {
  adaptive.validate();
  rate.validate();
  time.validate();
  cfar.validate();
}

namespace {

// The three codec state banks plus per-worker event buffers for one pass.
struct CodecBank {
  std::vector<AdaptiveState> adaptive;
  std::vector<LifState> rate;
  std::vector<LifState> time;
  std::vector<std::vector<SpikeEvent>> ev_adaptive;  // [worker]
  std::vector<std::vector<SpikeEvent>> ev_rate;
  std::vector<std::vector<SpikeEvent>> ev_time;

  CodecBank(int n_neurons, int workers)
      : adaptive(n_neurons), rate(n_neurons), time(n_neurons),
        ev_adaptive(workers), ev_rate(workers), ev_time(workers) {}

  void begin_chirp(const ModelParams& p) {
    for (auto& s : adaptive) s.begin_chirp(p.adaptive);
    for (auto& s : rate) s.begin_chirp();
    for (auto& s : time) s.begin_chirp();
  }
};

bool spike_order(const SpikeEvent& a, const SpikeEvent& b) {
  if (a.chirp != b.chirp) return a.chirp < b.chirp;
  if (a.sample != b.sample) return a.sample < b.sample;
  if (a.range_bin != b.range_bin) return a.range_bin < b.range_bin;
  return a.angle_bin < b.angle_bin;
}

// Concatenate per-worker buffers and order by (chirp, sample, bin); a stable
// sort keeps each neuron-sample group's emission order, so the merged stream
// is independent of the worker count.
void merge_events(std::vector<std::vector<SpikeEvent>>& per_worker,
                  std::vector<SpikeEvent>& out) {
  size_t chirp_begin = out.size();
  for (auto& buf : per_worker) {
    out.insert(out.end(), buf.begin(), buf.end());
    buf.clear();
  }
  std::stable_sort(out.begin() + chirp_begin, out.end(), spike_order);
}

uint64_t count_in_chirp(const std::vector<SpikeEvent>& ev, int chirp) {
  uint64_t n = 0;
  for (const auto& e : ev) n += e.chirp == chirp;
  return n;
}

int clamp_threads(int threads) { return threads < 1 ? 1 : threads; }

int resolve_chirps(const ChirpFrame& frame, int chirp_limit) {
  if (chirp_limit > frame.n_chirps())
    throw std::invalid_argument("chirp limit exceeds the chirps in the frame");
  return chirp_limit > 0 ? chirp_limit : frame.n_chirps();
}

}  // namespace

GridOutputs process_frame_grid(const ChirpFrame& frame, ChirpMode mode,
                               const GridConfig& grid, const ModelParams& params,
                               int threads, int chirp_limit) {
  grid.validate();
  params.validate();
  threads = clamp_threads(threads);
  const int n_chirps = mode == ChirpMode::single ? 1 : resolve_chirps(frame, chirp_limit);
  const int n_neurons = grid.n_neurons();

  ResonatorGrid rg(grid);
  CodecBank bank(n_neurons, threads);
  GridOutputs out;

  // Per-chirp readout accumulators for average mode.
  std::vector<double> acc_gradient, acc_adaptive, acc_rate, acc_time;
  if (mode == ChirpMode::average) {
    acc_gradient.assign(n_neurons, 0.0);
    acc_adaptive.assign(n_neurons, 0.0);
    acc_rate.assign(n_neurons, 0.0);
    acc_time.assign(n_neurons, 0.0);
  }

  const LifParams rate_params = params.rate;
  const LifParams time_params = params.time;
  const AdaptiveParams adaptive_params = params.adaptive;

  for (int c = 0; c < n_chirps; ++c) {
    bank.begin_chirp(params);
    const ChirpResetMode reset =
        mode == ChirpMode::continuous ? ChirpResetMode::continuous : ChirpResetMode::reset;
    const uint16_t chirp_tag = static_cast<uint16_t>(c);
    rg.process_chirp(
        view_chirp(frame, c), reset, threads,
        [&](int worker, int idx, int j, int l, int n, const NeuronState& st,
            const EnvelopeDeltas&) {
          const uint16_t js = static_cast<uint16_t>(j);
          const uint16_t ls = static_cast<uint16_t>(l);
          const uint16_t ns = static_cast<uint16_t>(n);
          const AdaptiveStepResult ar =
              adaptive_step(bank.adaptive[idx], st.mag_peak, st.gap_peak, adaptive_params);
          for (int k = 0; k < ar.pos; ++k)
            bank.ev_adaptive[worker].push_back({chirp_tag, ns, js, ls, +1});
          for (int k = 0; k < ar.neg; ++k)
            bank.ev_adaptive[worker].push_back({chirp_tag, ns, js, ls, -1});
          if (rate_lif_step(bank.rate[idx], st.slope, rate_params))
            bank.ev_rate[worker].push_back({chirp_tag, ns, js, ls, +1});
          if (time_lif_step(bank.time[idx], st.slope, n, time_params))
            bank.ev_time[worker].push_back({chirp_tag, ns, js, ls, +1});
        });
    merge_events(bank.ev_adaptive, out.adaptive.spikes);
    merge_events(bank.ev_rate, out.rate.spikes);
    merge_events(bank.ev_time, out.time.spikes);

    if (mode == ChirpMode::average) {
      const auto neurons = rg.neurons();
      for (int i = 0; i < n_neurons; ++i) {
        acc_gradient[i] += std::max(neurons[i].slope, 0.0);
        acc_adaptive[i] += std::max(
            decode_adaptive(bank.adaptive[i].pos_count, bank.adaptive[i].neg_count), 0.0);
        acc_rate[i] += decode_rate(bank.rate[i].spike_count);
        acc_time[i] += decode_time(bank.time[i].spike_sample, grid.n_samples);
      }
    }
  }

  auto make_map = [&](const std::string& tag) {
    RangeAngleMap m(grid.n_range_bins, grid.n_angle_bins);
    m.source = tag;
    m.chirp_first = 0;
    m.chirp_last = n_chirps - 1;
    return m;
  };

  out.gradient.map = make_map("gradient");
  out.adaptive.map = make_map("adaptive");
  out.rate.map = make_map("rate");
  out.time.map = make_map("time");

  if (mode == ChirpMode::average) {
    const double inv = 1.0 / n_chirps;
    for (int i = 0; i < n_neurons; ++i) {
      out.gradient.map.values[i] = acc_gradient[i] * inv;
      out.adaptive.map.values[i] = acc_adaptive[i] * inv;
      out.rate.map.values[i] = acc_rate[i] * inv;
      out.time.map.values[i] = acc_time[i] * inv;
    }
  } else {
    const auto neurons = rg.neurons();
    for (int i = 0; i < n_neurons; ++i) {
      out.gradient.map.values[i] = std::max(neurons[i].slope, 0.0);
      out.adaptive.map.values[i] = std::max(
          decode_adaptive(bank.adaptive[i].pos_count, bank.adaptive[i].neg_count), 0.0);
      out.rate.map.values[i] = decode_rate(bank.rate[i].spike_count);
      out.time.map.values[i] = decode_time(bank.time[i].spike_sample, grid.n_samples);
    }
  }

  // Events that produced the readout: chirp 0 (single), the final chirp
  // (continuous) or every processed chirp (average).
  const int readout_chirp = mode == ChirpMode::continuous ? n_chirps - 1 : 0;
  for (FrameOutput* fo : {&out.gradient, &out.adaptive, &out.rate, &out.time})
    fo->chirps_used = n_chirps;
  out.gradient.counted_events = 0;
  if (mode == ChirpMode::average) {
    out.adaptive.counted_events = out.adaptive.spikes.size();
    out.rate.counted_events = out.rate.spikes.size();
    out.time.counted_events = out.time.spikes.size();
  } else {
    out.adaptive.counted_events = count_in_chirp(out.adaptive.spikes, readout_chirp);
    out.rate.counted_events = count_in_chirp(out.rate.spikes, readout_chirp);
    out.time.counted_events = count_in_chirp(out.time.spikes, readout_chirp);
  }
  return out;
}

FrameOutput process_frame_ft(const ChirpFrame& frame, ChirpMode mode,
                             const GridConfig& grid, int threads, int chirp_limit) {
  grid.validate();
  (void)threads;  // the transform is cheap; kept for interface symmetry
  const int n_chirps = mode == ChirpMode::single ? 1 : resolve_chirps(frame, chirp_limit);
  FrameOutput out;
  if (mode == ChirpMode::average && n_chirps > 1) {
    std::vector<ChirpView> views;
    for (int c = 0; c < n_chirps; ++c) views.push_back(view_chirp(frame, c));
    out.map = ft_map_avg(views, grid);
    out.map.chirp_first = 0;
    out.map.chirp_last = n_chirps - 1;
  } else {
    // single and continuous read one chirp: the first or the last in the span.
    const int c = mode == ChirpMode::single ? 0 : n_chirps - 1;
    out.map = ft_map(frame, c, grid);
  }
  out.map.source = "ft";
  out.chirps_used = n_chirps;
  out.counted_events = 0;
  return out;
}

FrameOutput process_frame(const ChirpFrame& frame, Model model, ChirpMode mode,
                          const GridConfig& grid, const ModelParams& params,
                          int threads, int chirp_limit) {
  if (model == Model::ft) return process_frame_ft(frame, mode, grid, threads, chirp_limit);
  GridOutputs all = process_frame_grid(frame, mode, grid, params, threads, chirp_limit);
  switch (model) {
    case Model::gradient: return std::move(all.gradient);
    case Model::adaptive: return std::move(all.adaptive);
    case Model::rate: return std::move(all.rate);
    case Model::time_codec: return std::move(all.time);
    default: throw std::invalid_argument("process_frame: unhandled model");
  }
}

std::vector<RangeAngleMap> checkpoint_maps(const ChirpFrame& frame, Model model,
                                           const GridConfig& grid,
                                           const ModelParams& params, int stride,
                                           int threads) {
  grid.validate();
  params.validate();
  if (model == Model::ft)
    throw std::invalid_argument("checkpoint_maps: not defined for the ft model");
  if (stride < 1 || grid.n_samples % stride != 0)
    throw std::invalid_argument("checkpoint_maps: stride must divide n_samples");
  threads = clamp_threads(threads);

  const int n_checkpoints = grid.n_samples / stride;
  const int n_neurons = grid.n_neurons();
  std::vector<RangeAngleMap> maps(static_cast<size_t>(n_checkpoints));
  for (auto& m : maps) {
    m = RangeAngleMap(grid.n_range_bins, grid.n_angle_bins);
    m.source = model_name(model);
  }

  ResonatorGrid rg(grid);
  CodecBank bank(n_neurons, threads);
  bank.begin_chirp(params);
  const LifParams rate_params = params.rate;
  const LifParams time_params = params.time;
  const AdaptiveParams adaptive_params = params.adaptive;

  rg.process_chirp(
      view_chirp(frame, 0), ChirpResetMode::reset, threads,
      [&](int, int idx, int, int, int n, const NeuronState& st, const EnvelopeDeltas&) {
        switch (model) {
          case Model::adaptive:
            adaptive_step(bank.adaptive[idx], st.mag_peak, st.gap_peak, adaptive_params);
            break;
          case Model::rate:
            rate_lif_step(bank.rate[idx], st.slope, rate_params);
            break;
          case Model::time_codec:
            time_lif_step(bank.time[idx], st.slope, n, time_params);
            break;
          default:
            break;
        }
        if ((n + 1) % stride == 0) {
          const int ck = (n + 1) / stride - 1;
          double v = 0.0;
          switch (model) {
            case Model::gradient: v = std::max(st.slope, 0.0); break;
            case Model::adaptive:
              v = std::max(
                  decode_adaptive(bank.adaptive[idx].pos_count, bank.adaptive[idx].neg_count),
                  0.0);
              break;
            case Model::rate: v = decode_rate(bank.rate[idx].spike_count); break;
            case Model::time_codec:
              v = decode_time(bank.time[idx].spike_sample, grid.n_samples);
              break;
            default: break;
          }
          maps[ck].values[idx] = v;
        }
      });
  return maps;
}

}  // namespace nrr
