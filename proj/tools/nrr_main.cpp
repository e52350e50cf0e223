// nrr: simulate labeled FMCW scenes, process them with the spiking resonator
// grid or the Fourier baseline, evaluate detections, tune parameters.
#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "nrr/eval.hpp"
#include "nrr/io.hpp"
#include "nrr/pipeline.hpp"
#include "nrr/signal_sim.hpp"
#include "nrr/sweep.hpp"

namespace fs = std::filesystem;
using namespace nrr;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;

void ensure_writable(const fs::path& p, bool force) {
  if (fs::exists(p) && !force)
    throw data_error(p.string() + " exists; pass --force to overwrite");
}

std::string index_name(const char* prefix, int i, const char* ext) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s_%04d%s", prefix, i, ext);
  return buf;
}

std::vector<fs::path> sorted_files(const fs::path& dir, const std::string& prefix,
                                   const std::string& suffix) {
  if (!fs::is_directory(dir)) throw data_error(dir.string() + " is not a directory");
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    const std::string name = e.path().filename().string();
    if (name.size() < prefix.size() + suffix.size()) continue;
    if (name.rfind(prefix, 0) != 0) continue;
    if (name.compare(name.size() - suffix.size(), suffix.size(), suffix) != 0) continue;
    out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  if (out.empty())
    throw data_error("no " + prefix + "*" + suffix + " files found in " + dir.string());
  return out;
}

std::vector<fs::path> scene_files_in(const std::string& dir) {
  return sorted_files(dir, "scene_", ".json");
}

RadarParams profile_params(const std::string& profile) {
  if (profile == "desk") return RadarParams::desk();
  if (profile == "paper") return RadarParams::paper();
  throw std::invalid_argument("unknown profile '" + profile + "', valid profiles: desk paper");
}

struct ProcessSetup {
  GridConfig grid;
  ModelParams params;
};

ProcessSetup setup_for(const ChirpFrame& frame, const std::string& params_path,
                       const std::string& profile, ChirpMode mode) {
  ProcessSetup s;
  RadarParams rp = profile_params(profile);
  rp.n_samples = frame.n_samples();
  rp.n_vx = frame.n_vx();
  rp.n_chirps = frame.n_chirps();
  s.grid = GridConfig::for_params(rp);
  s.params = (profile == "paper" && mode != ChirpMode::single)
                 ? ModelParams::paper_multi()
                 : ModelParams::paper_single();
  if (!params_path.empty()) apply_params(read_params_json(params_path), s.grid, s.params);
  return s;
}

// Scene files scene_NNNN.json pair with predictions frame_NNNN.<model>.<mode>.*
std::string pred_stem(const fs::path& scene_file) {
  std::string stem = scene_file.stem().string();
  const std::string prefix = "scene_";
  if (stem.rfind(prefix, 0) == 0) stem = "frame_" + stem.substr(prefix.size());
  return stem;
}

int cmd_simulate(const std::string& recipe_name_arg, int n_scenes, uint64_t seed,
                 const std::string& out_dir, double noise, const std::string& profile,
                 bool force) {
  const Recipe recipe = parse_recipe(recipe_name_arg);
  const RadarParams params = profile_params(profile);
  const fs::path dir(out_dir);
  fs::create_directories(dir);
  const auto scenes = make_dataset(recipe, n_scenes, seed, params, noise);
  for (int i = 0; i < n_scenes; ++i) {
    const fs::path scene_path = dir / index_name("scene", i, ".json");
    const fs::path frame_path = dir / index_name("frame", i, ".nrrf");
    ensure_writable(scene_path, force);
    ensure_writable(frame_path, force);
    write_scene_json(scenes[i], scene_path);
    write_frame(synthesize(scenes[i]), frame_path);
  }
  std::cout << "wrote " << n_scenes << " scenes to " << dir.string() << "\n";
  return 0;
}

int cmd_process(const std::string& frames_arg, const std::string& model_arg,
                const std::string& mode_arg, const std::string& params_path,
                const std::string& out_dir, const std::string& profile, int threads,
                int chirp_limit, bool snapshot, bool force) {
  const Model model = parse_model(model_arg);
  const ChirpMode mode = parse_chirp_mode(mode_arg);

  std::vector<fs::path> frame_files;
  const fs::path frames_path(frames_arg);
  if (fs::is_directory(frames_path))
    frame_files = sorted_files(frames_path, "", ".nrrf");
  else if (fs::exists(frames_path))
    frame_files.push_back(frames_path);
  else
    throw data_error(frames_arg + " does not exist");

  const fs::path dir = out_dir.empty() ? frame_files[0].parent_path() : fs::path(out_dir);
  fs::create_directories(dir);

  uint64_t total_events = 0;
  for (const auto& file : frame_files) {
    const ChirpFrame frame = read_frame(file);
    const ProcessSetup s = setup_for(frame, params_path, profile, mode);
    const FrameOutput out =
        process_frame(frame, model, mode, s.grid, s.params, threads, chirp_limit);

    const std::string base =
        file.stem().string() + "." + model_name(model) + "." + chirp_mode_name(mode);
    const fs::path map_bin = dir / (base + ".map.bin");
    const fs::path map_csv = dir / (base + ".map.csv");
    const fs::path meta = dir / (base + ".meta.json");
    ensure_writable(map_bin, force);
    write_map(out.map, map_bin);
    write_map_csv(out.map, map_csv);
    // Only the codec models carry a spike stream; ft and gradient ship dense maps.
    if (model != Model::ft && model != Model::gradient) {
      write_spikes(out.spikes, dir / (base + ".spikes.bin"));
      write_spikes_csv(out.spikes, dir / (base + ".spikes.csv"));
    }
    FrameMeta fm;
    fm.model = model_name(model);
    fm.mode = chirp_mode_name(mode);
    fm.counted_events = out.counted_events;
    fm.chirps_used = out.chirps_used;
    write_frame_meta(fm, meta);
    total_events += out.counted_events;

    if (snapshot && model != Model::ft) {
      ResonatorGrid grid(s.grid);
      const int chirps = mode == ChirpMode::single ? 1 : out.chirps_used;
      for (int c = 0; c < chirps; ++c)
        grid.run_chirp(view_chirp(frame, c),
                       mode == ChirpMode::continuous && c > 0 ? ChirpResetMode::continuous
                                                              : ChirpResetMode::reset,
                       threads);
      write_grid_snapshot(grid, dir / (base + ".grid.bin"));
      write_grid_snapshot_csv(grid, dir / (base + ".grid.csv"));
    }
  }
  std::cout << "processed " << frame_files.size() << " frame(s), " << total_events
            << " readout spike events\n";
  return 0;
}

int cmd_evaluate(const std::string& pred_dir, const std::string& scenes_dir,
                 const std::string& model_arg, const std::string& mode_arg,
                 const std::string& params_path, double cfar_alpha, double cfar_offset,
                 int radius, const std::string& out_json, const std::string& out_csv,
                 const std::string& profile, bool force) {
  const Model model = parse_model(model_arg);
  const ChirpMode mode = parse_chirp_mode(mode_arg);
  const auto scene_files = scene_files_in(scenes_dir);

  std::vector<ScenePrediction> preds;
  std::vector<BinLabel> labels;
  GridConfig grid;
  bool grid_set = false;
  for (const auto& sf : scene_files) {
    const Scene scene = read_scene_json(sf);
    const std::string base =
        pred_stem(sf) + "." + model_name(model) + "." + chirp_mode_name(mode);
    const fs::path map_path = fs::path(pred_dir) / (base + ".map.bin");
    const fs::path meta_path = fs::path(pred_dir) / (base + ".meta.json");
    ScenePrediction p;
    p.map = read_map(map_path);
    p.recipe = scene.recipe;
    if (fs::exists(meta_path)) p.spike_events = read_frame_meta(meta_path).counted_events;
    if (!grid_set) {
      grid = GridConfig::for_params(scene.params);
      grid.n_range_bins = p.map.n_range;
      grid.n_angle_bins = p.map.n_angle;
      grid_set = true;
    }
    if (p.map.n_range != grid.n_range_bins || p.map.n_angle != grid.n_angle_bins)
      throw data_error(map_path.string() + ": map shape differs from the first map");
    labels.push_back(label_bins(scene, grid));
    preds.push_back(std::move(p));
  }

  ModelParams mp = ModelParams::paper_single();
  GridConfig dummy = grid;
  if (!params_path.empty()) apply_params(read_params_json(params_path), dummy, mp);
  if (cfar_alpha > 0.0) mp.cfar.alpha = cfar_alpha;
  if (cfar_offset >= 0.0) mp.cfar.offset = cfar_offset;
  (void)profile;

  const EvalReport report = evaluate_predictions(preds, labels, mp.cfar, grid,
                                                 model_name(model), chirp_mode_name(mode),
                                                 radius);
  if (!out_json.empty()) {
    ensure_writable(out_json, force);
    write_report_json(report, out_json);
  }
  if (!out_csv.empty()) {
    const EvalReport one[] = {report};
    write_report_csv(one, out_csv);
  }
  std::cout << "model " << report.model << " mode " << report.mode << " scenes "
            << report.overall.scenes << " f_score " << report.overall.f_score
            << " precision " << report.overall.precision << " recall "
            << report.overall.recall << " snr " << report.overall.snr << "\n";
  return 0;
}

int cmd_sweep(const std::string& spec_path, const std::string& scenes_dir,
              const std::string& out_params, const std::string& out_table, int threads,
              bool force) {
  SweepSpec spec = read_sweep_spec_json(spec_path);
  const auto scene_files = scene_files_in(scenes_dir);
  std::vector<Scene> scenes;
  for (const auto& sf : scene_files) scenes.push_back(read_scene_json(sf));
  spec.base_grid = GridConfig{GridConfig::for_params(scenes[0].params).n_range_bins,
                              scenes[0].params.n_vx, scenes[0].params.n_samples,
                              spec.base_grid.alpha_g, spec.base_grid.alpha_x};
  const auto train = make_training_set(scenes, spec.base_grid);
  const SweepResult res = run_sweep(spec, train, threads);

  if (!out_params.empty()) {
    ensure_writable(out_params, force);
    ParamsFile pf;
    pf.grid = res.best_grid;
    pf.params = res.best_params;
    write_params_json(pf, out_params);
  }
  if (!out_table.empty()) write_sweep_csv(res, out_table);
  std::cout << "swept " << res.rows.size() << " combinations, best f_score " << res.best_f
            << "\n";
  return 0;
}

int cmd_early(const std::string& scenes_dir, const std::string& model_arg,
              const std::string& params_path, int stride, const std::string& out_csv,
              const std::string& profile, int threads, bool force) {
  const Model model = parse_model(model_arg);
  const auto scene_files = scene_files_in(scenes_dir);
  std::vector<Scene> scenes;
  std::vector<ChirpFrame> frames;
  for (const auto& sf : scene_files) {
    scenes.push_back(read_scene_json(sf));
    frames.push_back(synthesize(scenes.back()));
  }
  GridConfig grid = GridConfig::for_params(scenes[0].params);
  ModelParams params = ModelParams::paper_single();
  if (!params_path.empty()) apply_params(read_params_json(params_path), grid, params);
  (void)profile;

  const EarlyCurve curve =
      early_detection_curve(frames, scenes, model, grid, params, stride, threads);
  ensure_writable(out_csv, force);
  write_early_curve_csv(curve, out_csv);
  std::cout << "early curve over " << curve.points.size() << " checkpoints, final recall "
            << curve.points.back().recall << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spiking resonator range-angle processing for FMCW radar"};
  app.require_subcommand(1);
  int threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  app.add_option("--threads", threads, "worker thread cap (results are thread-invariant)");

  // simulate
  auto* sim = app.add_subcommand("simulate", "generate labeled scenes and raw frames");
  std::string sim_recipe, sim_out, sim_profile = "desk";
  int sim_scenes = 1;
  uint64_t sim_seed = 0;
  double sim_noise = kDefaultNoiseStddev;
  bool sim_force = false;
  sim->add_option("--recipe", sim_recipe, "scene recipe name")->required();
  sim->add_option("--scenes", sim_scenes, "number of scenes")->required();
  sim->add_option("--seed", sim_seed, "dataset seed");
  sim->add_option("--out", sim_out, "output directory")->required();
  sim->add_option("--noise", sim_noise, "noise standard deviation");
  sim->add_option("--profile", sim_profile, "sensor profile (desk, paper)");
  sim->add_flag("--force", sim_force, "overwrite existing files");

  // process
  auto* proc = app.add_subcommand("process", "compute range-angle maps and spike streams");
  std::string proc_frames, proc_model, proc_mode = "single", proc_params, proc_out,
              proc_profile = "desk";
  int proc_chirps = 0;
  bool proc_snapshot = false, proc_force = false;
  proc->add_option("--frames", proc_frames, "frame file or directory")->required();
  proc->add_option("--model", proc_model, "ft, gradient, adaptive, rate or time")->required();
  proc->add_option("--mode", proc_mode, "single, continuous or average");
  proc->add_option("--params", proc_params, "processing parameters JSON");
  proc->add_option("--out", proc_out, "output directory (default: frame directory)");
  proc->add_option("--profile", proc_profile, "sensor profile (desk, paper)");
  proc->add_option("--chirps", proc_chirps, "cap on chirps per frame (0 = all)");
  proc->add_flag("--snapshot", proc_snapshot, "also dump the final grid state");
  proc->add_flag("--force", proc_force, "overwrite existing files");

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "score maps against scene labels");
  std::string ev_pred, ev_scenes, ev_model, ev_mode = "single", ev_params, ev_json, ev_csv,
              ev_profile = "desk";
  double ev_cfar_alpha = 0.0, ev_cfar_offset = -1.0;
  int ev_radius = 1;
  bool ev_force = false;
  ev->add_option("--pred", ev_pred, "directory with processed maps")->required();
  ev->add_option("--scenes", ev_scenes, "directory with scene JSON files")->required();
  ev->add_option("--model", ev_model, "model tag of the maps")->required();
  ev->add_option("--mode", ev_mode, "chirp mode tag of the maps");
  ev->add_option("--params", ev_params, "parameters JSON (for the CFAR)");
  ev->add_option("--cfar-alpha", ev_cfar_alpha, "override CFAR alpha");
  ev->add_option("--cfar-offset", ev_cfar_offset, "override CFAR offset");
  ev->add_option("--radius", ev_radius, "match radius in bins");
  ev->add_option("--out-json", ev_json, "detailed report JSON path");
  ev->add_option("--out-csv", ev_csv, "summary CSV path");
  ev->add_option("--profile", ev_profile, "sensor profile (desk, paper)");
  ev->add_flag("--force", ev_force, "overwrite existing files");

  // sweep
  auto* sw = app.add_subcommand("sweep", "grid-search parameters on training scenes");
  std::string sw_spec, sw_scenes, sw_params, sw_table;
  bool sw_force = false;
  sw->add_option("--spec", sw_spec, "sweep specification JSON")->required();
  sw->add_option("--train", sw_scenes, "directory with training scene JSON files")->required();
  sw->add_option("--out-params", sw_params, "best parameters JSON path");
  sw->add_option("--out-table", sw_table, "full result table CSV path");
  sw->add_flag("--force", sw_force, "overwrite existing files");

  // early
  auto* ea = app.add_subcommand("early", "intra-chirp early detection curve");
  std::string ea_scenes, ea_model, ea_params, ea_out, ea_profile = "desk";
  int ea_stride = 64;
  bool ea_force = false;
  ea->add_option("--scenes", ea_scenes, "directory with scene JSON files")->required();
  ea->add_option("--model", ea_model, "gradient, adaptive, rate or time")->required();
  ea->add_option("--params", ea_params, "processing parameters JSON");
  ea->add_option("--stride", ea_stride, "checkpoint stride in samples");
  ea->add_option("--out", ea_out, "curve CSV path")->required();
  ea->add_option("--profile", ea_profile, "sensor profile (desk, paper)");
  ea->add_flag("--force", ea_force, "overwrite existing files");

  try {
    app.parse(argc, argv);
    if (sim->parsed())
      return cmd_simulate(sim_recipe, sim_scenes, sim_seed, sim_out, sim_noise, sim_profile,
                          sim_force);
    if (proc->parsed())
      return cmd_process(proc_frames, proc_model, proc_mode, proc_params, proc_out,
                         proc_profile, threads, proc_chirps, proc_snapshot, proc_force);
    if (ev->parsed())
      return cmd_evaluate(ev_pred, ev_scenes, ev_model, ev_mode, ev_params, ev_cfar_alpha,
                          ev_cfar_offset, ev_radius, ev_json, ev_csv, ev_profile, ev_force);
    if (sw->parsed())
      return cmd_sweep(sw_spec, sw_scenes, sw_params, sw_table, threads, sw_force);
    if (ea->parsed())
      return cmd_early(ea_scenes, ea_model, ea_params, ea_stride, ea_out, ea_profile,
                       threads, ea_force);
    return kExitUsage;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  } catch (const data_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
}
