// End-to-end tests for the nrr command line tool. Each case spawns the real
// binary (path injected via NRR_CLI_PATH) and checks files and exit codes.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "nrr/io.hpp"
#include "nrr/pipeline.hpp"
#include "nrr/rng.hpp"
#include "nrr/signal_sim.hpp"

using namespace nrr;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code = -1;
  std::string out;  // stdout and stderr combined
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(NRR_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf;
  RunResult r;
  size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// One simulated dataset shared by the read-only cases below.
const fs::path& dataset_dir() {
  static const fs::path dir = [] {
    const fs::path d = fresh_dir("nrr_cli_dataset");
    const RunResult r = run("simulate --recipe close_targets_2010 --scenes 2 --seed 5 --out " +
                            d.string() + " --noise 0.05");
    REQUIRE(r.code == 0);
    return d;
  }();
  return dir;
}

std::vector<uint8_t> slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::string> file_lines(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

void spit_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::trunc);
  out << text;
}

// Mirrors what the process command does for desk-profile frames with no
// parameter file, so results can be compared bit for bit.
FrameOutput library_process(const fs::path& frame_path, Model model, ChirpMode mode) {
  const ChirpFrame frame = read_frame(frame_path);
  RadarParams rp = RadarParams::desk();
  rp.n_samples = frame.n_samples();
  rp.n_vx = frame.n_vx();
  rp.n_chirps = frame.n_chirps();
  return process_frame(frame, model, mode, GridConfig::for_params(rp),
                       ModelParams::paper_single(), 1, 0);
}

}  // namespace

TEST_CASE("help is exit 0, usage problems are exit 2") {
  CHECK(run("--help").code == 0);
  CHECK(run("--help").out.find("simulate") != std::string::npos);

  CHECK(run("").code == 2);                 // a subcommand is required
  CHECK(run("frobnicate").code == 2);       // unknown subcommand
  CHECK(run("simulate --scenes 2").code == 2);  // missing required options

  const fs::path dir = fresh_dir("nrr_cli_usage");
  const RunResult profile = run("simulate --recipe close_targets_2010 --scenes 1 --out " +
                                dir.string() + " --profile lab");
  CHECK(profile.code == 2);
  CHECK(profile.out.find("unknown profile") != std::string::npos);

  CHECK(run("process --frames " + dir.string() + " --model warp").code == 2);
}

TEST_CASE("missing or unreadable data is exit 3") {
  CHECK(run("process --frames /nonexistent/frame.nrrf --model gradient").code == 3);

  const fs::path empty = fresh_dir("nrr_cli_empty");
  CHECK(run("evaluate --pred " + empty.string() + " --scenes " + empty.string() +
            " --model gradient").code == 3);
  CHECK(run("sweep --spec " + (empty / "missing.json").string() + " --train " +
            empty.string()).code == 3);
}

TEST_CASE("simulate writes paired scene and frame files and refuses to clobber") {
  const fs::path dir = fresh_dir("nrr_cli_sim");
  const std::string cmd = "simulate --recipe close_targets_2010 --scenes 2 --seed 5 --out " +
                          dir.string() + " --noise 0.05";
  const RunResult first = run(cmd);
  CHECK(first.code == 0);
  CHECK(first.out.find("wrote 2 scenes") != std::string::npos);

  for (const char* name : {"scene_0000.json", "scene_0001.json", "frame_0000.nrrf",
                           "frame_0001.nrrf"})
    CHECK(fs::exists(dir / name));

  const Scene s1 = read_scene_json(dir / "scene_0001.json");
  CHECK(s1.recipe == "close_targets_2010");
  CHECK(s1.seed == mix_seed(5, 1));
  CHECK(s1.targets.size() == 2);

  const ChirpFrame f0 = read_frame(dir / "frame_0000.nrrf");
  CHECK(f0.n_samples() == 512);
  CHECK(f0.n_vx() == 32);
  CHECK(f0.n_chirps() == 8);

  const RunResult again = run(cmd);
  CHECK(again.code == 3);
  CHECK(again.out.find("--force") != std::string::npos);
  CHECK(run(cmd + " --force").code == 0);
}

TEST_CASE("process output matches the library computation bit for bit") {
  const fs::path out = fresh_dir("nrr_cli_proc");
  const fs::path frame0 = dataset_dir() / "frame_0000.nrrf";

  SUBCASE("gradient map over the whole directory") {
    REQUIRE(run("--threads 1 process --frames " + dataset_dir().string() +
                " --model gradient --out " + out.string()).code == 0);
    const FrameOutput lib = library_process(frame0, Model::gradient, ChirpMode::single);
    CHECK(map_bytes(lib.map) == slurp(out / "frame_0000.gradient.single.map.bin"));

    const FrameMeta meta = read_frame_meta(out / "frame_0000.gradient.single.meta.json");
    CHECK(meta.model == "gradient");
    CHECK(meta.mode == "single");
    CHECK(meta.counted_events == lib.counted_events);
    CHECK(meta.chirps_used == lib.chirps_used);
    CHECK(fs::exists(out / "frame_0001.gradient.single.map.bin"));
    CHECK_FALSE(fs::exists(out / "frame_0000.gradient.single.spikes.bin"));
  }
  SUBCASE("rate codec spikes from a single frame file") {
    REQUIRE(run("--threads 1 process --frames " + frame0.string() + " --model rate --out " +
                out.string()).code == 0);
    const FrameOutput lib = library_process(frame0, Model::rate, ChirpMode::single);
    CHECK(map_bytes(lib.map) == slurp(out / "frame_0000.rate.single.map.bin"));
    CHECK(spike_bytes(lib.spikes) == slurp(out / "frame_0000.rate.single.spikes.bin"));
    CHECK(read_frame_meta(out / "frame_0000.rate.single.meta.json").counted_events ==
          lib.counted_events);
  }
  SUBCASE("snapshot flag dumps the grid state files") {
    REQUIRE(run("--threads 1 process --frames " + frame0.string() +
                " --model adaptive --mode average --snapshot --out " + out.string()).code == 0);
    CHECK(fs::exists(out / "frame_0000.adaptive.average.grid.bin"));
    CHECK(fs::exists(out / "frame_0000.adaptive.average.grid.csv"));
  }
}

TEST_CASE("process reruns are byte-identical") {
  const fs::path out = fresh_dir("nrr_cli_rerun");
  const std::string cmd = "--threads 1 process --frames " +
                          (dataset_dir() / "frame_0000.nrrf").string() +
                          " --model adaptive --mode average --out " + out.string();
  REQUIRE(run(cmd).code == 0);
  const auto map1 = slurp(out / "frame_0000.adaptive.average.map.bin");
  const auto spikes1 = slurp(out / "frame_0000.adaptive.average.spikes.bin");

  CHECK(run(cmd).code == 3);  // refuses without --force
  REQUIRE(run(cmd + " --force").code == 0);
  CHECK(slurp(out / "frame_0000.adaptive.average.map.bin") == map1);
  CHECK(slurp(out / "frame_0000.adaptive.average.spikes.bin") == spikes1);
}

TEST_CASE("evaluate writes a schema-valid report") {
  const fs::path out = fresh_dir("nrr_cli_eval");
  REQUIRE(run("--threads 1 process --frames " + dataset_dir().string() +
              " --model gradient --out " + out.string()).code == 0);

  const fs::path report_json = out / "report.json";
  const fs::path report_csv = out / "report.csv";
  const std::string cmd = "evaluate --pred " + out.string() + " --scenes " +
                          dataset_dir().string() +
                          " --model gradient --cfar-alpha 2.0 --cfar-offset 0.05" +
                          " --out-json " + report_json.string() + " --out-csv " +
                          report_csv.string();
  const RunResult r = run(cmd);
  CHECK(r.code == 0);
  CHECK(r.out.find("scenes 2") != std::string::npos);

  const EvalReport report = read_report_json(report_json);
  CHECK(report.model == "gradient");
  CHECK(report.mode == "single");
  CHECK(report.cfar.alpha == 2.0);
  CHECK(report.cfar.offset == 0.05);
  CHECK(report.overall.scenes == 2);
  CHECK(report.per_scene.size() == 2);
  CHECK(report.overall.f_score >= 0.0);
  CHECK(report.overall.f_score <= 1.0);

  const auto lines = file_lines(report_csv);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "model,mode,f_score,precision,recall,snr,avg_spike_events,bandwidth_ratio");
  CHECK(lines[1].rfind("gradient,single,", 0) == 0);

  CHECK(run(cmd).code == 3);  // report.json already exists
}

TEST_CASE("sweep emits parameters the process command can consume") {
  const fs::path out = fresh_dir("nrr_cli_sweep");
  const fs::path spec = out / "spec.json";
  spit_text(spec, R"({
    "schema_version": 1,
    "stage": "gradient_cfar",
    "model": "gradient",
    "grids": {
      "alpha_g": [0.001],
      "alpha_x": [0.25],
      "cfar_alpha": [1.5, 3.0],
      "cfar_offset": [0.0, 0.25]
    }
  })");

  const fs::path best = out / "best.json";
  const fs::path table = out / "table.csv";
  const RunResult r = run("--threads 1 sweep --spec " + spec.string() + " --train " +
                          dataset_dir().string() + " --out-params " + best.string() +
                          " --out-table " + table.string());
  CHECK(r.code == 0);
  CHECK(r.out.find("swept 4 combinations") != std::string::npos);

  const ParamsFile pf = read_params_json(best);
  CHECK(pf.grid.alpha_g == 0.001);
  CHECK(pf.grid.alpha_x == 0.25);

  const auto lines = file_lines(table);
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] == "alpha_g,alpha_x,cfar_alpha,cfar_offset,f_score,precision,recall,best");
  int winners = 0;
  for (size_t i = 1; i < lines.size(); ++i)
    if (lines[i].size() >= 2 && lines[i].compare(lines[i].size() - 2, 2, ",1") == 0) ++winners;
  CHECK(winners == 1);

  CHECK(run("--threads 1 process --frames " + (dataset_dir() / "frame_0000.nrrf").string() +
            " --model gradient --params " + best.string() + " --out " + out.string())
            .code == 0);
}

TEST_CASE("early writes one row per checkpoint") {
  const fs::path out = fresh_dir("nrr_cli_early");
  const fs::path csv = out / "early.csv";
  const std::string cmd = "--threads 1 early --scenes " + dataset_dir().string() +
                          " --model gradient --stride 128 --out " + csv.string();
  REQUIRE(run(cmd).code == 0);

  const auto lines = file_lines(csv);
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] == "sample,tp,fp,fn,precision,recall,f_score");
  CHECK(lines[1].rfind("128,", 0) == 0);
  CHECK(lines[2].rfind("256,", 0) == 0);
  CHECK(lines[3].rfind("384,", 0) == 0);
  CHECK(lines[4].rfind("512,", 0) == 0);

  CHECK(run(cmd).code == 3);
  CHECK(run(cmd + " --force").code == 0);
}
