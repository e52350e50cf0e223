#pragma once

#include <map>
#include <string>
#include <vector>

#include "nrr/eval.hpp"
#include "nrr/pipeline.hpp"

namespace nrr {

// Two-stage exhaustive grid search. Stage 1 tunes the envelope-gradient path
// plus the CFAR on the gradient model (the Fourier baseline runs the same
// stage with only the CFAR grid); stage 2 tunes one codec with everything
// from stage 1 held fixed. The objective is the mean per-scene F-score on the
// training set. Ties keep the first combination in enumeration order
// (parameter names sorted, values in the order given), so results are
// deterministic.
enum class SweepStage { gradient_cfar, codec };

struct SweepSpec {
  SweepStage stage = SweepStage::gradient_cfar;
  Model model = Model::gradient;  // objective model (codec stage: which codec)
  ChirpMode mode = ChirpMode::single;
  int chirp_limit = 0;
  std::map<std::string, std::vector<double>> grids;  // name -> values
  GridConfig base_grid;
  ModelParams fixed;
  int match_radius = 1;
};

struct SweepRow {
  std::vector<double> values;  // one per parameter, in name order
  double f_score = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};

struct SweepResult {
  std::vector<std::string> param_names;
  std::vector<SweepRow> rows;  // full table in enumeration order
  int best_index = -1;
  double best_f = 0.0;
  GridConfig best_grid;      // base_grid with winning values applied
  ModelParams best_params;   // fixed params with winning values applied
};

struct TrainScene {
  Scene scene;
  ChirpFrame frame;
  BinLabel labels;
};

std::vector<TrainScene> make_training_set(const std::vector<Scene>& scenes,
                                          const GridConfig& grid);

SweepResult run_sweep(const SweepSpec& spec, const std::vector<TrainScene>& train,
                      int threads);

// Default grids: five logarithmic steps per parameter centered on the
// published values (x4 down to /4), published value always included.
std::map<std::string, std::vector<double>> default_stage1_grids(Model model);
std::map<std::string, std::vector<double>> default_codec_grids(Model model,
                                                               ChirpMode mode);

// Grid names understood per stage (sorted): stage 1 gradient model uses
// alpha_g, alpha_x, cfar_alpha, cfar_offset; stage 1 ft uses the cfar pair;
// codec stage uses gamma (adaptive) or tau, u_rest, u_th (LIF codecs).

}  // namespace nrr
