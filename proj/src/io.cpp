#include "nrr/io.hpp"

#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace nrr {

namespace {

using nlohmann::json;

// ---- little-endian primitives -------------------------------------------------

void put_u16(std::string& out, uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put_u32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f32(std::string& out, float v) {
  uint32_t bits;
  std::memcpy(&bits, &v, 4);
  put_u32(out, bits);
}

void put_i8(std::string& out, int8_t v) { out.push_back(static_cast<char>(v)); }

class ByteReader {
public:
  ByteReader(const uint8_t* data, size_t size, std::string name)
      : data_(data), size_(size), name_(std::move(name)) {}

  uint16_t u16() { return static_cast<uint16_t>(byte() | (byte() << 8)); }
  uint32_t u32() {
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(byte()) << (8 * i);
    return v;
  }
  uint64_t u64() {
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(byte()) << (8 * i);
    return v;
  }
  float f32() {
    const uint32_t bits = u32();
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
  }
  int8_t i8() { return static_cast<int8_t>(byte()); }

  void expect_magic(const char* magic) {
    for (int i = 0; i < 4; ++i)
      if (byte() != static_cast<uint8_t>(magic[i]))
        throw data_error(name_ + ": bad magic, not a " + magic + " file");
  }
  void expect_version(uint16_t expected) {
    const uint16_t v = u16();
    if (v != expected)
      throw data_error(name_ + ": unsupported format version " + std::to_string(v));
  }
  void expect_done() {
    if (pos_ != size_) throw data_error(name_ + ": trailing bytes after payload");
  }
  size_t remaining() const { return size_ - pos_; }

private:
  uint8_t byte() {
    if (pos_ >= size_) throw data_error(name_ + ": truncated file");
    return data_[pos_++];
  }
  const uint8_t* data_;
  size_t size_;
  size_t pos_ = 0;
  std::string name_;
};

std::vector<uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot open " + path.string());
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  return bytes;
}

void write_file_bytes(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw data_error("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw data_error("short write to " + path.string());
}

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open " + path.string());
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw data_error(path.string() + ": invalid JSON");
  return j;
}

void save_json(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw data_error("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

template <class T>
T get_field(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw data_error(where + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw data_error(where + ": field '" + key + "' has the wrong type");
  }
}

void check_schema_version(const json& j, const std::string& where) {
  if (get_field<int>(j, "schema_version", where) != 1)
    throw data_error(where + ": unsupported schema_version");
}

// Typos in hand-edited parameter files should fail loudly, not fall back to
// defaults, so params readers whitelist their keys.
void reject_unknown(const json& j, std::initializer_list<const char*> allowed,
                    const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw data_error(where + ": unknown field '" + key + "'");
  }
}

}  // namespace

// ---- scenes ---------------------------------------------------------------------

void write_scene_json(const Scene& scene, const std::filesystem::path& path) {
  json j;
  j["schema_version"] = 1;
  j["seed"] = scene.seed;
  j["noise_stddev"] = scene.noise_stddev;
  j["recipe"] = scene.recipe;
  j["params"] = {{"f0_hz", scene.params.f0_hz},
                 {"bandwidth_hz", scene.params.bandwidth_hz},
                 {"n_samples", scene.params.n_samples},
                 {"n_chirps", scene.params.n_chirps},
                 {"n_vx", scene.params.n_vx},
                 {"t_chirp_s", scene.params.t_chirp_s},
                 {"t_wait_s", scene.params.t_wait_s},
                 {"antenna_spacing_wl", scene.params.antenna_spacing_wl}};
  j["targets"] = json::array();
  for (const auto& t : scene.targets)
    j["targets"].push_back({{"range_m", t.range_m},
                            {"azimuth_rad", t.azimuth_rad},
                            {"rcs", t.rcs},
                            {"velocity_mps", t.velocity_mps}});
  save_json(j, path);
}

Scene read_scene_json(const std::filesystem::path& path) {
  const json j = load_json(path);
  const std::string where = path.string();
  check_schema_version(j, where);
  Scene s;
  s.seed = get_field<uint64_t>(j, "seed", where);
  s.noise_stddev = get_field<double>(j, "noise_stddev", where);
  if (j.contains("recipe")) s.recipe = j.at("recipe").get<std::string>();
  const json p = get_field<json>(j, "params", where);
  s.params.f0_hz = get_field<double>(p, "f0_hz", where);
  s.params.bandwidth_hz = get_field<double>(p, "bandwidth_hz", where);
  s.params.n_samples = get_field<int>(p, "n_samples", where);
  s.params.n_chirps = get_field<int>(p, "n_chirps", where);
  s.params.n_vx = get_field<int>(p, "n_vx", where);
  s.params.t_chirp_s = get_field<double>(p, "t_chirp_s", where);
  s.params.t_wait_s = get_field<double>(p, "t_wait_s", where);
  s.params.antenna_spacing_wl = get_field<double>(p, "antenna_spacing_wl", where);
  for (const json& t : get_field<json>(j, "targets", where)) {
    PointTarget pt;
    pt.range_m = get_field<double>(t, "range_m", where);
    pt.azimuth_rad = get_field<double>(t, "azimuth_rad", where);
    pt.rcs = get_field<double>(t, "rcs", where);
    pt.velocity_mps = get_field<double>(t, "velocity_mps", where);
    s.targets.push_back(pt);
  }
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw data_error(where + ": " + e.what());
  }
  return s;
}

// ---- frames ---------------------------------------------------------------------

void write_frame(const ChirpFrame& frame, const std::filesystem::path& path) {
  std::string out;
  out.reserve(18 + frame.data().size() * 8);
  out += "NRRF";
  put_u16(out, kFormatVersion);
  put_u32(out, static_cast<uint32_t>(frame.n_chirps()));
  put_u32(out, static_cast<uint32_t>(frame.n_samples()));
  put_u32(out, static_cast<uint32_t>(frame.n_vx()));
  for (const cplx& v : frame.data()) {
    put_f32(out, static_cast<float>(v.real()));
    put_f32(out, static_cast<float>(v.imag()));
  }
  write_file_bytes(path, out);
}

ChirpFrame read_frame(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  ByteReader r(bytes.data(), bytes.size(), path.string());
  r.expect_magic("NRRF");
  r.expect_version(kFormatVersion);
  const uint32_t n_chirps = r.u32();
  const uint32_t n_samples = r.u32();
  const uint32_t n_vx = r.u32();
  if (n_chirps == 0 || n_samples == 0 || n_vx == 0)
    throw data_error(path.string() + ": zero dimension in header");
  const uint64_t cells = static_cast<uint64_t>(n_chirps) * n_samples * n_vx;
  if (r.remaining() != cells * 8)
    throw data_error(path.string() + ": payload size does not match header");
  ChirpFrame frame(static_cast<int>(n_chirps), static_cast<int>(n_samples),
                   static_cast<int>(n_vx));
  for (auto& v : frame.data()) {
    const double re = r.f32();
    const double im = r.f32();
    v = cplx{re, im};
  }
  r.expect_done();
  return frame;
}

// ---- maps -----------------------------------------------------------------------

std::vector<uint8_t> map_bytes(const RangeAngleMap& map) {
  std::string out;
  out += "NRRM";
  put_u16(out, kFormatVersion);
  put_u32(out, static_cast<uint32_t>(map.n_range));
  put_u32(out, static_cast<uint32_t>(map.n_angle));
  for (double v : map.values) put_f32(out, static_cast<float>(v));
  return {out.begin(), out.end()};
}

void write_map(const RangeAngleMap& map, const std::filesystem::path& path) {
  const auto bytes = map_bytes(map);
  write_file_bytes(path, std::string(bytes.begin(), bytes.end()));
}

RangeAngleMap read_map(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  ByteReader r(bytes.data(), bytes.size(), path.string());
  r.expect_magic("NRRM");
  r.expect_version(kFormatVersion);
  const uint32_t nr = r.u32();
  const uint32_t na = r.u32();
  if (nr == 0 || na == 0) throw data_error(path.string() + ": zero dimension in header");
  if (r.remaining() != static_cast<uint64_t>(nr) * na * 4)
    throw data_error(path.string() + ": payload size does not match header");
  RangeAngleMap map(static_cast<int>(nr), static_cast<int>(na));
  for (auto& v : map.values) v = r.f32();
  r.expect_done();
  return map;
}

void write_map_csv(const RangeAngleMap& map, const std::filesystem::path& path) {
  std::ostringstream out;
  out << "range_bin,angle_bin,value\n";
  out << std::setprecision(17);
  for (int j = 0; j < map.n_range; ++j)
    for (int l = 0; l < map.n_angle; ++l)
      out << j << "," << l << "," << map.at(j, l) << "\n";
  write_file_bytes(path, out.str());
}

// ---- grid snapshots ---------------------------------------------------------------

void write_grid_snapshot(const ResonatorGrid& grid, const std::filesystem::path& path) {
  const GridConfig& cfg = grid.config();
  std::string out;
  out += "NRRG";
  put_u16(out, kFormatVersion);
  put_u32(out, static_cast<uint32_t>(cfg.n_range_bins));
  put_u32(out, static_cast<uint32_t>(cfg.n_angle_bins));
  for (const NeuronState& st : grid.neurons()) {
    put_f32(out, static_cast<float>(st.slope));
    put_f32(out, static_cast<float>(st.mag_peak));
    put_f32(out, static_cast<float>(st.gap_peak));
    put_f32(out, static_cast<float>(magnitude(st.resonator)));
  }
  write_file_bytes(path, out);
}

void write_grid_snapshot_csv(const ResonatorGrid& grid, const std::filesystem::path& path) {
  const GridConfig& cfg = grid.config();
  std::ostringstream out;
  out << "range_bin,angle_bin,g,s_max,w_max,mag\n";
  out << std::setprecision(17);
  for (int j = 0; j < cfg.n_range_bins; ++j) {
    for (int l = 0; l < cfg.n_angle_bins; ++l) {
      const NeuronState& st = grid.neuron(j, l);
      out << j << "," << l << "," << st.slope << "," << st.mag_peak << ","
          << st.gap_peak << "," << magnitude(st.resonator) << "\n";
    }
  }
  write_file_bytes(path, out.str());
}

// ---- spikes ---------------------------------------------------------------------

std::vector<uint8_t> spike_bytes(std::span<const SpikeEvent> spikes) {
  std::string out;
  out.reserve(18 + spikes.size() * 9);
  out += "NRRS";
  put_u16(out, kFormatVersion);
  put_u64(out, spikes.size());
  for (const auto& e : spikes) {
    put_u16(out, e.chirp);
    put_u16(out, e.sample);
    put_u16(out, e.range_bin);
    put_u16(out, e.angle_bin);
    put_i8(out, e.polarity);
  }
  return {out.begin(), out.end()};
}

void write_spikes(std::span<const SpikeEvent> spikes, const std::filesystem::path& path) {
  const auto bytes = spike_bytes(spikes);
  write_file_bytes(path, std::string(bytes.begin(), bytes.end()));
}

std::vector<SpikeEvent> read_spikes(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  ByteReader r(bytes.data(), bytes.size(), path.string());
  r.expect_magic("NRRS");
  r.expect_version(kFormatVersion);
  const uint64_t count = r.u64();
  if (r.remaining() != count * 9)
    throw data_error(path.string() + ": payload size does not match header");
  std::vector<SpikeEvent> out(count);
  for (auto& e : out) {
    e.chirp = r.u16();
    e.sample = r.u16();
    e.range_bin = r.u16();
    e.angle_bin = r.u16();
    e.polarity = r.i8();
  }
  r.expect_done();
  return out;
}

void write_spikes_csv(std::span<const SpikeEvent> spikes, const std::filesystem::path& path) {
  std::ostringstream out;
  out << "chirp,sample,range_bin,angle_bin,polarity\n";
  for (const auto& e : spikes)
    out << e.chirp << "," << e.sample << "," << e.range_bin << "," << e.angle_bin << ","
        << static_cast<int>(e.polarity) << "\n";
  write_file_bytes(path, out.str());
}

// ---- params ---------------------------------------------------------------------

namespace {

json lif_to_json(const LifParams& p) {
  return {{"u_th", p.threshold}, {"u_rest", p.rest_input}, {"tau", p.tau}};
}

LifParams lif_from_json(const json& j, const std::string& where) {
  reject_unknown(j, {"u_th", "u_rest", "tau"}, where);
  LifParams p;
  p.threshold = get_field<double>(j, "u_th", where);
  p.rest_input = get_field<double>(j, "u_rest", where);
  p.tau = get_field<double>(j, "tau", where);
  p.leak = true;
  return p;
}

}  // namespace

void write_params_json(const ParamsFile& p, const std::filesystem::path& path) {
  json j;
  j["schema_version"] = 1;
  j["grid"] = {{"alpha_g", p.grid.alpha_g}, {"alpha_x", p.grid.alpha_x}};
  j["adaptive"] = {{"gamma", p.params.adaptive.gamma}};
  j["rate"] = lif_to_json(p.params.rate);
  j["time"] = lif_to_json(p.params.time);
  j["cfar"] = {{"alpha", p.params.cfar.alpha}, {"offset", p.params.cfar.offset}};
  save_json(j, path);
}

ParamsFile read_params_json(const std::filesystem::path& path) {
  const json j = load_json(path);
  const std::string where = path.string();
  check_schema_version(j, where);
  reject_unknown(j, {"schema_version", "grid", "adaptive", "rate", "time", "cfar"}, where);
  ParamsFile p;
  const json grid = get_field<json>(j, "grid", where);
  reject_unknown(grid, {"alpha_g", "alpha_x"}, where);
  p.grid.alpha_g = get_field<double>(grid, "alpha_g", where);
  p.grid.alpha_x = get_field<double>(grid, "alpha_x", where);
  const json adaptive = get_field<json>(j, "adaptive", where);
  reject_unknown(adaptive, {"gamma"}, where);
  p.params.adaptive.gamma = get_field<double>(adaptive, "gamma", where);
  p.params.rate = lif_from_json(get_field<json>(j, "rate", where), where);
  p.params.time = lif_from_json(get_field<json>(j, "time", where), where);
  const json cfar = get_field<json>(j, "cfar", where);
  reject_unknown(cfar, {"alpha", "offset"}, where);
  p.params.cfar.alpha = get_field<double>(cfar, "alpha", where);
  p.params.cfar.offset = get_field<double>(cfar, "offset", where);
  try {
    p.params.validate();
    if (!(p.grid.alpha_g > 0.0 && p.grid.alpha_g <= 1.0))
      throw std::invalid_argument("alpha_g out of (0, 1]");
    if (!(p.grid.alpha_x > 0.0 && p.grid.alpha_x <= 1.0))
      throw std::invalid_argument("alpha_x out of (0, 1]");
  } catch (const std::invalid_argument& e) {
    throw data_error(where + ": " + e.what());
  }
  return p;
}

void apply_params(const ParamsFile& file, GridConfig& grid, ModelParams& params) {
  grid.alpha_g = file.grid.alpha_g;
  grid.alpha_x = file.grid.alpha_x;
  params = file.params;
}

// ---- frame meta -------------------------------------------------------------------

void write_frame_meta(const FrameMeta& m, const std::filesystem::path& path) {
  json j;
  j["schema_version"] = 1;
  j["model"] = m.model;
  j["mode"] = m.mode;
  j["counted_events"] = m.counted_events;
  j["chirps_used"] = m.chirps_used;
  save_json(j, path);
}

FrameMeta read_frame_meta(const std::filesystem::path& path) {
  const json j = load_json(path);
  const std::string where = path.string();
  check_schema_version(j, where);
  FrameMeta m;
  m.model = get_field<std::string>(j, "model", where);
  m.mode = get_field<std::string>(j, "mode", where);
  m.counted_events = get_field<uint64_t>(j, "counted_events", where);
  m.chirps_used = get_field<int>(j, "chirps_used", where);
  return m;
}

// ---- reports ----------------------------------------------------------------------

namespace {

json summary_to_json(const EvalSummary& s) {
  return {{"scenes", s.scenes},          {"f_score", s.f_score},
          {"precision", s.precision},    {"recall", s.recall},
          {"snr", s.snr},                {"spike_events", s.spike_events},
          {"bandwidth_ratio", s.bandwidth_ratio}};
}

EvalSummary summary_from_json(const json& j, const std::string& where) {
  EvalSummary s;
  s.scenes = get_field<int>(j, "scenes", where);
  s.f_score = get_field<double>(j, "f_score", where);
  s.precision = get_field<double>(j, "precision", where);
  s.recall = get_field<double>(j, "recall", where);
  s.snr = get_field<double>(j, "snr", where);
  s.spike_events = get_field<double>(j, "spike_events", where);
  s.bandwidth_ratio = get_field<double>(j, "bandwidth_ratio", where);
  return s;
}

}  // namespace

void write_report_json(const EvalReport& r, const std::filesystem::path& path) {
  json j;
  j["schema_version"] = 1;
  j["model"] = r.model;
  j["mode"] = r.mode;
  j["cfar"] = {{"alpha", r.cfar.alpha}, {"offset", r.cfar.offset}};
  j["match_radius"] = r.match_radius;
  j["overall"] = summary_to_json(r.overall);
  j["per_recipe"] = json::object();
  for (const auto& [name, s] : r.per_recipe) j["per_recipe"][name] = summary_to_json(s);
  j["per_scene"] = json::array();
  for (const auto& e : r.per_scene)
    j["per_scene"].push_back({{"recipe", e.recipe},
                              {"tp", e.counts.tp},
                              {"fp", e.counts.fp},
                              {"fn", e.counts.fn},
                              {"precision", e.precision},
                              {"recall", e.recall},
                              {"f_score", e.f_score},
                              {"snr", e.snr},
                              {"spike_events", e.spike_events},
                              {"bandwidth_ratio", e.bandwidth_ratio}});
  save_json(j, path);
}

EvalReport read_report_json(const std::filesystem::path& path) {
  const json j = load_json(path);
  const std::string where = path.string();
  check_schema_version(j, where);
  EvalReport r;
  r.model = get_field<std::string>(j, "model", where);
  r.mode = get_field<std::string>(j, "mode", where);
  const json cfar = get_field<json>(j, "cfar", where);
  r.cfar.alpha = get_field<double>(cfar, "alpha", where);
  r.cfar.offset = get_field<double>(cfar, "offset", where);
  r.match_radius = get_field<int>(j, "match_radius", where);
  r.overall = summary_from_json(get_field<json>(j, "overall", where), where);
  // Keep the container alive across the loop: items() only holds a reference.
  const json recipes = get_field<json>(j, "per_recipe", where);
  for (const auto& [name, s] : recipes.items())
    r.per_recipe.emplace_back(name, summary_from_json(s, where));
  for (const json& e : get_field<json>(j, "per_scene", where)) {
    SceneEval se;
    se.recipe = get_field<std::string>(e, "recipe", where);
    se.counts.tp = get_field<int>(e, "tp", where);
    se.counts.fp = get_field<int>(e, "fp", where);
    se.counts.fn = get_field<int>(e, "fn", where);
    se.precision = get_field<double>(e, "precision", where);
    se.recall = get_field<double>(e, "recall", where);
    se.f_score = get_field<double>(e, "f_score", where);
    se.snr = get_field<double>(e, "snr", where);
    se.spike_events = get_field<uint64_t>(e, "spike_events", where);
    se.bandwidth_ratio = get_field<double>(e, "bandwidth_ratio", where);
    r.per_scene.push_back(se);
  }
  return r;
}

void write_report_csv(std::span<const EvalReport> reports,
                      const std::filesystem::path& path) {
  std::ostringstream out;
  out << "model,mode,f_score,precision,recall,snr,avg_spike_events,bandwidth_ratio\n";
  out << std::setprecision(10);
  for (const auto& r : reports)
    out << r.model << "," << r.mode << "," << r.overall.f_score << ","
        << r.overall.precision << "," << r.overall.recall << "," << r.overall.snr << ","
        << r.overall.spike_events << "," << r.overall.bandwidth_ratio << "\n";
  write_file_bytes(path, out.str());
}

void write_sweep_csv(const SweepResult& r, const std::filesystem::path& path) {
  std::ostringstream out;
  for (const auto& n : r.param_names) out << n << ",";
  out << "f_score,precision,recall,best\n";
  out << std::setprecision(17);
  for (size_t i = 0; i < r.rows.size(); ++i) {
    for (double v : r.rows[i].values) out << v << ",";
    out << r.rows[i].f_score << "," << r.rows[i].precision << "," << r.rows[i].recall
        << "," << (static_cast<int>(i) == r.best_index ? 1 : 0) << "\n";
  }
  write_file_bytes(path, out.str());
}

void write_early_curve_csv(const EarlyCurve& c, const std::filesystem::path& path) {
  std::ostringstream out;
  out << "sample,tp,fp,fn,precision,recall,f_score\n";
  out << std::setprecision(10);
  for (const auto& pt : c.points)
    out << pt.sample << "," << pt.counts.tp << "," << pt.counts.fp << "," << pt.counts.fn
        << "," << pt.precision << "," << pt.recall << "," << pt.f_score << "\n";
  write_file_bytes(path, out.str());
}

SweepSpec read_sweep_spec_json(const std::filesystem::path& path) {
  const json j = load_json(path);
  const std::string where = path.string();
  check_schema_version(j, where);
  reject_unknown(j, {"schema_version", "stage", "model", "mode", "chirp_limit", "grids", "fixed"},
                 where);
  SweepSpec spec;
  const std::string stage = get_field<std::string>(j, "stage", where);
  if (stage == "gradient_cfar")
    spec.stage = SweepStage::gradient_cfar;
  else if (stage == "codec")
    spec.stage = SweepStage::codec;
  else
    throw data_error(where + ": stage must be gradient_cfar or codec");
  try {
    spec.model = parse_model(get_field<std::string>(j, "model", where));
    if (j.contains("mode"))
      spec.mode = parse_chirp_mode(j.at("mode").get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw data_error(where + ": " + e.what());
  }
  if (j.contains("chirp_limit")) spec.chirp_limit = j.at("chirp_limit").get<int>();
  if (j.contains("grids")) {
    for (const auto& [name, vals] : j.at("grids").items()) {
      if (!vals.is_array()) throw data_error(where + ": grid '" + name + "' must be an array");
      spec.grids[name] = vals.get<std::vector<double>>();
    }
  } else {
    spec.grids = spec.stage == SweepStage::gradient_cfar
                     ? default_stage1_grids(spec.model)
                     : default_codec_grids(spec.model, spec.mode);
  }
  if (j.contains("fixed")) {
    const json f = j.at("fixed");
    reject_unknown(f, {"grid", "adaptive", "rate", "time", "cfar"}, where);
    ParamsFile pf;
    const json fgrid = get_field<json>(f, "grid", where);
    reject_unknown(fgrid, {"alpha_g", "alpha_x"}, where);
    pf.grid.alpha_g = get_field<double>(fgrid, "alpha_g", where);
    pf.grid.alpha_x = get_field<double>(fgrid, "alpha_x", where);
    const json fadaptive = get_field<json>(f, "adaptive", where);
    reject_unknown(fadaptive, {"gamma"}, where);
    pf.params.adaptive.gamma = get_field<double>(fadaptive, "gamma", where);
    pf.params.rate = lif_from_json(get_field<json>(f, "rate", where), where);
    pf.params.time = lif_from_json(get_field<json>(f, "time", where), where);
    const json cfar = get_field<json>(f, "cfar", where);
    reject_unknown(cfar, {"alpha", "offset"}, where);
    pf.params.cfar.alpha = get_field<double>(cfar, "alpha", where);
    pf.params.cfar.offset = get_field<double>(cfar, "offset", where);
    apply_params(pf, spec.base_grid, spec.fixed);
  }
  return spec;
}

}  // namespace nrr
