#include "tool_common.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "facadeseg/version.hpp"

namespace fseg::tool {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void require_positive(double v, const std::string& name) {
  if (!(v > 0)) throw ValidationError("config: " + name + " must be strictly positive");
}

}  // namespace

PipelineConfig load_config(const std::string& path) {
  std::string text = read_file(path);
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const ordered_json::exception& e) {
    throw ValidationError(std::string("config JSON: ") + e.what());
  }

  PipelineConfig config;
  config.digest = fnv1a(text);
  try {
    int version = doc.value("version", 1);
    if (version != 1)
      throw ValidationError("config version " + std::to_string(version) + " is unsupported");
    config.seed = doc.value("seed", std::uint64_t{1});

    if (doc.contains("paths")) {
      const auto& p = doc.at("paths");
      config.footprints = p.value("footprints", std::string());
      config.spheres = p.value("spheres", std::string());
      config.annotations = p.value("annotations", std::string());
      config.workdir = p.value("workdir", std::string());
    }
    if (doc.contains("geometry")) {
      const auto& g = doc.at("geometry");
      config.tolerance_m = g.value("tolerance_m", config.tolerance_m);
      config.collinear_deg = g.value("collinear_deg", config.collinear_deg);
      config.wall_height_m = g.value("wall_height_m", config.wall_height_m);
      config.piece_len_m = g.value("piece_len_m", config.piece_len_m);
      config.extension_m = g.value("extension_m", config.extension_m);
      config.mpp = g.value("mpp", config.mpp);
      config.sphere_radius_m = g.value("sphere_radius_m", config.sphere_radius_m);
    }
    config.vocabulary = doc.value("vocabulary", std::vector<std::string>{});
    if (doc.contains("architecture")) {
      const auto& a = doc.at("architecture");
      config.arch_preset = a.value("preset", config.arch_preset);
      config.head = a.value("head", config.head);
      config.repeats = a.value("repeats", config.repeats);
    }
    if (doc.contains("schedule")) {
      config.schedule = arch::schedule_from_json(doc.at("schedule").dump());
      config.schedule_set = true;
    }
    if (doc.contains("edge_band")) {
      const auto& e = doc.at("edge_band");
      config.edge_band.band_m = e.value("band_m", config.edge_band.band_m);
      config.edge_band.facade_band_m = e.value("facade_band_m", config.edge_band.facade_band_m);
      config.edge_band.facade_class = e.value("facade_class", config.edge_band.facade_class);
    }
    if (doc.contains("synth")) {
      const auto& s = doc.at("synth");
      config.synth.width = s.value("width", config.synth.width);
      config.synth.height = s.value("height", config.synth.height);
      config.synth.mpp = s.value("mpp", config.synth.mpp);
      config.synth.min_cols = s.value("min_cols", config.synth.min_cols);
      config.synth.max_cols = s.value("max_cols", config.synth.max_cols);
      config.synth.min_rows = s.value("min_rows", config.synth.min_rows);
      config.synth.max_rows = s.value("max_rows", config.synth.max_rows);
      config.synth.doors = s.value("doors", config.synth.doors);
      config.synth.balconies = s.value("balconies", config.synth.balconies);
      config.synth.balcony_prob = s.value("balcony_prob", config.synth.balcony_prob);
      config.synth.sills = s.value("sills", config.synth.sills);
      config.synth.sill_prob = s.value("sill_prob", config.synth.sill_prob);
      config.synth.decoy_stripes = s.value("decoy_stripes", config.synth.decoy_stripes);
      config.synth.decoy_clearance_px =
          s.value("decoy_clearance_px", config.synth.decoy_clearance_px);
      config.synth.noise = s.value("noise", config.synth.noise);
    }
  } catch (const ordered_json::exception& e) {
    throw ValidationError(std::string("config JSON: ") + e.what());
  }

  require_positive(config.tolerance_m, "geometry.tolerance_m");
  require_positive(config.wall_height_m, "geometry.wall_height_m");
  require_positive(config.piece_len_m, "geometry.piece_len_m");
  require_positive(config.extension_m, "geometry.extension_m");
  require_positive(config.mpp, "geometry.mpp");
  require_positive(config.sphere_radius_m, "geometry.sphere_radius_m");
  return config;
}

bool is_schedule_preset(const std::string& name) {
  return name == "paper-base" || name == "compat-paper" || name == "toy" ||
         name == "compat-toy";
}

arch::TrainSchedule schedule_preset(const std::string& name) {
  if (name == "paper-base") {
    arch::TrainSchedule schedule;
    arch::TrainPhase phase;
    phase.name = "base";
    phase.epochs = 300;
    phase.lr = 1e-6;
    phase.weight_decay = 5e-4;
    schedule.phases.push_back(std::move(phase));
    return schedule;
  }
  if (name == "compat-paper") return arch::compatibility_schedule(100000, 100000, 1e-6, 100.0);
  if (name == "toy") {
    arch::TrainSchedule schedule;
    arch::TrainPhase phase;
    phase.name = "toy";
    phase.iterations = 1500;
    phase.lr = 0.02;
    schedule.phases.push_back(std::move(phase));
    return schedule;
  }
  if (name == "compat-toy") return arch::compatibility_schedule(500, 500, 0.002, 100.0);
  throw ValidationError("unknown schedule preset '" + name + "'");
}

std::uint64_t file_digest(const std::string& path) { return fnv1a(read_file(path)); }

void write_run_record(const std::string& dir, const std::string& command,
                      const PipelineConfig& config, const ordered_json& details) {
  fs::create_directories(dir);
  ordered_json record;
  record["command"] = command;
  record["version"] = kVersion;
  record["config_digest"] = config.digest ? to_hex(config.digest) : "default";
  record["seed"] = config.seed;
  record["details"] = details;
  fs::path path = fs::path(dir) / (command + ".run.json");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RuntimeFailure("cannot write run record '" + path.string() + "'");
  out << record.dump(2) << "\n";
}

namespace {

std::vector<std::string> stems_with_suffix(const std::string& dir, const std::string& suffix) {
  if (!fs::is_directory(dir)) throw ValidationError("'" + dir + "' is not a directory");
  std::vector<std::string> stems;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string name = entry.path().filename().string();
    if (name.size() > suffix.size() && name.ends_with(suffix))
      stems.push_back(name.substr(0, name.size() - suffix.size()));
  }
  std::sort(stems.begin(), stems.end());
  return stems;
}

}  // namespace

std::vector<std::string> mask_stems(const std::string& dir) {
  return stems_with_suffix(dir, ".mask.json");
}

std::vector<std::string> annotation_stems(const std::string& dir) {
  std::vector<std::string> stems = stems_with_suffix(dir, ".json");
  std::erase_if(stems, [](const std::string& s) {
    return s.ends_with(".mask") || s.ends_with(".legend") || s.ends_with(".run") ||
           s.ends_with(".probmaps");
  });
  return stems;
}

}  // namespace fseg::tool
