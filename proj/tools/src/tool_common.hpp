#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "facadeseg/arch/spec.hpp"
#include "facadeseg/arch/train.hpp"
#include "facadeseg/data/rasterize.hpp"
#include "facadeseg/data/synth.hpp"

namespace fseg::tool {

struct PipelineConfig {
  std::string footprints, spheres, annotations, workdir;

  double tolerance_m = 2.0;
  double collinear_deg = 2.0;
  double wall_height_m = 40.0;
  double piece_len_m = 40.0;
  double extension_m = 2.0;
  double mpp = 0.025;
  double sphere_radius_m = 20.0;

  std::vector<std::string> vocabulary;  // empty means command-specific default
  std::string arch_preset = "toy";
  std::string head = "multihead";
  int repeats = 2;

  arch::TrainSchedule schedule;
  bool schedule_set = false;

  std::uint64_t seed = 1;
  data::EdgeBandConfig edge_band;
  data::SynthConfig synth;

  std::uint64_t digest = 0;  // of the config file bytes; 0 when defaulted
};

PipelineConfig load_config(const std::string& path);

// Named schedules; anything else is treated as a JSON file path.
arch::TrainSchedule schedule_preset(const std::string& name);
bool is_schedule_preset(const std::string& name);

// Reproducibility record: `<dir>/<command>.run.json` with the config digest,
// seed, library version, and command-specific details.
void write_run_record(const std::string& dir, const std::string& command,
                      const PipelineConfig& config, const nlohmann::ordered_json& details);

std::uint64_t file_digest(const std::string& path);

// Stems of `<stem>.mask.json` files under dir, sorted.
std::vector<std::string> mask_stems(const std::string& dir);
// Stems of `<stem>.json` annotation files under dir (mask/legend/run sidecars
// skipped), sorted.
std::vector<std::string> annotation_stems(const std::string& dir);

int run_extract(const PipelineConfig& config, const std::string& out);
int run_synth(const PipelineConfig& config, int count, const std::string& out);
int run_rasterize(const PipelineConfig& config, const std::string& annotations_dir,
                  const std::string& out, double band_m, double facade_band_m);

struct TrainFlags {
  std::string data_dir;
  std::string images_dir;  // empty means the data directory
  std::string out;
  std::string schedule;  // preset name or JSON path; empty uses config/schedule
  std::string init_checkpoint;
  int iterations = -1;  // >= 0 overrides every phase proportionally
};
int run_train(const PipelineConfig& config, const TrainFlags& flags);

struct InferFlags {
  std::string weights;
  std::string image;
  std::string out;
  std::string composite;  // empty, "ecp", or comma-separated class order
};
int run_infer(const PipelineConfig& config, const InferFlags& flags);

struct EvalFlags {
  std::string pred_dir;        // probability maps from infer
  std::string pred_masks_dir;  // or label masks used as hard predictions
  std::string gt_dir;          // pre-rasterized masks
  std::string annotations_dir;  // or annotations rasterized on the fly
  std::string out;
  int boundary_px = 5;
  bool include_edges = false;
};
int run_eval(const PipelineConfig& config, const EvalFlags& flags);

}  // namespace fseg::tool
