#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "facadeseg/version.hpp"
#include "tool_common.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out;
  std::int64_t seed = -1;
};

void add_common(CLI::App* cmd, CommonFlags& common) {
  cmd->add_option("--config", common.config_path, "pipeline config JSON");
  cmd->add_option("--out", common.out, "output directory");
  cmd->add_option("--seed", common.seed, "seed override");
}

fseg::tool::PipelineConfig resolve_config(const CommonFlags& common) {
  fseg::tool::PipelineConfig config;
  if (!common.config_path.empty()) config = fseg::tool::load_config(common.config_path);
  if (common.seed >= 0) config.seed = static_cast<std::uint64_t>(common.seed);
  return config;
}

std::string out_or_workdir(const CommonFlags& common,
                           const fseg::tool::PipelineConfig& config) {
  if (!common.out.empty()) return common.out;
  if (!config.workdir.empty()) return config.workdir;
  return ".";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"facade segmentation pipeline"};
  app.set_version_flag("--version", fseg::kVersion);
  app.require_subcommand(1);

  int exit_code = 0;
  CommonFlags common;

  auto* extract = app.add_subcommand("extract", "footprints + photospheres to facade images");
  CommonFlags extract_common;
  add_common(extract, extract_common);
  std::string footprints, spheres;
  double radius = -1;
  extract->add_option("--footprints", footprints, "GeoJSON footprint file");
  extract->add_option("--spheres", spheres, "photosphere manifest");
  extract->add_option("--radius", radius, "max sphere distance, meters");
  extract->callback([&] {
    auto config = resolve_config(extract_common);
    if (!footprints.empty()) config.footprints = footprints;
    if (!spheres.empty()) config.spheres = spheres;
    if (radius > 0) config.sphere_radius_m = radius;
    exit_code = fseg::tool::run_extract(config, out_or_workdir(extract_common, config));
  });

  auto* synth = app.add_subcommand("synth", "generate a synthetic facade corpus");
  CommonFlags synth_common;
  add_common(synth, synth_common);
  int count = 8;
  int decoys = -1;
  synth->add_option("--count", count, "number of facades");
  synth->add_option("--decoys", decoys, "decoy stripes per facade");
  synth->callback([&] {
    auto config = resolve_config(synth_common);
    if (decoys >= 0) config.synth.decoy_stripes = decoys;
    exit_code = fseg::tool::run_synth(config, count, out_or_workdir(synth_common, config));
  });

  auto* rasterize = app.add_subcommand("rasterize", "annotations to label masks");
  CommonFlags rasterize_common;
  add_common(rasterize, rasterize_common);
  std::string annotations;
  double band_m = -1, facade_band_m = -1;
  rasterize->add_option("--annotations", annotations, "annotation JSON directory");
  rasterize->add_option("--band-m", band_m, "edge band half-width override, meters");
  rasterize->add_option("--facade-band-m", facade_band_m,
                        "facade vertical band override, meters");
  rasterize->callback([&] {
    auto config = resolve_config(rasterize_common);
    exit_code = fseg::tool::run_rasterize(config, annotations,
                                          out_or_workdir(rasterize_common, config), band_m,
                                          facade_band_m);
  });

  auto* train = app.add_subcommand("train", "train a network on image + mask tiles");
  CommonFlags train_common;
  add_common(train, train_common);
  fseg::tool::TrainFlags train_flags;
  std::string arch_preset, head;
  train->add_option("--data", train_flags.data_dir, "directory of tiles and masks")
      ->required();
  train->add_option("--images", train_flags.images_dir,
                    "directory of tile images when kept apart from the masks");
  train->add_option("--schedule", train_flags.schedule, "schedule preset name or JSON file");
  train->add_option("--init", train_flags.init_checkpoint, "checkpoint to refine from");
  train->add_option("--iterations", train_flags.iterations, "total iteration override");
  train->add_option("--arch", arch_preset, "architecture preset (toy, small, paper)");
  train->add_option("--head", head, "head kind (baseline, multihead, separable, compatibility)");
  train->callback([&] {
    auto config = resolve_config(train_common);
    if (!arch_preset.empty()) config.arch_preset = arch_preset;
    if (!head.empty()) config.head = head;
    train_flags.out = out_or_workdir(train_common, config);
    exit_code = fseg::tool::run_train(config, train_flags);
  });

  auto* infer = app.add_subcommand("infer", "predict probability maps for one image");
  CommonFlags infer_common;
  add_common(infer, infer_common);
  fseg::tool::InferFlags infer_flags;
  infer->add_option("--weights", infer_flags.weights, "checkpoint file")->required();
  infer->add_option("--image", infer_flags.image, "input image")->required();
  infer->add_option("--composite", infer_flags.composite,
                    "single-label composite: 'ecp' or comma-separated class order");
  infer->callback([&] {
    auto config = resolve_config(infer_common);
    infer_flags.out = out_or_workdir(infer_common, config);
    exit_code = fseg::tool::run_infer(config, infer_flags);
  });

  auto* eval = app.add_subcommand("eval", "score predictions against ground truth");
  CommonFlags eval_common;
  add_common(eval, eval_common);
  fseg::tool::EvalFlags eval_flags;
  eval->add_option("--pred", eval_flags.pred_dir, "probability-map directory");
  eval->add_option("--pred-masks", eval_flags.pred_masks_dir,
                   "label masks used as hard predictions");
  eval->add_option("--gt", eval_flags.gt_dir, "ground-truth mask directory");
  eval->add_option("--annotations", eval_flags.annotations_dir,
                   "ground-truth annotations, rasterized on the fly");
  eval->add_option("--boundary-px", eval_flags.boundary_px, "boundary exclusion width");
  eval->add_flag("--include-edges", eval_flags.include_edges,
                 "score edge-banded pixels as their underlying class");
  eval->callback([&] {
    auto config = resolve_config(eval_common);
    eval_flags.out = out_or_workdir(eval_common, config);
    exit_code = fseg::tool::run_eval(config, eval_flags);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const fseg::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const fseg::RuntimeFailure& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}
