#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>

#include "facadeseg/eval/metrics.hpp"
#include "facadeseg/infer/predict.hpp"
#include "tool_common.hpp"

namespace fseg::tool {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

FloatPlane pos_from_mask(const data::MultiLabelMask& mask, const std::string& cls) {
  const GrayImage& plane = mask.plane(cls);
  FloatPlane pos(mask.width, mask.height);
  for (std::size_t i = 0; i < plane.px.size(); ++i)
    pos.px[i] = plane.px[i] == data::POS ? 1.0f : 0.0f;
  return pos;
}

}  // namespace

int run_eval(const PipelineConfig& config, const EvalFlags& flags) {
  if (flags.pred_dir.empty() == flags.pred_masks_dir.empty())
    throw ValidationError("eval needs exactly one of --pred or --pred-masks");
  if (flags.gt_dir.empty() == flags.annotations_dir.empty())
    throw ValidationError("eval needs exactly one of --gt or --annotations");
  if (flags.include_edges && flags.annotations_dir.empty())
    throw ValidationError(
        "--include-edges recovers classes under edge bands from annotations; pass "
        "--annotations");
  if (flags.boundary_px < 0) throw ValidationError("--boundary-px must be >= 0");

  // Ground truth: pre-rasterized masks, or annotations rasterized here. The
  // edge-inclusive mode rasterizes with zero-width bands so banded pixels
  // keep their underlying POS/NEG state.
  std::vector<std::pair<std::string, data::MultiLabelMask>> gts;
  if (!flags.gt_dir.empty()) {
    for (const auto& stem : mask_stems(flags.gt_dir))
      gts.emplace_back(stem, data::decode_mask(flags.gt_dir, stem));
  } else {
    data::EdgeBandConfig band = config.edge_band;
    if (flags.include_edges) {
      band.band_m = 0;
      band.facade_band_m = 0;
    }
    std::vector<data::AnnotationSet> sets;
    for (const auto& stem : annotation_stems(flags.annotations_dir))
      sets.push_back(data::load_annotations(
          (fs::path(flags.annotations_dir) / (stem + ".json")).string()));
    std::vector<std::string> vocab = config.vocabulary;
    if (vocab.empty()) {
      std::set<std::string> names;
      for (const auto& ann : sets)
        for (const auto& shape : ann.shapes) names.insert(shape.class_name);
      vocab.assign(names.begin(), names.end());
    }
    for (const auto& ann : sets)
      gts.emplace_back(ann.image_id, data::rasterize_multilabel(ann, vocab, band));
  }
  if (gts.empty()) throw ValidationError("no ground truth to evaluate");

  std::vector<std::string> vocab = gts[0].second.vocab;
  eval::EvalOptions opts;
  opts.boundary_px = flags.boundary_px;

  std::vector<eval::ClassCounts> counts(vocab.size());
  int images = 0;
  for (const auto& [stem, gt] : gts) {
    if (gt.vocab != vocab) throw ValidationError("ground truth vocabularies differ");
    if (!flags.pred_dir.empty()) {
      infer::ProbabilityMaps maps = infer::load_probability_maps(flags.pred_dir, stem);
      for (std::size_t k = 0; k < vocab.size(); ++k) {
        int pk = -1;
        for (std::size_t j = 0; j < maps.vocab.size(); ++j)
          if (maps.vocab[j] == vocab[k]) pk = static_cast<int>(j);
        if (pk < 0)
          throw ValidationError("prediction for '" + stem + "' lacks class '" + vocab[k] + "'");
        if (maps.classes[pk].pos.width == 0)
          throw ValidationError("prediction for '" + stem + "' is not renormalized");
        FloatPlane pos = resize_bilinear(maps.classes[pk].pos, gt.width, gt.height);
        counts[k] += eval::evaluate_class(pos, gt, vocab[k], opts);
      }
    } else {
      data::MultiLabelMask pred = data::decode_mask(flags.pred_masks_dir, stem);
      if (pred.width != gt.width || pred.height != gt.height)
        throw ValidationError("prediction mask for '" + stem + "' has different dimensions");
      for (std::size_t k = 0; k < vocab.size(); ++k)
        counts[k] += eval::evaluate_class(pos_from_mask(pred, vocab[k]), gt, vocab[k], opts);
    }
    ++images;
  }

  eval::MetricsReport report{vocab, counts};
  std::string out = !flags.out.empty() ? flags.out : (config.workdir.empty() ? "." : config.workdir);
  fs::create_directories(out);
  std::string json = eval::report_json(report);
  std::string csv = eval::report_csv(report);
  {
    std::ofstream jout(fs::path(out) / "report.json", std::ios::binary);
    if (!jout) throw RuntimeFailure("cannot write report in '" + out + "'");
    jout << json << "\n";
    std::ofstream cout_(fs::path(out) / "report.csv", std::ios::binary);
    cout_ << csv;
  }

  ordered_json details;
  details["images"] = images;
  details["boundary_px"] = flags.boundary_px;
  details["include_edges"] = flags.include_edges;
  details["classes"] = vocab;
  write_run_record(out, "eval", config, details);

  std::cout << csv;
  return 0;
}

}  // namespace fseg::tool
