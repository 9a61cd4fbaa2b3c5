#include <algorithm>
#include <filesystem>
#include <iostream>
#include <set>

#include "facadeseg/data/stats.hpp"
#include "tool_common.hpp"

namespace fseg::tool {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

int run_rasterize(const PipelineConfig& config, const std::string& annotations_dir,
                  const std::string& out, double band_m, double facade_band_m) {
  std::string dir = !annotations_dir.empty() ? annotations_dir : config.annotations;
  if (dir.empty()) throw ValidationError("rasterize needs an annotation directory");

  data::EdgeBandConfig band = config.edge_band;
  if (band_m >= 0) band.band_m = band_m;
  if (facade_band_m >= 0) band.facade_band_m = facade_band_m;

  std::vector<std::string> stems = annotation_stems(dir);
  std::vector<data::AnnotationSet> sets;
  for (const auto& stem : stems) {
    data::AnnotationSet ann =
        data::load_annotations((fs::path(dir) / (stem + ".json")).string());
    data::validate(ann, config.vocabulary);
    sets.push_back(std::move(ann));
  }

  // Without a configured vocabulary, the corpus-wide class set defines the
  // mask planes, so every mask still shares one vocabulary.
  std::vector<std::string> vocab = config.vocabulary;
  if (vocab.empty()) {
    std::set<std::string> names;
    for (const auto& ann : sets)
      for (const auto& shape : ann.shapes) names.insert(shape.class_name);
    vocab.assign(names.begin(), names.end());
  }
  if (vocab.empty() && !sets.empty())
    throw ValidationError("annotations name no classes and no vocabulary is configured");

  fs::create_directories(out);
  data::ClassStats stats;
  int written = 0;
  for (const auto& ann : sets) {
    data::MultiLabelMask mask = data::rasterize_multilabel(ann, vocab, band);
    data::encode_mask(mask, out, ann.image_id);
    stats.add(mask);
    ++written;
  }

  if (written > 0) {
    try {
      auto weights = data::median_frequency_weights(stats);
      data::save_stats(stats, weights, (fs::path(out) / "stats.json").string());
    } catch (const ValidationError& e) {
      // A class can be absent from a small corpus; stats are advisory here.
      std::cerr << "warning: class weights not written: " << e.what() << "\n";
    }
  }

  ordered_json details;
  details["annotations"] = stems.size();
  details["masks_written"] = written;
  details["vocabulary"] = vocab;
  details["band_m"] = band.band_m;
  details["facade_band_m"] = band.facade_band_m;
  write_run_record(out, "rasterize", config, details);
  std::cout << "rasterize: wrote " << written << " masks to " << out << "\n";
  return 0;
}

}  // namespace fseg::tool
