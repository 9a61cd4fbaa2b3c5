#include <filesystem>
#include <iostream>
#include <sstream>

#include "facadeseg/image_io.hpp"
#include "facadeseg/infer/predict.hpp"
#include "tool_common.hpp"

namespace fseg::tool {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

std::vector<std::string> split_classes(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream stream(csv);
  std::string item;
  while (std::getline(stream, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

}  // namespace

int run_infer(const PipelineConfig& config, const InferFlags& flags) {
  if (flags.weights.empty()) throw ValidationError("infer needs --weights");
  if (flags.image.empty()) throw ValidationError("infer needs --image");
  std::string out = !flags.out.empty() ? flags.out : (config.workdir.empty() ? "." : config.workdir);

  arch::ArchSpec spec = arch::checkpoint_spec(flags.weights);
  arch::Network<float> net(spec);
  arch::load_checkpoint(net, flags.weights);

  RgbImage image = read_image(flags.image);
  std::string stem = fs::path(flags.image).stem().string();
  fs::create_directories(out);

  ordered_json details;
  details["weights"] = flags.weights;
  details["weights_digest"] = to_hex(file_digest(flags.weights));
  details["image"] = flags.image;
  details["image_digest"] = to_hex(file_digest(flags.image));

  if (spec.head == arch::HeadKind::kBaseline) {
    infer::JointMaps maps = infer::predict_joint(net, image);
    infer::save_label_image(maps.argmax, maps.labels,
                            (fs::path(out) / (stem + ".labels.png")).string());
    for (std::size_t l = 0; l < maps.labels.size(); ++l)
      write_f32_blob((fs::path(out) / (stem + "." + maps.labels[l] + ".joint.f32")).string(),
                     maps.probs[l]);
    details["mode"] = "joint";
    details["scale"] = maps.scale;
    if (!flags.composite.empty())
      throw ValidationError("--composite applies to per-class networks only");
  } else {
    infer::ProbabilityMaps maps = infer::predict_image(net, image);
    infer::renormalize_pos_neg(maps);
    infer::save_probability_maps(maps, out, stem);
    details["mode"] = "multilabel";
    details["scale"] = maps.scale;
    if (!flags.composite.empty()) {
      std::vector<std::string> order = flags.composite == "ecp"
                                           ? infer::ecp_composite_order()
                                           : split_classes(flags.composite);
      GrayImage labels = infer::composite_single_label(maps, order);
      infer::save_label_image(labels, order,
                              (fs::path(out) / (stem + ".composite.png")).string());
      details["composite"] = order;
    }
  }

  write_run_record(out, "infer", config, details);
  std::cout << "infer: outputs for '" << stem << "' in " << out << "\n";
  return 0;
}

}  // namespace fseg::tool
