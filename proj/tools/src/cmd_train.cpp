#include <filesystem>
#include <fstream>
#include <iostream>

#include "facadeseg/image_io.hpp"
#include "tool_common.hpp"

namespace fseg::tool {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

arch::TrainSchedule resolve_schedule(const PipelineConfig& config, const TrainFlags& flags) {
  arch::TrainSchedule schedule;
  if (!flags.schedule.empty()) {
    if (is_schedule_preset(flags.schedule)) {
      schedule = schedule_preset(flags.schedule);
    } else {
      std::ifstream in(flags.schedule, std::ios::binary);
      if (!in) throw ValidationError("cannot open schedule '" + flags.schedule + "'");
      std::string text((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
      schedule = arch::schedule_from_json(text);
    }
  } else if (config.schedule_set) {
    schedule = config.schedule;
  } else {
    schedule = schedule_preset("toy");
  }
  schedule.seed = config.seed;

  if (flags.iterations >= 0) {
    if (schedule.phases.empty()) throw ValidationError("schedule has no phases");
    if (schedule.phases.size() == 1) {
      schedule.phases[0].iterations = flags.iterations;
      schedule.phases[0].epochs = 0;
    } else {
      // Proportional rescale; the remainder lands on the last phase.
      int total = 0;
      for (const auto& p : schedule.phases) {
        if (p.iterations <= 0)
          throw ValidationError("--iterations needs iteration-based phases to rescale");
        total += p.iterations;
      }
      int assigned = 0;
      for (std::size_t i = 0; i + 1 < schedule.phases.size(); ++i) {
        auto& p = schedule.phases[i];
        p.iterations = static_cast<int>(static_cast<long long>(flags.iterations) *
                                        p.iterations / total);
        assigned += p.iterations;
      }
      schedule.phases.back().iterations = flags.iterations - assigned;
      schedule.phases.back().epochs = 0;
    }
  }
  return schedule;
}

}  // namespace

int run_train(const PipelineConfig& config, const TrainFlags& flags) {
  if (flags.data_dir.empty()) throw ValidationError("train needs --data");
  std::vector<std::string> stems = mask_stems(flags.data_dir);
  if (stems.empty())
    throw ValidationError("no '<id>.mask.json' masks under '" + flags.data_dir + "'");

  std::string images_dir = flags.images_dir.empty() ? flags.data_dir : flags.images_dir;
  std::vector<RgbImage> images;
  std::vector<data::MultiLabelMask> masks;
  for (const auto& stem : stems) {
    masks.push_back(data::decode_mask(flags.data_dir, stem));
    images.push_back(read_image((fs::path(images_dir) / (stem + ".png")).string()));
  }
  for (std::size_t i = 1; i < masks.size(); ++i)
    if (masks[i].vocab != masks[0].vocab)
      throw ValidationError("masks disagree on vocabulary ('" + stems[i] + "')");

  std::vector<std::string> vocab = masks[0].vocab;
  if (!config.vocabulary.empty() && config.vocabulary != vocab)
    throw ValidationError("configured vocabulary differs from the training masks");

  arch::ArchSpec spec =
      arch::preset(config.arch_preset, arch::head_from_name(config.head), vocab);
  spec.repeats = config.repeats;
  arch::Network<float> net(spec);

  if (!flags.init_checkpoint.empty()) {
    arch::ArchSpec source_spec = arch::checkpoint_spec(flags.init_checkpoint);
    arch::Network<float> source(source_spec);
    arch::load_checkpoint(source, flags.init_checkpoint);
    arch::init_refinement(net, source, config.seed);
  } else {
    arch::init_params(net, config.seed);
  }

  arch::TrainSchedule schedule = resolve_schedule(config, flags);
  arch::TrainResult result = arch::train(net, images, masks, arch::LossConfig{}, schedule);

  std::string out = !flags.out.empty() ? flags.out : (config.workdir.empty() ? "." : config.workdir);
  fs::create_directories(out);
  arch::save_checkpoint(net, (fs::path(out) / "weights.fsw").string());

  ordered_json curve;
  curve["iterations"] = result.iterations_done;
  curve["diverged"] = result.diverged;
  curve["loss"] = result.loss_curve;
  std::ofstream loss_out(fs::path(out) / "loss.json", std::ios::binary);
  if (!loss_out) throw RuntimeFailure("cannot write loss curve in '" + out + "'");
  loss_out << curve.dump(2) << "\n";

  ordered_json details;
  details["data"] = flags.data_dir;
  details["tiles"] = stems.size();
  details["architecture"] = ordered_json::parse(arch::to_json(spec));
  details["schedule"] = ordered_json::parse(arch::to_json(schedule));
  details["iterations_done"] = result.iterations_done;
  details["diverged"] = result.diverged;
  if (!result.loss_curve.empty()) details["final_loss"] = result.loss_curve.back();
  write_run_record(out, "train", config, details);

  if (result.diverged) {
    std::cerr << "train: diverged after " << result.iterations_done
              << " iterations; last snapshot kept\n";
    throw RuntimeFailure("training diverged");
  }
  std::cout << "train: " << result.iterations_done << " iterations";
  if (!result.loss_curve.empty()) std::cout << ", final loss " << result.loss_curve.back();
  std::cout << ", weights at " << (fs::path(out) / "weights.fsw").string() << "\n";
  return 0;
}

}  // namespace fseg::tool
