#include "facadeseg/arch/train.hpp"

#include <filesystem>

#include <nlohmann/json.hpp>

#include "facadeseg/data/augment.hpp"
#include "facadeseg/nn/sgd.hpp"
#include "facadeseg/nn/weights_io.hpp"

namespace fseg::arch {

using ordered_json = nlohmann::ordered_json;

std::string to_json(const TrainSchedule& schedule) {
  ordered_json doc;
  doc["batch_size"] = schedule.batch_size;
  doc["seed"] = schedule.seed;
  doc["warp_disp_frac"] = schedule.warp_disp_frac;
  doc["snapshot_every"] = schedule.snapshot_every;
  doc["phases"] = ordered_json::array();
  for (const auto& phase : schedule.phases) {
    ordered_json p;
    p["name"] = phase.name;
    p["iterations"] = phase.iterations;
    p["epochs"] = phase.epochs;
    p["lr"] = phase.lr;
    p["weight_decay"] = phase.weight_decay;
    p["freeze"] = phase.freeze_prefixes;
    ordered_json mults = ordered_json::object();
    for (const auto& [prefix, mult] : phase.lr_mult_prefixes) mults[prefix] = mult;
    p["lr_mult"] = mults;
    doc["phases"].push_back(std::move(p));
  }
  return doc.dump(2);
}

TrainSchedule schedule_from_json(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const ordered_json::exception& e) {
    throw ValidationError(std::string("schedule JSON: ") + e.what());
  }
  try {
    TrainSchedule schedule;
    schedule.batch_size = doc.value("batch_size", 4);
    schedule.seed = doc.value("seed", std::uint64_t{1});
    schedule.warp_disp_frac = doc.value("warp_disp_frac", 0.0);
    schedule.snapshot_every = doc.value("snapshot_every", 50);
    for (const auto& p : doc.value("phases", ordered_json::array())) {
      TrainPhase phase;
      phase.name = p.value("name", std::string());
      phase.iterations = p.value("iterations", 0);
      phase.epochs = p.value("epochs", 0);
      phase.lr = p.value("lr", 1e-6);
      phase.weight_decay = p.value("weight_decay", 0.0);
      for (const auto& f : p.value("freeze", ordered_json::array()))
        phase.freeze_prefixes.push_back(f.get<std::string>());
      if (p.contains("lr_mult"))
        for (const auto& [prefix, mult] : p.at("lr_mult").items())
          phase.lr_mult_prefixes.emplace_back(prefix, mult.get<double>());
      schedule.phases.push_back(std::move(phase));
    }
    return schedule;
  } catch (const ordered_json::exception& e) {
    throw ValidationError(std::string("schedule JSON: ") + e.what());
  }
}

TrainSchedule compatibility_schedule(int phase1_iterations, int phase2_iterations,
                                     double base_lr, double block_lr_mult) {
  TrainSchedule schedule;
  TrainPhase p1;
  p1.name = "blocks-only";
  p1.iterations = phase1_iterations;
  p1.lr = base_lr * block_lr_mult;
  p1.freeze_prefixes = {"enc", "dec", "head"};
  schedule.phases.push_back(std::move(p1));
  TrainPhase p2;
  p2.name = "joint";
  p2.iterations = phase2_iterations;
  p2.lr = base_lr;
  p2.lr_mult_prefixes = {{"cblock", block_lr_mult}};
  schedule.phases.push_back(std::move(p2));
  return schedule;
}

namespace {

template <typename T>
struct Snapshot {
  std::vector<std::vector<T>> storages;
  std::vector<std::vector<T>> buffers;
};

template <typename T>
Snapshot<T> take_snapshot(nn::ParamStore<T>& params) {
  Snapshot<T> snap;
  for (const auto& s : params.storages()) snap.storages.push_back(s->value.data);
  for (const auto& [name, values] : params.buffers()) snap.buffers.push_back(*values);
  return snap;
}

template <typename T>
void restore_snapshot(nn::ParamStore<T>& params, const Snapshot<T>& snap) {
  auto storages = params.storages();
  for (std::size_t i = 0; i < storages.size(); ++i)
    storages[i]->value.data = snap.storages[i];
  const auto& buffers = params.buffers();
  for (std::size_t i = 0; i < buffers.size(); ++i) *buffers[i].second = snap.buffers[i];
}

}  // namespace

template <typename T>
TrainResult train(Network<T>& net, const std::vector<RgbImage>& images,
                  const std::vector<data::MultiLabelMask>& masks,
                  const LossConfig& loss_config, const TrainSchedule& schedule) {
  if (images.empty() || images.size() != masks.size())
    throw ValidationError("training needs equally many images and masks");
  if (schedule.batch_size < 1) throw ValidationError("batch size must be >= 1");
  if (schedule.snapshot_every < 1) throw ValidationError("snapshot cadence must be >= 1");
  if (schedule.warp_disp_frac < 0) throw ValidationError("warp displacement must be >= 0");
  const ArchSpec& spec = net.spec();
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (images[i].width != spec.input_w || images[i].height != spec.input_h)
      throw ValidationError("tile " + std::to_string(i) + " is " +
                            std::to_string(images[i].width) + "x" +
                            std::to_string(images[i].height) + ", network expects " +
                            std::to_string(spec.input_w) + "x" + std::to_string(spec.input_h));
    data::validate(masks[i]);
    if (masks[i].width != images[i].width || masks[i].height != images[i].height)
      throw ValidationError("tile " + std::to_string(i) + " mask dimensions differ");
    if (masks[i].vocab != spec.classes)
      throw ValidationError("tile " + std::to_string(i) + " vocabulary differs from network");
  }

  LossConfig effective = loss_config;
  if (spec.head == HeadKind::kBaseline && effective.joint_weights.empty())
    effective.joint_weights = joint_label_weights(masks);

  const int tiles = static_cast<int>(images.size());
  const int per_epoch = (tiles + schedule.batch_size - 1) / schedule.batch_size;
  Rng rng(schedule.seed);
  nn::ParamStore<T>& params = net.params();

  TrainResult result;
  Snapshot<T> good = take_snapshot(params);

  for (const auto& phase : schedule.phases) {
    if (phase.iterations < 0 || phase.epochs < 0)
      throw ValidationError("phase '" + phase.name + "': negative duration");
    if (!(phase.lr >= 0)) throw ValidationError("phase '" + phase.name + "': lr must be >= 0");
    int iterations = phase.iterations > 0 ? phase.iterations : phase.epochs * per_epoch;

    for (const auto& s : params.storages()) {
      s->frozen = false;
      s->lr_mult = T(1);
    }
    for (const auto& prefix : phase.freeze_prefixes)
      if (params.freeze_prefix(prefix) == 0)
        throw ValidationError("phase '" + phase.name + "': freeze prefix '" + prefix +
                              "' matches no parameters");
    for (const auto& [prefix, mult] : phase.lr_mult_prefixes)
      if (params.set_lr_mult_prefix(prefix, static_cast<T>(mult)) == 0)
        throw ValidationError("phase '" + phase.name + "': lr_mult prefix '" + prefix +
                              "' matches no parameters");

    for (int it = 0; it < iterations; ++it) {
      std::vector<data::AugmentResult> augmented;
      std::vector<const RgbImage*> batch_images;
      std::vector<const data::MultiLabelMask*> batch_masks;
      augmented.reserve(schedule.batch_size);
      for (int b = 0; b < schedule.batch_size; ++b) {
        int idx = rng.uniform_int(0, tiles - 1);
        if (schedule.warp_disp_frac > 0) {
          augmented.push_back(data::augment_perspective(
              images[idx], masks[idx], schedule.warp_disp_frac, rng.next_u64()));
          batch_images.push_back(&augmented.back().image);
          batch_masks.push_back(&augmented.back().mask);
        } else {
          batch_images.push_back(&images[idx]);
          batch_masks.push_back(&masks[idx]);
        }
      }
      Batch<T> batch = make_batch<T>(batch_images, batch_masks, spec.classes);

      try {
        ForwardResult<T> fwd = net.forward(batch.images, true);
        LossTerms loss = total_loss(net, fwd, batch, effective);
        params.zero_grad();
        fwd.tape->backward(loss.node);
        result.loss_curve.push_back(static_cast<double>(fwd.tape->scalar(loss.node)));
        nn::sgd_step(params, static_cast<T>(phase.lr), static_cast<T>(phase.weight_decay));
      } catch (const RuntimeFailure&) {
        restore_snapshot(params, good);
        params.zero_grad();
        result.diverged = true;
        return result;
      }

      ++result.iterations_done;
      if (result.iterations_done % schedule.snapshot_every == 0) good = take_snapshot(params);
    }
    good = take_snapshot(params);
  }
  return result;
}

template <typename T>
void save_checkpoint(const Network<T>& net, const std::string& path) {
  std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  nn::write_weights_file(net.params(), tmp.string(), to_json(net.spec()));
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw RuntimeFailure("cannot move checkpoint into place at '" + path +
                         "': " + ec.message());
  }
}

ArchSpec checkpoint_spec(const std::string& path) {
  return spec_from_json(nn::read_weights_extra(path));
}

template <typename T>
void load_checkpoint(Network<T>& net, const std::string& path) {
  nn::WeightsFile<T> file = nn::read_weights_file<T>(path);
  nn::apply_weights(net.params(), file);
}

template TrainResult train<float>(Network<float>&, const std::vector<RgbImage>&,
                                  const std::vector<data::MultiLabelMask>&, const LossConfig&,
                                  const TrainSchedule&);
template TrainResult train<double>(Network<double>&, const std::vector<RgbImage>&,
                                   const std::vector<data::MultiLabelMask>&, const LossConfig&,
                                   const TrainSchedule&);
template void save_checkpoint<float>(const Network<float>&, const std::string&);
template void save_checkpoint<double>(const Network<double>&, const std::string&);
template void load_checkpoint<float>(Network<float>&, const std::string&);
template void load_checkpoint<double>(Network<double>&, const std::string&);

}  // namespace fseg::arch
