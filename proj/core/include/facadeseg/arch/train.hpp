#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "facadeseg/arch/loss.hpp"
#include "facadeseg/arch/network.hpp"

namespace fseg::arch {

struct TrainPhase {
  std::string name;    // log label only
  int iterations = 0;  // 0 derives the count from epochs
  int epochs = 0;      // one epoch = ceil(tiles / batch_size) iterations
  double lr = 1e-6;
  double weight_decay = 0.0;
  std::vector<std::string> freeze_prefixes;
  std::vector<std::pair<std::string, double>> lr_mult_prefixes;
};

struct TrainSchedule {
  std::vector<TrainPhase> phases;
  int batch_size = 4;
  std::uint64_t seed = 1;
  double warp_disp_frac = 0.0;  // perspective augmentation strength, 0 = off
  int snapshot_every = 50;      // recovery snapshot cadence, iterations
};

std::string to_json(const TrainSchedule& schedule);
TrainSchedule schedule_from_json(const std::string& text);

// Two-phase refinement schedule: the recurrent blocks train alone at a high
// rate while everything upstream is frozen, then the whole network resumes
// with the block rate still boosted.
TrainSchedule compatibility_schedule(int phase1_iterations, int phase2_iterations,
                                     double base_lr = 1e-6, double block_lr_mult = 100.0);

struct TrainResult {
  std::vector<double> loss_curve;  // one entry per completed iteration
  int iterations_done = 0;
  bool diverged = false;  // stopped on non-finite loss or gradients
};

// Runs the phases in order against uniformly resampled batches. Frozen
// parameters receive no updates; a non-finite loss or gradient restores the
// last snapshot and stops. Baseline networks with empty
// `loss_config.joint_weights` get median-frequency weights from `masks`.
// Deterministic for a fixed schedule seed.
template <typename T>
TrainResult train(Network<T>& net, const std::vector<RgbImage>& images,
                  const std::vector<data::MultiLabelMask>& masks,
                  const LossConfig& loss_config, const TrainSchedule& schedule);

// Weights file bridges. Saves are atomic (write to a sibling temp file, then
// rename); the architecture description travels in the `extra` document so a
// checkpoint is self-describing.
template <typename T>
void save_checkpoint(const Network<T>& net, const std::string& path);

ArchSpec checkpoint_spec(const std::string& path);

template <typename T>
void load_checkpoint(Network<T>& net, const std::string& path);

}  // namespace fseg::arch
