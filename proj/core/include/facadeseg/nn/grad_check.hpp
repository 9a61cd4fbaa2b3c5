#pragma once

#include <functional>
#include <string>
#include <vector>

#include "facadeseg/nn/param.hpp"

namespace fseg::nn {

struct GradCheckConfig {
  double step = 1e-3;
  double tolerance = 1e-4;
  int samples_per_param = 5;  // coordinates probed per storage; 0 = all
  std::uint64_t seed = 20240915;
};

struct GradCheckReport {
  bool pass = false;
  double max_rel_error = 0;
  std::string worst_param;
  int coordinates_checked = 0;
  std::vector<std::string> failures;
};

// `loss_fn` builds a fresh graph from the current parameter values, runs
// backward, and returns the loss. grad_check runs it once for the analytic
// gradients (after zeroing), then probes sampled coordinates with central
// differences. Relative error = |a - n| / max(|a| + |n|, 1e-4). The callback
// is evaluated twice up front; differing losses mean a non-deterministic
// graph, which is rejected.
GradCheckReport grad_check(ParamStore<double>& params,
                           const std::function<double()>& loss_fn,
                           const GradCheckConfig& config = {});

}  // namespace fseg::nn
