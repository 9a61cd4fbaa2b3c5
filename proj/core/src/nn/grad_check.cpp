#include "facadeseg/nn/grad_check.hpp"

#include <algorithm>
#include <cmath>

#include "facadeseg/common.hpp"

namespace fseg::nn {

GradCheckReport grad_check(ParamStore<double>& params,
                           const std::function<double()>& loss_fn,
                           const GradCheckConfig& config) {
  params.zero_grad();
  double l_a = loss_fn();
  auto storages = params.storages();
  std::vector<Tensor<double>> analytic;
  for (const auto& s : storages) analytic.push_back(s->grad);

  params.zero_grad();
  double l_b = loss_fn();
  if (l_a != l_b)
    throw ValidationError("grad check: graph is non-deterministic (losses " +
                          std::to_string(l_a) + " vs " + std::to_string(l_b) + ")");

  Rng rng(config.seed);
  GradCheckReport report;
  report.pass = true;

  for (std::size_t si = 0; si < storages.size(); ++si) {
    auto& s = storages[si];
    std::int64_t count = s->value.shape.count();
    std::vector<std::int64_t> coords;
    if (config.samples_per_param <= 0 || count <= config.samples_per_param) {
      for (std::int64_t i = 0; i < count; ++i) coords.push_back(i);
    } else {
      for (int i = 0; i < config.samples_per_param; ++i)
        coords.push_back(rng.uniform_int(0, static_cast<int>(count - 1)));
      std::sort(coords.begin(), coords.end());
      coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
    }

    for (std::int64_t i : coords) {
      double saved = s->value.data[i];
      s->value.data[i] = saved + config.step;
      double lp = loss_fn();
      s->value.data[i] = saved - config.step;
      double lm = loss_fn();
      s->value.data[i] = saved;

      double numeric = (lp - lm) / (2 * config.step);
      double a = analytic[si].data[i];
      double rel = std::abs(a - numeric) / std::max(std::abs(a) + std::abs(numeric), 1e-4);
      ++report.coordinates_checked;
      if (rel > report.max_rel_error) {
        report.max_rel_error = rel;
        report.worst_param = s->share_id + "[" + std::to_string(i) + "]";
      }
      if (rel >= config.tolerance) {
        report.pass = false;
        if (report.failures.size() < 16)
          report.failures.push_back(s->share_id + "[" + std::to_string(i) + "]: analytic " +
                                    std::to_string(a) + " vs numeric " +
                                    std::to_string(numeric));
      }
    }
  }
  params.zero_grad();
  return report;
}

}  // namespace fseg::nn
