#include "facadeseg/data/stats.hpp"

#include <algorithm>
#include <fstream>
#include <vector>

#include <json.hpp>

#include "facadeseg/common.hpp"

namespace fseg::data {

using nlohmann::json;

void ClassStats::add(const MultiLabelMask& mask) {
  for (std::size_t c = 0; c < mask.vocab.size(); ++c) {
    auto& bins = counts[mask.vocab[c]];
    for (std::uint8_t v : mask.planes[c].px) {
      if (v > EDG) throw ValidationError("mask value out of range in class " + mask.vocab[c]);
      ++bins[v];
    }
  }
}

void ClassStats::merge(const ClassStats& other) {
  for (const auto& [cls, bins] : other.counts) {
    auto& mine = counts[cls];
    for (int v = 0; v < 4; ++v) mine[v] += bins[v];
  }
}

double ClassStats::frequency(const std::string& cls) const {
  auto it = counts.find(cls);
  if (it == counts.end()) throw ValidationError("no stats for class '" + cls + "'");
  std::uint64_t total = 0;
  for (std::uint64_t n : it->second) total += n;
  if (total == 0) throw ValidationError("class '" + cls + "' has no pixels");
  return static_cast<double>(it->second[POS]) / static_cast<double>(total);
}

std::map<std::string, double> median_frequency_weights(const ClassStats& stats) {
  if (stats.counts.empty()) throw ValidationError("no class statistics");
  std::vector<double> freqs;
  for (const auto& [cls, bins] : stats.counts) {
    double f = stats.frequency(cls);
    if (f == 0.0)
      throw ValidationError("class '" + cls + "' has zero frequency; weight undefined");
    freqs.push_back(f);
  }
  std::sort(freqs.begin(), freqs.end());
  std::size_t n = freqs.size();
  double median =
      n % 2 == 1 ? freqs[n / 2] : 0.5 * (freqs[n / 2 - 1] + freqs[n / 2]);

  std::map<std::string, double> weights;
  for (const auto& [cls, bins] : stats.counts) weights[cls] = median / stats.frequency(cls);
  return weights;
}

void save_stats(const ClassStats& stats, const std::map<std::string, double>& weights,
                const std::string& path) {
  json j = json::object();
  for (const auto& [cls, bins] : stats.counts) {
    json entry{{"frequency", stats.frequency(cls)}};
    auto it = weights.find(cls);
    if (it != weights.end()) entry["weight"] = it->second;
    j[cls] = entry;
  }
  std::ofstream out(path);
  if (!out) throw RuntimeFailure("cannot write " + path);
  out << j.dump(2) << "\n";
}

std::map<std::string, double> load_weights(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
  std::map<std::string, double> weights;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!it.value().contains("weight"))
      throw ValidationError(path + ": class '" + it.key() + "' has no weight");
    weights[it.key()] = it.value()["weight"].get<double>();
  }
  return weights;
}

}  // namespace fseg::data
