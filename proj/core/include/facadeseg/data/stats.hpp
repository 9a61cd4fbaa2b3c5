#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>

#include "facadeseg/data/mask.hpp"

namespace fseg::data {

// Corpus-level label-value counts per class. Merging is associative, so
// per-image stats can be folded in any order.
struct ClassStats {
  std::map<std::string, std::array<std::uint64_t, 4>> counts;  // indexed by LabelValue

  void add(const MultiLabelMask& mask);
  void merge(const ClassStats& other);

  // POS pixels over all pixels of the class's planes.
  double frequency(const std::string& cls) const;
};

// weight_c = median(frequencies) / frequency_c. Even-count median is the
// midpoint of the two central values. Any zero frequency is rejected with
// the class named.
std::map<std::string, double> median_frequency_weights(const ClassStats& stats);

void save_stats(const ClassStats& stats, const std::map<std::string, double>& weights,
                const std::string& path);
std::map<std::string, double> load_weights(const std::string& path);

}  // namespace fseg::data
