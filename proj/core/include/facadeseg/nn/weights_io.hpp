#pragma once

#include <string>
#include <utility>
#include <vector>

#include "facadeseg/nn/param.hpp"

namespace fseg::nn {

// File layout: "FSEGW1\n", little-endian u64 manifest byte count, JSON
// manifest, then one little-endian f32 blob holding each unique storage once,
// in first-appearance order of the manifest's parameter list. The manifest
// records names, shapes, share ids, buffer values (running statistics), and
// an opaque `extra` JSON document (the architecture description).
template <typename T>
struct WeightsFile {
  struct Entry {
    std::string name;
    Shape shape;
    std::string share_id;
    Tensor<T> value;  // aliases resolved: every entry carries its values
  };
  std::vector<Entry> entries;
  std::vector<std::pair<std::string, std::vector<T>>> buffers;
  std::string extra = "{}";
};

template <typename T>
void write_weights_file(const ParamStore<T>& params, const std::string& path,
                        const std::string& extra_json = "{}");

template <typename T>
WeightsFile<T> read_weights_file(const std::string& path);

// Reads only the embedded extra document.
std::string read_weights_extra(const std::string& path);

// Strict restore: every store parameter must appear in the file with an equal
// shape, and every registered buffer must be present with a matching length.
template <typename T>
void apply_weights(ParamStore<T>& params, const WeightsFile<T>& file);

}  // namespace fseg::nn
