#include "facadeseg/data/mask.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "facadeseg/common.hpp"
#include "facadeseg/image_io.hpp"

namespace fseg::data {

namespace fs = std::filesystem;
using nlohmann::json;

int MultiLabelMask::class_index(const std::string& cls) const {
  for (std::size_t i = 0; i < vocab.size(); ++i)
    if (vocab[i] == cls) return static_cast<int>(i);
  return -1;
}

GrayImage& MultiLabelMask::plane(const std::string& cls) {
  int i = class_index(cls);
  if (i < 0) throw ValidationError("unknown class '" + cls + "'");
  return planes[static_cast<std::size_t>(i)];
}

const GrayImage& MultiLabelMask::plane(const std::string& cls) const {
  int i = class_index(cls);
  if (i < 0) throw ValidationError("unknown class '" + cls + "'");
  return planes[static_cast<std::size_t>(i)];
}

void validate(const MultiLabelMask& mask) {
  if (mask.vocab.empty()) throw ValidationError("mask vocabulary is empty");
  if (mask.vocab.size() != mask.planes.size())
    throw ValidationError("mask has " + std::to_string(mask.planes.size()) + " planes for " +
                          std::to_string(mask.vocab.size()) + " classes");
  for (std::size_t c = 0; c < mask.planes.size(); ++c) {
    const auto& pl = mask.planes[c];
    if (pl.width != mask.width || pl.height != mask.height)
      throw ValidationError("class '" + mask.vocab[c] + "' plane size mismatch");
    for (int y = 0; y < pl.height; ++y)
      for (int x = 0; x < pl.width; ++x)
        if (pl.at(x, y) > EDG)
          throw ValidationError("class '" + mask.vocab[c] + "' has value " +
                                std::to_string(pl.at(x, y)) + " at (" + std::to_string(x) + ", " +
                                std::to_string(y) + ")");
  }
}

void encode_mask(const MultiLabelMask& mask, const std::string& dir,
                 const std::string& image_id) {
  validate(mask);
  fs::create_directories(dir);
  for (std::size_t c = 0; c < mask.vocab.size(); ++c)
    write_png_gray((fs::path(dir) / (image_id + "." + mask.vocab[c] + ".png")).string(),
                   mask.planes[c]);
  json manifest{{"image_id", image_id},
                {"width", mask.width},
                {"height", mask.height},
                {"classes", mask.vocab}};
  std::string mpath = (fs::path(dir) / (image_id + ".mask.json")).string();
  std::ofstream out(mpath);
  if (!out) throw RuntimeFailure("cannot write " + mpath);
  out << manifest.dump(2) << "\n";
}

MultiLabelMask decode_mask(const std::string& dir, const std::string& image_id) {
  std::string mpath = (fs::path(dir) / (image_id + ".mask.json")).string();
  std::ifstream in(mpath);
  if (!in) throw ValidationError("cannot open " + mpath);
  json manifest;
  try {
    in >> manifest;
  } catch (const json::parse_error& e) {
    throw ValidationError(mpath + ": " + e.what());
  }
  if (!manifest.contains("classes") || manifest["classes"].empty())
    throw ValidationError(mpath + ": vocabulary must be non-empty");

  MultiLabelMask mask;
  mask.vocab = manifest["classes"].get<std::vector<std::string>>();
  mask.width = manifest.value("width", 0);
  mask.height = manifest.value("height", 0);
  for (const auto& cls : mask.vocab) {
    std::string ppath = (fs::path(dir) / (image_id + "." + cls + ".png")).string();
    GrayImage pl = read_png_gray(ppath);
    if (pl.width != mask.width || pl.height != mask.height)
      throw ValidationError(ppath + ": size does not match manifest");
    for (int y = 0; y < pl.height; ++y)
      for (int x = 0; x < pl.width; ++x)
        if (pl.at(x, y) > EDG)
          throw ValidationError(ppath + ": value " + std::to_string(pl.at(x, y)) + " at (" +
                                std::to_string(x) + ", " + std::to_string(y) + ")");
    mask.planes.push_back(std::move(pl));
  }
  return mask;
}

}  // namespace fseg::data
