#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <string>

#include "facadeseg/common.hpp"
#include "facadeseg/image.hpp"

namespace fseg::test {

// Unique scratch directory, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("fseg_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline RgbImage random_rgb(int w, int h, std::uint64_t seed) {
  Rng rng(seed);
  RgbImage img(w, h);
  for (auto& b : img.data) b = static_cast<std::uint8_t>(rng.uniform_int(0, 255));
  return img;
}

inline FloatPlane random_plane(int w, int h, std::uint64_t seed) {
  Rng rng(seed);
  FloatPlane plane(w, h);
  for (auto& v : plane.px) v = static_cast<float>(rng.uniform());
  return plane;
}

}  // namespace fseg::test
