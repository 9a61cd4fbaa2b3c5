#include "facadeseg/infer/tiling.hpp"

#include <cmath>
#include <utility>

#include "facadeseg/common.hpp"

namespace fseg::infer {

TileLayout plan_tiles(int width, int tile_w, int min_overlap) {
  if (width < 1) throw ValidationError("tile planning needs width >= 1");
  if (tile_w < 1) throw ValidationError("tile width must be >= 1");
  if (min_overlap < 0 || min_overlap >= tile_w)
    throw ValidationError("minimum overlap must lie in [0, tile width)");

  TileLayout layout;
  layout.tile_w = tile_w;
  layout.image_w = width;
  if (width <= tile_w) {
    layout.offsets = {0};
    layout.pad = tile_w - width;
    return layout;
  }
  // Even spacing keeps every consecutive gap at most tile_w - min_overlap.
  int stride = tile_w - min_overlap;
  int n = 1 + (width - tile_w + stride - 1) / stride;
  for (int i = 0; i < n; ++i)
    layout.offsets.push_back(
        static_cast<int>(std::llround(static_cast<double>(i) * (width - tile_w) / (n - 1))));
  return layout;
}

int reflect_index(int x, int width) {
  if (width == 1) return 0;
  int period = 2 * (width - 1);
  int m = x % period;
  if (m < 0) m += period;
  return m < width ? m : period - m;
}

FloatPlane extract_reflected(const FloatPlane& src, const TileLayout& layout, int index) {
  if (index < 0 || index >= static_cast<int>(layout.offsets.size()))
    throw ValidationError("tile index out of range");
  if (src.width != layout.image_w) throw ValidationError("plane width does not match the layout");
  FloatPlane tile(layout.tile_w, src.height);
  int offset = layout.offsets[index];
  for (int y = 0; y < src.height; ++y)
    for (int j = 0; j < layout.tile_w; ++j)
      tile.at(j, y) = src.at(reflect_index(offset + j, src.width), y);
  return tile;
}

TileMerger::TileMerger(TileLayout layout, int height, int channels)
    : layout_(std::move(layout)),
      height_(height),
      channels_(channels),
      sum_(static_cast<std::size_t>(channels) * height * layout_.image_w, 0.0),
      cover_(layout_.image_w, 0) {
  if (height < 1 || channels < 1) throw ValidationError("merger needs height and channels >= 1");
}

void TileMerger::add_tile(int channel, int offset, const FloatPlane& tile) {
  if (channel < 0 || channel >= channels_) throw ValidationError("merge channel out of range");
  if (tile.width != layout_.tile_w || tile.height != height_)
    throw ValidationError("tile dimensions do not match the layout");
  std::size_t base = static_cast<std::size_t>(channel) * height_ * layout_.image_w;
  for (int y = 0; y < height_; ++y)
    for (int j = 0; j < layout_.tile_w; ++j) {
      int x = offset + j;
      if (x >= layout_.image_w) break;
      sum_[base + static_cast<std::size_t>(y) * layout_.image_w + x] +=
          static_cast<double>(tile.at(j, y));
    }
}

void TileMerger::note_cover(int offset) {
  for (int j = 0; j < layout_.tile_w && offset + j < layout_.image_w; ++j) ++cover_[offset + j];
}

std::vector<FloatPlane> TileMerger::average() const {
  for (int x = 0; x < layout_.image_w; ++x)
    if (cover_[x] == 0) throw ValidationError("column never covered by a tile");
  std::vector<FloatPlane> out;
  out.reserve(channels_);
  for (int c = 0; c < channels_; ++c) {
    FloatPlane plane(layout_.image_w, height_);
    std::size_t base = static_cast<std::size_t>(c) * height_ * layout_.image_w;
    for (int y = 0; y < height_; ++y)
      for (int x = 0; x < layout_.image_w; ++x)
        plane.at(x, y) = static_cast<float>(
            sum_[base + static_cast<std::size_t>(y) * layout_.image_w + x] / cover_[x]);
    out.push_back(std::move(plane));
  }
  return out;
}

}  // namespace fseg::infer
