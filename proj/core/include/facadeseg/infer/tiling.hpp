#pragma once

#include <vector>

#include "facadeseg/image.hpp"

namespace fseg::infer {

struct TileLayout {
  int tile_w = 512;
  int image_w = 0;           // width being covered
  std::vector<int> offsets;  // tile x origins, ascending
  int pad = 0;               // mirror padding beyond image_w (narrow images)
};

// Covers `width` with the fewest fixed-width tiles whose neighbors overlap by
// at least `min_overlap`, offsets spread evenly from 0 to width - tile_w.
// Narrower images get one tile padded with mirrored columns.
TileLayout plan_tiles(int width, int tile_w = 512, int min_overlap = 16);

// Folds x into [0, width) by reflecting at both borders without repeating
// the border sample.
int reflect_index(int x, int width);

// The tile starting at layout.offsets[index], columns past the image edge
// filled by reflection.
FloatPlane extract_reflected(const FloatPlane& src, const TileLayout& layout, int index);

// Averages overlapping tile outputs back into full-width planes. Sums are
// held in double and divided by the integer cover count, so merging tiles
// that all carry the same value returns that value bit-exactly.
class TileMerger {
 public:
  TileMerger(TileLayout layout, int height, int channels);

  // `tile` spans height x tile_w; columns beyond the image edge are dropped.
  void add_tile(int channel, int offset, const FloatPlane& tile);
  void note_cover(int offset);  // call once per tile

  std::vector<FloatPlane> average() const;

  const TileLayout& layout() const { return layout_; }

 private:
  TileLayout layout_;
  int height_;
  int channels_;
  std::vector<double> sum_;  // channels * height * image_w
  std::vector<int> cover_;   // per column
};

}  // namespace fseg::infer
