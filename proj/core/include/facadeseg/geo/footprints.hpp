#pragma once

#include <vector>

#include "facadeseg/geo/types.hpp"

namespace fseg::geo {

struct SimplifyResult {
  std::vector<WallSegment> segments;
  std::vector<std::string> warnings;  // degenerate rings, one entry per event
};

// Ramer-Douglas-Peucker on each ring (anchored at its two most distant
// vertices), then a cyclic merge of consecutive edges whose directions differ
// by less than `collinear_deg`. tolerance == 0 returns the original edges
// unchanged. A ring that degenerates below 3 vertices contributes its longest
// chord as a single segment and a warning.
SimplifyResult simplify_and_merge(const std::vector<FootprintPolygon>& polygons,
                                  double tolerance_m, double collinear_deg = 2.0);

// Splits into ceil(length / max_len) equal pieces, then extends each piece by
// `extension` at both ends along the segment direction.
std::vector<WallSegment> subdivide_and_extend(const WallSegment& segment, double max_len_m,
                                              double extension_m);

void validate(const FootprintPolygon& poly);

}  // namespace fseg::geo
