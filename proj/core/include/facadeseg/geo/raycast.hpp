#pragma once

#include <cstddef>
#include <vector>

#include "facadeseg/geo/types.hpp"

namespace fseg::geo {

// Maps a world-space direction (unit not required) to pixel coordinates on an
// equirectangular photosphere of the given size. Azimuth is measured from the
// sphere's heading, increasing clockwise when viewed from above; elevation is
// positive upward. Returns {u, v} in pixels with u in [0, W), v in [0, H].
Vec2 project_direction(Vec3 dir, double heading_rad, int sphere_w, int sphere_h);

// Renders one wall quad from one photosphere. Each output pixel center is
// placed on the wall plane (row 0 at the top edge of the quad) and sampled
// from the sphere along the ray through the camera center.
FacadeImage extract_facade_image(const WallQuad& quad, const Photosphere& sphere);

// Planar distance from a point to the segment (closest point on it).
double segment_distance(Vec2 point, const WallSegment& segment);

// Indices of all centers within `max_dist_m` of the segment (planar
// distance), in input order.
std::vector<std::size_t> spheres_in_range(const WallSegment& segment,
                                          const std::vector<Vec2>& centers,
                                          double max_dist_m);
std::vector<std::size_t> spheres_in_range(const WallSegment& segment,
                                          const std::vector<Photosphere>& spheres,
                                          double max_dist_m);

}  // namespace fseg::geo
