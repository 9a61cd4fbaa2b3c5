#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "facadeseg/image.hpp"

namespace fseg::geo {

struct Vec2 {
  double x = 0, y = 0;
  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double cross(Vec2 o) const { return x * o.y - y * o.x; }
  double norm() const { return std::sqrt(x * x + y * y); }
};

struct Vec3 {
  double x = 0, y = 0, z = 0;
};

inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }

// Closed ring in a meters-based planar CRS; the closing edge is implicit.
struct FootprintPolygon {
  std::string id;
  std::vector<Vec2> ring;
};

struct WallSegment {
  Vec2 p0, p1;
  std::string source_footprint;

  double length() const { return distance(p0, p1); }
  Vec2 direction() const {
    double len = length();
    return {(p1.x - p0.x) / len, (p1.y - p0.y) / len};
  }
};

// Vertical wall rectangle sampled on a regular pixel grid. Row 0 is the top
// of the wall, column 0 sits at the segment endpoint p0.
struct WallQuad {
  WallSegment base;
  double height_m = 40.0;
  double mpp = 0.025;
  std::string id;

  int grid_rows() const { return std::max(1, static_cast<int>(std::llround(height_m / mpp))); }
  int grid_cols() const {
    return std::max(1, static_cast<int>(std::llround(base.length() / mpp)));
  }
};

// Equirectangular panorama with pose. `heading` is the azimuth of the image
// center column, radians in [0, 2pi); zero roll/pitch is assumed.
struct Photosphere {
  std::string id;
  Vec3 center;     // z = camera height above ground
  double heading = 0.0;
  RgbImage image;
};

struct FacadeImage {
  RgbImage pixels;
  double mpp = 0.0;
  std::string quad_id;
  std::string photosphere_id;
};

}  // namespace fseg::geo
