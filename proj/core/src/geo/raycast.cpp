#include "facadeseg/geo/raycast.hpp"

#include <algorithm>
#include <cmath>

#include "facadeseg/common.hpp"
#include "facadeseg/image.hpp"

namespace fseg::geo {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

Vec2 project_direction(Vec3 dir, double heading_rad, int sphere_w, int sphere_h) {
  double horiz = std::sqrt(dir.x * dir.x + dir.y * dir.y);
  double norm = std::sqrt(horiz * horiz + dir.z * dir.z);
  if (norm == 0.0) throw ValidationError("cannot project zero direction");

  // Azimuth relative to heading, wrapped to (-pi, pi]. +x east, +y north;
  // heading 0 means the sphere's image center column looks north.
  double azimuth = std::atan2(dir.x, dir.y) - heading_rad;
  while (azimuth <= -kPi) azimuth += 2.0 * kPi;
  while (azimuth > kPi) azimuth -= 2.0 * kPi;
  double elevation = std::asin(dir.z / norm);

  double u = (azimuth + kPi) / (2.0 * kPi) * sphere_w;
  double v = (kPi / 2.0 - elevation) / kPi * sphere_h;
  if (u >= sphere_w) u -= sphere_w;
  return {u, v};
}

FacadeImage extract_facade_image(const WallQuad& quad, const Photosphere& sphere) {
  if (sphere.image.width <= 0 || sphere.image.height <= 0)
    throw ValidationError("photosphere " + sphere.id + " has no image");
  if (quad.mpp <= 0) throw ValidationError("quad " + quad.id + ": mpp must be positive");
  if (quad.height_m <= 0) throw ValidationError("quad " + quad.id + ": height must be positive");
  double len = quad.base.length();
  if (len <= 0) throw ValidationError("quad " + quad.id + ": base segment has zero length");

  int rows = quad.grid_rows();
  int cols = quad.grid_cols();
  Vec2 dir = quad.base.direction();

  FacadeImage out;
  out.pixels = RgbImage(cols, rows);
  out.mpp = quad.mpp;
  out.quad_id = quad.id;
  out.photosphere_id = sphere.id;

  for (int i = 0; i < rows; ++i) {
    double z = quad.height_m - (i + 0.5) * quad.mpp;
    for (int j = 0; j < cols; ++j) {
      Vec2 ground = quad.base.p0 + dir * ((j + 0.5) * quad.mpp);
      Vec3 ray{ground.x - sphere.center.x, ground.y - sphere.center.y, z - sphere.center.z};
      Vec2 uv = project_direction(ray, sphere.heading, sphere.image.width, sphere.image.height);
      auto rgb = sample_bilinear_wrap_x(sphere.image, uv.x, uv.y);
      out.pixels.set(j, i, clamp_u8(rgb[0]), clamp_u8(rgb[1]), clamp_u8(rgb[2]));
    }
  }
  return out;
}

double segment_distance(Vec2 point, const WallSegment& segment) {
  Vec2 a = segment.p0, ab = segment.p1 - segment.p0;
  double len2 = ab.dot(ab);
  double t = len2 > 0.0 ? std::clamp((point - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return distance(point, a + ab * t);
}

std::vector<std::size_t> spheres_in_range(const WallSegment& segment,
                                          const std::vector<Vec2>& centers,
                                          double max_dist_m) {
  std::vector<std::size_t> hits;
  for (std::size_t i = 0; i < centers.size(); ++i)
    if (segment_distance(centers[i], segment) <= max_dist_m) hits.push_back(i);
  return hits;
}

std::vector<std::size_t> spheres_in_range(const WallSegment& segment,
                                          const std::vector<Photosphere>& spheres,
                                          double max_dist_m) {
  std::vector<Vec2> centers;
  centers.reserve(spheres.size());
  for (const auto& s : spheres) centers.push_back({s.center.x, s.center.y});
  return spheres_in_range(segment, centers, max_dist_m);
}

}  // namespace fseg::geo
