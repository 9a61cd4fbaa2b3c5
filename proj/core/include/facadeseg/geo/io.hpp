#pragma once

#include <string>
#include <vector>

#include "facadeseg/geo/types.hpp"

namespace fseg::geo {

// GeoJSON FeatureCollection of Polygons, coordinates in planar meters.
// Feature `id` (top level or in properties) is required. Exterior ring only;
// an explicit closing vertex is dropped.
std::vector<FootprintPolygon> load_footprints_geojson(const std::string& path);

struct SphereRecord {
  std::string id;
  std::string image_path;  // relative paths resolve against the manifest dir
  double x = 0, y = 0;
  double z = 2.5;  // camera height above ground, meters
  double heading_deg = 0;
};

// Manifest: JSON array of records, or object with a "spheres" array.
std::vector<SphereRecord> load_sphere_manifest(const std::string& path);

// Loads the record's image and converts pose units (degrees to radians,
// wrapped into [0, 2pi)).
Photosphere load_photosphere(const SphereRecord& rec);

// PNG alongside a sidecar `<stem>.json` carrying provenance.
void save_facade_image(const FacadeImage& img, const std::string& png_path);
FacadeImage load_facade_image(const std::string& png_path);

}  // namespace fseg::geo
