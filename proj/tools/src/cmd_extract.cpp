#include <filesystem>
#include <iostream>
#include <map>

#include "facadeseg/geo/footprints.hpp"
#include "facadeseg/geo/io.hpp"
#include "facadeseg/geo/raycast.hpp"
#include "tool_common.hpp"

namespace fseg::tool {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

int run_extract(const PipelineConfig& config, const std::string& out) {
  if (config.footprints.empty()) throw ValidationError("extract needs paths.footprints");
  if (config.spheres.empty()) throw ValidationError("extract needs paths.spheres");

  std::vector<geo::FootprintPolygon> polygons =
      geo::load_footprints_geojson(config.footprints);
  std::vector<geo::SphereRecord> records = geo::load_sphere_manifest(config.spheres);

  geo::SimplifyResult simplified =
      geo::simplify_and_merge(polygons, config.tolerance_m, config.collinear_deg);
  for (const auto& warning : simplified.warnings) std::cerr << "warning: " << warning << "\n";

  std::vector<geo::WallQuad> quads;
  std::map<std::string, int> wall_index;
  for (const auto& segment : simplified.segments) {
    int w = wall_index[segment.source_footprint]++;
    std::vector<geo::WallSegment> pieces =
        geo::subdivide_and_extend(segment, config.piece_len_m, config.extension_m);
    for (std::size_t p = 0; p < pieces.size(); ++p) {
      geo::WallQuad quad;
      quad.base = pieces[p];
      quad.height_m = config.wall_height_m;
      quad.mpp = config.mpp;
      quad.id = segment.source_footprint + "_w" + std::to_string(w) + "_p" + std::to_string(p);
      quads.push_back(std::move(quad));
    }
  }

  fs::create_directories(out);
  std::vector<geo::Vec2> centers;
  centers.reserve(records.size());
  for (const auto& rec : records) centers.push_back({rec.x, rec.y});

  int written = 0, sphere_failures = 0, pairs = 0;
  std::map<std::string, geo::Photosphere> loaded;
  std::vector<std::string> failed_ids;
  for (const auto& quad : quads) {
    for (std::size_t s : geo::spheres_in_range(quad.base, centers, config.sphere_radius_m)) {
      ++pairs;
      const geo::SphereRecord& rec = records[s];
      auto it = loaded.find(rec.id);
      if (it == loaded.end()) {
        try {
          it = loaded.emplace(rec.id, geo::load_photosphere(rec)).first;
        } catch (const std::exception& e) {
          std::cerr << "warning: skipping photosphere '" << rec.id << "': " << e.what()
                    << "\n";
          ++sphere_failures;
          failed_ids.push_back(rec.id);
          loaded.emplace(rec.id, geo::Photosphere{});  // remember the failure
          continue;
        }
      }
      if (it->second.image.width == 0) {
        ++sphere_failures;
        continue;
      }
      geo::FacadeImage facade = geo::extract_facade_image(quad, it->second);
      fs::path path = fs::path(out) / (quad.id + "_" + rec.id + ".png");
      geo::save_facade_image(facade, path.string());
      ++written;
    }
  }

  ordered_json details;
  details["footprints"] = polygons.size();
  details["walls"] = simplified.segments.size();
  details["quads"] = quads.size();
  details["spheres"] = records.size();
  details["pairs_in_range"] = pairs;
  details["images_written"] = written;
  details["sphere_failures"] = sphere_failures;
  write_run_record(out, "extract", config, details);

  if (polygons.empty() || quads.empty() || pairs == 0) {
    std::cout << "extract: nothing to do (" << written << " images)\n";
    return 0;
  }
  if (written == 0 && sphere_failures > 0)
    throw RuntimeFailure("every photosphere failed to load; no images written");
  std::cout << "extract: wrote " << written << " facade images from " << quads.size()
            << " wall pieces\n";
  return 0;
}

}  // namespace fseg::tool
