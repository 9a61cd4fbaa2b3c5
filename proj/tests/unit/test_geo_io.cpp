#include <doctest.h>

#include <cmath>

#include "facadeseg/common.hpp"
#include "facadeseg/geo/io.hpp"
#include "facadeseg/image_io.hpp"
#include "helpers.hpp"

using namespace fseg;
using namespace fseg::geo;

namespace {

const char* kFootprints = R"({
  "type": "FeatureCollection",
  "features": [
    {
      "type": "Feature",
      "id": "bldg-1",
      "geometry": {
        "type": "Polygon",
        "coordinates": [[[0, 0], [20, 0], [20, 12], [0, 12], [0, 0]]]
      },
      "properties": {}
    },
    {
      "type": "Feature",
      "geometry": {
        "type": "Polygon",
        "coordinates": [[[40, 0], [55, 0], [49, 9]]]
      },
      "properties": {"id": 7}
    }
  ]
})";

}  // namespace

TEST_CASE("geojson footprints load ids and drop the closing vertex") {
  fseg::test::TempDir dir("geojson");
  fseg::test::write_text(dir.file("fp.json"), kFootprints);
  auto polys = load_footprints_geojson(dir.file("fp.json"));
  REQUIRE(polys.size() == 2);
  CHECK(polys[0].id == "bldg-1");
  CHECK(polys[0].ring.size() == 4);  // closing vertex removed
  CHECK(polys[0].ring[2].x == doctest::Approx(20.0));
  CHECK(polys[1].id == "7");  // properties fallback, number stringified
  CHECK(polys[1].ring.size() == 3);
}

TEST_CASE("geojson rejects malformed features") {
  fseg::test::TempDir dir("geobad");
  fseg::test::write_text(dir.file("noid.json"), R"({
    "type": "FeatureCollection",
    "features": [{"type": "Feature", "geometry":
      {"type": "Polygon", "coordinates": [[[0,0],[1,0],[0,1]]]}, "properties": {}}]
  })");
  CHECK_THROWS_AS((void)load_footprints_geojson(dir.file("noid.json")), ValidationError);

  fseg::test::write_text(dir.file("line.json"), R"({
    "type": "FeatureCollection",
    "features": [{"type": "Feature", "id": "x", "geometry":
      {"type": "LineString", "coordinates": [[0,0],[1,0]]}, "properties": {}}]
  })");
  CHECK_THROWS_AS((void)load_footprints_geojson(dir.file("line.json")), ValidationError);

  fseg::test::write_text(dir.file("tiny.json"), R"({
    "type": "FeatureCollection",
    "features": [{"type": "Feature", "id": "x", "geometry":
      {"type": "Polygon", "coordinates": [[[0,0],[1,0],[0,0]]]}, "properties": {}}]
  })");
  CHECK_THROWS_AS((void)load_footprints_geojson(dir.file("tiny.json")), ValidationError);
}

TEST_CASE("sphere manifest accepts both layouts and validates fields") {
  fseg::test::TempDir dir("spheres");
  fseg::test::write_text(dir.file("flat.json"), R"([
    {"id": "a", "image_path": "a.png", "x": 1, "y": 2, "z": 3, "heading_deg": 90},
    {"id": "b", "image_path": "/abs/b.png", "x": -1, "y": 0, "heading_deg": -90}
  ])");
  auto flat = load_sphere_manifest(dir.file("flat.json"));
  REQUIRE(flat.size() == 2);
  CHECK(flat[0].id == "a");
  CHECK(flat[0].z == doctest::Approx(3.0));
  CHECK(flat[1].z == doctest::Approx(2.5));  // default camera height
  CHECK(flat[0].image_path == dir.file("a.png"));
  CHECK(flat[1].image_path == "/abs/b.png");

  fseg::test::write_text(dir.file("wrapped.json"),
                         R"({"spheres": [{"id": "c", "image_path": "c.png",
                             "x": 0, "y": 0, "heading_deg": 10}]})");
  CHECK(load_sphere_manifest(dir.file("wrapped.json")).size() == 1);

  fseg::test::write_text(dir.file("noheading.json"),
                         R"([{"id": "d", "image_path": "d.png", "x": 0, "y": 0}])");
  CHECK_THROWS_WITH_AS((void)load_sphere_manifest(dir.file("noheading.json")),
                       doctest::Contains("heading_deg"), ValidationError);
}

TEST_CASE("photosphere load converts heading to wrapped radians") {
  fseg::test::TempDir dir("pose");
  write_png_rgb(dir.file("s.png"), fseg::test::random_rgb(16, 8, 3));

  SphereRecord rec;
  rec.id = "s";
  rec.image_path = dir.file("s.png");
  rec.x = 5;
  rec.y = 6;
  rec.z = 2.0;
  rec.heading_deg = 90.0;
  Photosphere sphere = load_photosphere(rec);
  CHECK(sphere.heading == doctest::Approx(3.14159265358979323846 / 2.0));
  CHECK(sphere.center.z == doctest::Approx(2.0));
  CHECK(sphere.image.width == 16);

  rec.heading_deg = -90.0;
  CHECK(load_photosphere(rec).heading == doctest::Approx(3.0 * 3.14159265358979323846 / 2.0));
}

TEST_CASE("facade image round trips with its sidecar") {
  fseg::test::TempDir dir("facade");
  FacadeImage img;
  img.pixels = fseg::test::random_rgb(10, 6, 42);
  img.mpp = 0.025;
  img.quad_id = "q9";
  img.photosphere_id = "s3";
  save_facade_image(img, dir.file("f.png"));
  FacadeImage back = load_facade_image(dir.file("f.png"));
  CHECK(back.pixels == img.pixels);
  CHECK(back.mpp == doctest::Approx(0.025));
  CHECK(back.quad_id == "q9");
  CHECK(back.photosphere_id == "s3");
}
