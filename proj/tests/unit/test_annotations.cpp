#include <doctest.h>

#include "facadeseg/common.hpp"
#include "facadeseg/data/annotations.hpp"
#include "helpers.hpp"

using namespace fseg;
using namespace fseg::data;

namespace {

AnnotationSet sample() {
  AnnotationSet ann;
  ann.image_id = "img1";
  ann.width = 40;
  ann.height = 30;
  ann.mpp = 0.05;
  ann.shapes.push_back({"window", {{2, 2}, {10, 2}, {10, 9}, {2, 9}}});
  ann.shapes.push_back({"door", {{20, 10}, {26, 10}, {23, 28}}});
  ann.unknown_regions.push_back({{0, 0}, {5, 0}, {0, 5}});
  return ann;
}

}  // namespace

TEST_CASE("annotations round trip through json") {
  fseg::test::TempDir dir("ann");
  AnnotationSet ann = sample();
  save_annotations(ann, dir.file("a.json"));
  AnnotationSet back = load_annotations(dir.file("a.json"));
  CHECK(back.image_id == "img1");
  CHECK(back.width == 40);
  CHECK(back.height == 30);
  CHECK(back.mpp == doctest::Approx(0.05));
  REQUIRE(back.shapes.size() == 2);
  CHECK(back.shapes[0].class_name == "window");
  REQUIRE(back.shapes[0].ring.size() == 4);
  CHECK(back.shapes[0].ring[2].x == doctest::Approx(10.0));
  CHECK(back.shapes[0].ring[2].y == doctest::Approx(9.0));
  REQUIRE(back.unknown_regions.size() == 1);
  CHECK(back.unknown_regions[0].size() == 3);
}

TEST_CASE("annotation json uses class and ring keys") {
  fseg::test::TempDir dir("annkeys");
  save_annotations(sample(), dir.file("a.json"));
  auto bytes = fseg::test::read_bytes(dir.file("a.json"));
  std::string text(bytes.begin(), bytes.end());
  CHECK(text.find("\"class\"") != std::string::npos);
  CHECK(text.find("\"ring\"") != std::string::npos);
  CHECK(text.find("\"unknown_regions\"") != std::string::npos);
}

TEST_CASE("annotation validation gates vocab and geometry") {
  AnnotationSet ann = sample();
  CHECK_NOTHROW(validate(ann, {}));
  CHECK_NOTHROW(validate(ann, {"window", "door", "sill"}));
  CHECK_THROWS_AS(validate(ann, {"window"}), ValidationError);

  AnnotationSet degenerate = sample();
  degenerate.shapes[0].ring.resize(2);
  CHECK_THROWS_AS(validate(degenerate, {}), ValidationError);

  AnnotationSet empty_dims = sample();
  empty_dims.width = 0;
  CHECK_THROWS_AS(validate(empty_dims, {}), ValidationError);
}

TEST_CASE("loading a missing annotation file fails") {
  CHECK_THROWS_AS((void)load_annotations("/nonexistent/path/a.json"), ValidationError);
}

TEST_CASE("loading rejects malformed shapes") {
  fseg::test::TempDir dir("annbad");
  fseg::test::write_text(dir.file("a.json"), R"({
    "image_id": "x", "width": 10, "height": 10, "mpp": 0.05,
    "shapes": [{"ring": [[0,0],[1,0],[0,1]]}]
  })");
  CHECK_THROWS_AS((void)load_annotations(dir.file("a.json")), ValidationError);
}
