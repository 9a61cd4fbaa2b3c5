#include <doctest.h>

#include "facadeseg/common.hpp"
#include "facadeseg/data/mask.hpp"
#include "helpers.hpp"

using namespace fseg;
using namespace fseg::data;

TEST_CASE("mask construction and plane lookup") {
  MultiLabelMask mask({"window", "door"}, 8, 6);
  CHECK(mask.width == 8);
  CHECK(mask.height == 6);
  REQUIRE(mask.planes.size() == 2);
  CHECK(mask.class_index("window") == 0);
  CHECK(mask.class_index("door") == 1);
  CHECK(mask.class_index("roof") == -1);
  mask.plane("door").at(3, 2) = POS;
  CHECK(mask.planes[1].at(3, 2) == POS);
  CHECK(mask.planes[0].at(3, 2) == NEG);
  CHECK_THROWS_AS((void)mask.plane("roof"), ValidationError);
}

TEST_CASE("mask validation rejects stray label values") {
  MultiLabelMask mask({"window"}, 4, 4);
  CHECK_NOTHROW(validate(mask));
  mask.plane("window").at(1, 1) = 4;
  CHECK_THROWS_AS(validate(mask), ValidationError);

  MultiLabelMask mismatched({"window"}, 4, 4);
  mismatched.planes[0] = GrayImage(3, 4, 0);
  CHECK_THROWS_AS(validate(mismatched), ValidationError);
}

TEST_CASE("mask encode and decode round trip") {
  fseg::test::TempDir dir("mask");
  MultiLabelMask mask({"window", "sill"}, 12, 9);
  for (int y = 0; y < 9; ++y)
    for (int x = 0; x < 12; ++x) {
      mask.planes[0].at(x, y) = static_cast<std::uint8_t>((x + y) % 4);
      mask.planes[1].at(x, y) = static_cast<std::uint8_t>((x * y) % 4);
    }
  encode_mask(mask, dir.path(), "tile7");
  CHECK(std::filesystem::exists(dir.file("tile7.window.png")));
  CHECK(std::filesystem::exists(dir.file("tile7.sill.png")));
  CHECK(std::filesystem::exists(dir.file("tile7.mask.json")));

  MultiLabelMask back = decode_mask(dir.path(), "tile7");
  CHECK(back == mask);
  CHECK(back.vocab == std::vector<std::string>{"window", "sill"});
}

TEST_CASE("decoding a missing mask fails") {
  fseg::test::TempDir dir("maskmiss");
  CHECK_THROWS((void)decode_mask(dir.path(), "ghost"));
}
