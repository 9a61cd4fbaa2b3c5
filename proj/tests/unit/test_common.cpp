#include <doctest.h>

#include <set>

#include "facadeseg/common.hpp"

using fseg::Rng;

TEST_CASE("rng sequences are reproducible per seed") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) {
    CHECK(a.next_u64() == b.next_u64());
    CHECK(a.uniform() == b.uniform());
    CHECK(a.uniform_int(-5, 17) == b.uniform_int(-5, 17));
    CHECK(a.normal() == b.normal());
  }
  Rng c(43);
  bool all_equal = true;
  Rng a2(42);
  for (int i = 0; i < 16; ++i)
    if (a2.next_u64() != c.next_u64()) all_equal = false;
  CHECK_FALSE(all_equal);
}

TEST_CASE("uniform stays in [0, 1) and respects custom bounds") {
  Rng rng(7);
  for (int i = 0; i < 10000; ++i) {
    double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    double v = rng.uniform(-2.5, 3.5);
    CHECK(v >= -2.5);
    CHECK(v < 3.5);
  }
}

TEST_CASE("uniform_int is inclusive on both ends") {
  Rng rng(11);
  std::set<int> seen;
  for (int i = 0; i < 2000; ++i) seen.insert(rng.uniform_int(3, 6));
  CHECK(seen == std::set<int>{3, 4, 5, 6});
  CHECK(rng.uniform_int(9, 9) == 9);
  CHECK(rng.uniform_int(9, 2) == 9);
}

TEST_CASE("bernoulli extremes never flip") {
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    CHECK_FALSE(rng.bernoulli(0.0));
    CHECK(rng.bernoulli(1.0));
  }
}

TEST_CASE("truncated normal stays within the cutoff") {
  Rng rng(5);
  for (int i = 0; i < 5000; ++i) {
    double z = rng.truncated_normal(2.0);
    CHECK(z >= -2.0);
    CHECK(z <= 2.0);
  }
}

TEST_CASE("normal draws have roughly standard moments") {
  Rng rng(17);
  double sum = 0, sum2 = 0;
  const int n = 50000;
  for (int i = 0; i < n; ++i) {
    double z = rng.normal();
    sum += z;
    sum2 += z * z;
  }
  CHECK(std::abs(sum / n) < 0.02);
  CHECK(std::abs(sum2 / n - 1.0) < 0.03);
}

TEST_CASE("fnv1a matches published vectors") {
  CHECK(fseg::fnv1a("") == 14695981039346656037ull);
  CHECK(fseg::fnv1a("a") == 0xaf63dc4c8601ec8cull);
  CHECK(fseg::fnv1a("foobar") == 0x85944171f73967e8ull);
}

TEST_CASE("to_hex is fixed-width lowercase") {
  CHECK(fseg::to_hex(0) == "0000000000000000");
  CHECK(fseg::to_hex(0xdeadbeefull) == "00000000deadbeef");
  CHECK(fseg::to_hex(~0ull) == "ffffffffffffffff");
}
