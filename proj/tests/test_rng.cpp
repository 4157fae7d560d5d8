#include <doctest.h>

#include <cmath>

#include "entprop/rng.hpp"

using entprop::derive_stream;
using entprop::Rng;

TEST_SUITE("rng") {

TEST_CASE("same seed reproduces the stream") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("derived streams differ across path components") {
  CHECK(derive_stream({1, 2, 3}) != derive_stream({1, 2, 4}));
  CHECK(derive_stream({1, 2, 3}) != derive_stream({1, 3, 2}));
  CHECK(derive_stream({0}) != derive_stream({0, 0}));
}

TEST_CASE("uniform doubles stay in [0,1)") {
  Rng rng(7);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.next_double();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("normal moments") {
  Rng rng(11);
  const int n = 200000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sum2 += z * z;
  }
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(std::abs(sum2 / n - 1.0) < 0.02);
}

TEST_CASE("bernoulli frequency") {
  Rng rng(13);
  int hits = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) hits += rng.bernoulli(0.3);
  CHECK(std::abs(hits / static_cast<double>(n) - 0.3) < 0.01);
}

TEST_CASE("uniform_int covers its range") {
  Rng rng(17);
  int counts[5] = {0, 0, 0, 0, 0};
  for (int i = 0; i < 50000; ++i) {
    const int v = rng.uniform_int(5);
    REQUIRE(v >= 0);
    REQUIRE(v < 5);
    ++counts[v];
  }
  for (int c : counts) CHECK(c > 9000);
}

}  // TEST_SUITE
