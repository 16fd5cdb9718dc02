#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "csplab/rng.hpp"

using namespace csplab;

TEST_CASE("same key reproduces the same stream") {
  CounterRng a(42);
  CounterRng b(42);
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.next_u64() == b.next_u64());
  }
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.next_normal() == b.next_normal());
  }
}

TEST_CASE("different keys give different streams") {
  CounterRng a(1);
  CounterRng b(2);
  int equal = 0;
  for (int i = 0; i < 100; ++i) {
    if (a.next_u64() == b.next_u64()) ++equal;
  }
  CHECK(equal == 0);
}

TEST_CASE("next_unit stays strictly inside (0,1)") {
  CounterRng rng(7);
  for (int i = 0; i < 200000; ++i) {
    const double u = rng.next_unit();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("next_unit moments match Uniform(0,1)") {
  CounterRng rng(11);
  const int n = 200000;
  double sum = 0.0;
  double sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.next_unit();
    sum += u;
    sumsq += u * u;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  CHECK(mean == doctest::Approx(0.5).epsilon(0.01));
  CHECK(var == doctest::Approx(1.0 / 12.0).epsilon(0.02));
}

TEST_CASE("next_normal moments match N(0,1)") {
  CounterRng rng(13);
  const int n = 200000;
  double sum = 0.0;
  double sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = rng.next_normal();
    sum += g;
    sumsq += g * g;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  CHECK(std::abs(mean) < 0.01);
  CHECK(var == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("next_uniform respects its interval") {
  CounterRng rng(17);
  for (int i = 0; i < 10000; ++i) {
    const double v = rng.next_uniform(-2.0, 3.0);
    CHECK(v > -2.0);
    CHECK(v < 3.0);
  }
}

TEST_CASE("bernoulli edge probabilities are exact") {
  CounterRng rng(19);
  for (int i = 0; i < 1000; ++i) {
    CHECK_FALSE(rng.next_bernoulli(0.0));
    CHECK(rng.next_bernoulli(1.0));
  }
}

TEST_CASE("bernoulli frequency tracks p") {
  CounterRng rng(23);
  const int n = 100000;
  int hits = 0;
  for (int i = 0; i < n; ++i) {
    if (rng.next_bernoulli(0.3)) ++hits;
  }
  CHECK(static_cast<double>(hits) / n == doctest::Approx(0.3).epsilon(0.03));
}

TEST_CASE("derive_stream separates indices and is deterministic") {
  std::set<std::uint64_t> keys;
  for (std::uint64_t i = 0; i < 200; ++i) {
    const std::uint64_t k = derive_stream(99, i);
    CHECK(k == derive_stream(99, i));
    keys.insert(k);
  }
  CHECK(keys.size() == 200);
}

TEST_CASE("tagged sub-streams are mutually distinct") {
  const std::uint64_t seed = 5;
  const std::uint64_t source = derive_stream(seed, StreamTag::kSource);
  const std::uint64_t matrix = derive_stream(seed, StreamTag::kMatrix);
  const std::uint64_t noise = derive_stream(seed, StreamTag::kNoise);
  CHECK(source != matrix);
  CHECK(source != noise);
  CHECK(matrix != noise);
  CounterRng a(source);
  CounterRng b(matrix);
  int equal = 0;
  for (int i = 0; i < 100; ++i) {
    if (a.next_u64() == b.next_u64()) ++equal;
  }
  CHECK(equal == 0);
}
