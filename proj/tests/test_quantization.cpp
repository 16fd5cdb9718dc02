#include <doctest.h>

#include <cmath>
#include <limits>

#include "csplab/errors.hpp"
#include "csplab/quantization.hpp"
#include "csplab/rng.hpp"

using namespace csplab;

namespace {

// Independent oracle for x in [0,1): peel binary digits one at a time.
// Doubling and subtracting 1 are exact in double precision, so this
// reproduces the mathematical truncation without calling ldexp/floor.
double binary_expansion_approx(double x, int b) {
  REQUIRE(x >= 0.0);
  REQUIRE(x < 1.0);
  double y = 0.0;
  double f = x;
  double weight = 0.5;
  for (int i = 0; i < b; ++i) {
    f *= 2.0;
    if (f >= 1.0) {
      f -= 1.0;
      y += weight;
    }
    weight *= 0.5;
  }
  return y;
}

}  // namespace

TEST_CASE("bit_approx matches the binary-expansion oracle on [0,1)") {
  CounterRng rng(101);
  for (int trial = 0; trial < 5000; ++trial) {
    const double x = rng.next_unit();
    for (int b : {1, 2, 3, 5, 8, 13, 21}) {
      CHECK(bit_approx(x, b) == binary_expansion_approx(x, b));
    }
  }
}

TEST_CASE("bit_approx known values") {
  // 0.2 = 0.001100110011..._2
  CHECK(bit_approx(0.2, 1) == 0.0);
  CHECK(bit_approx(0.2, 2) == 0.0);
  CHECK(bit_approx(0.2, 3) == 0.125);
  CHECK(bit_approx(0.2, 4) == 0.1875);
  CHECK(bit_approx(0.75, 1) == 0.5);
  CHECK(bit_approx(0.75, 2) == 0.75);
  CHECK(bit_approx(1.0, 4) == 1.0);
  CHECK(bit_approx(2.5, 1) == 2.5);
}

TEST_CASE("bit_approx rounds toward minus infinity for negatives") {
  CHECK(bit_approx(-0.3, 1) == -0.5);
  CHECK(bit_approx(-0.3, 2) == -0.5);
  CHECK(bit_approx(-0.3, 3) == -0.375);
  CHECK(bit_approx(-1.0, 3) == -1.0);
}

TEST_CASE("bit_approx error is below 2^-b and approximation is idempotent") {
  CounterRng rng(103);
  for (int trial = 0; trial < 2000; ++trial) {
    const double x = rng.next_uniform(-4.0, 4.0);
    for (int b : {1, 4, 9, 17}) {
      const double y = bit_approx(x, b);
      CHECK(y <= x);
      CHECK(x - y < std::ldexp(1.0, -b));
      CHECK(bit_approx(y, b) == y);
    }
  }
}

TEST_CASE("bit_approx is monotone in x") {
  CounterRng rng(107);
  for (int trial = 0; trial < 2000; ++trial) {
    const double a = rng.next_uniform(-2.0, 2.0);
    const double c = rng.next_uniform(-2.0, 2.0);
    const double lo = std::min(a, c);
    const double hi = std::max(a, c);
    CHECK(bit_approx(lo, 6) <= bit_approx(hi, 6));
  }
}

TEST_CASE("bit_approx rejects bad arguments") {
  CHECK_THROWS_AS(bit_approx(0.5, 0), ParamError);
  CHECK_THROWS_AS(bit_approx(0.5, -3), ParamError);
  CHECK_THROWS_AS(bit_approx(0.5, 63), ParamError);
  CHECK_THROWS_AS(bit_approx(std::numeric_limits<double>::infinity(), 4), ParamError);
  CHECK_THROWS_AS(bit_approx(std::numeric_limits<double>::quiet_NaN(), 4), ParamError);
  CHECK(bit_approx(0.5, 62) == 0.5);
}

TEST_CASE("grid_quantize uses the integer grid floor(b*x)/b") {
  CHECK(grid_quantize(0.7, 3) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(grid_quantize(0.5, 2) == 0.5);
  CHECK(grid_quantize(-0.1, 4) == doctest::Approx(-0.25).epsilon(1e-15));
  CHECK_THROWS_AS(grid_quantize(0.5, 0), ParamError);
  CounterRng rng(109);
  for (int trial = 0; trial < 2000; ++trial) {
    const double x = rng.next_uniform(-3.0, 3.0);
    for (std::int64_t b : {1, 2, 7, 100}) {
      const double y = grid_quantize(x, b);
      CHECK(y <= x + 1e-15);
      CHECK(x - y < 1.0 / static_cast<double>(b) + 1e-15);
    }
  }
}

TEST_CASE("ScalarQuantizer midpoint reconstruction") {
  const ScalarQuantizer q(0.0, 1.0, 2);
  CHECK(q.levels() == 4);
  CHECK(q.encode(0.1) == 0);
  CHECK(q.encode(0.3) == 1);
  CHECK(q.encode(0.9) == 3);
  CHECK(q.decode(0) == 0.125);
  CHECK(q.decode(3) == 0.875);
  // Clamping outside the interval.
  CHECK(q.encode(-5.0) == 0);
  CHECK(q.encode(7.0) == 3);
  CHECK(q.encode(1.0) == 3);
}

TEST_CASE("ScalarQuantizer worst case bound holds empirically") {
  const ScalarQuantizer q(-1.0, 3.0, 3);
  const double bound = q.worst_case_distortion();
  CHECK(bound == doctest::Approx(std::pow(4.0 * std::ldexp(1.0, -4), 2)).epsilon(1e-12));
  CounterRng rng(113);
  double worst = 0.0;
  for (int trial = 0; trial < 20000; ++trial) {
    const double x = rng.next_uniform(-1.0, 3.0);
    const double err = x - q.decode(q.encode(x));
    worst = std::max(worst, err * err);
  }
  CHECK(worst <= bound);
  CHECK(worst > 0.5 * bound);  // the bound is tight, not slack
}

TEST_CASE("ScalarQuantizer rejects invalid construction and inputs") {
  CHECK_THROWS_AS(ScalarQuantizer(1.0, 1.0, 3), ParamError);
  CHECK_THROWS_AS(ScalarQuantizer(2.0, 1.0, 3), ParamError);
  CHECK_THROWS_AS(ScalarQuantizer(0.0, 1.0, 0), ParamError);
  CHECK_THROWS_AS(ScalarQuantizer(0.0, 1.0, 31), ParamError);
  const ScalarQuantizer q(0.0, 1.0, 3);
  CHECK_THROWS_AS(q.encode(std::numeric_limits<double>::quiet_NaN()), ParamError);
  CHECK_THROWS_AS(q.decode(8), ParamError);
}
