#pragma once

#include <cstdint>

namespace csplab {

// b-bit approximation [x]_b = floor(x) + sum_{i=1..b} (x)_i 2^-i, where
// (x)_i are the binary fraction digits of x - floor(x). Rounds toward -inf
// (not toward zero), so bit_approx(-0.3, 1) = -0.5.
// Exact in double precision: computed as ldexp(floor(ldexp(x, b)), -b),
// which performs no inexact operation. Requires 1 <= b <= 62.
double bit_approx(double x, int b);

// Grid quantization <x>_b = floor(b*x) / b for integer resolution b >= 1.
// b counts levels per unit, not bits.
double grid_quantize(double x, std::int64_t b);

// Uniform midpoint quantizer over (lower, upper) with 2^bits cells.
// encode clamps out-of-range inputs into the boundary cells (sampled values
// may touch interval endpoints in floating point); decode returns the cell
// midpoint, so every in-range input satisfies
//   |x - decode(encode(x))| <= (upper - lower) * 2^-(bits+1).
class ScalarQuantizer {
 public:
  ScalarQuantizer(double lower, double upper, int bits);

  std::uint32_t encode(double x) const;
  double decode(std::uint32_t index) const;  // ParamError if index >= levels()

  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }
  int bits() const noexcept { return bits_; }
  std::uint32_t levels() const noexcept { return 1u << bits_; }
  double cell_width() const noexcept { return (upper_ - lower_) / levels(); }

  // Worst-case per-letter squared error ((upper-lower) * 2^-(bits+1))^2.
  double worst_case_distortion() const noexcept;

 private:
  double lower_;
  double upper_;
  int bits_;
};

}  // namespace csplab
