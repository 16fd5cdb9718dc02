#include "csplab/quantization.hpp"

#include <cmath>
#include <string>

#include "csplab/errors.hpp"

namespace csplab {

double bit_approx(double x, int b) {
  if (b < 1 || b > 62) {
    throw ParamError("bit_approx: b must be in [1, 62], got " + std::to_string(b));
  }
  if (!std::isfinite(x)) {
    throw ParamError("bit_approx: x must be finite");
  }
  // ldexp scales by an exact power of two and floor of a representable
  // double is representable, so the result equals the mathematical value
  // floor(x * 2^b) * 2^-b (identical to the keep-b-fraction-bits form).
  return std::ldexp(std::floor(std::ldexp(x, b)), -b);
}

double grid_quantize(double x, std::int64_t b) {
  if (b < 1) {
    throw ParamError("grid_quantize: b must be >= 1, got " + std::to_string(b));
  }
  if (!std::isfinite(x)) {
    throw ParamError("grid_quantize: x must be finite");
  }
  return std::floor(static_cast<double>(b) * x) / static_cast<double>(b);
}

ScalarQuantizer::ScalarQuantizer(double lower, double upper, int bits)
    : lower_(lower), upper_(upper), bits_(bits) {
  if (!(lower < upper) || !std::isfinite(lower) || !std::isfinite(upper)) {
    throw ParamError("ScalarQuantizer: requires finite lower < upper");
  }
  if (bits < 1 || bits > 30) {
    throw ParamError("ScalarQuantizer: bits must be in [1, 30], got " +
                     std::to_string(bits));
  }
}

std::uint32_t ScalarQuantizer::encode(double x) const {
  if (std::isnan(x)) {
    throw ParamError("ScalarQuantizer::encode: x is NaN");
  }
  const double scaled = (x - lower_) / (upper_ - lower_) * levels();
  double cell = std::floor(scaled);
  if (cell < 0.0) cell = 0.0;
  const double top = levels() - 1;
  if (cell > top) cell = top;
  return static_cast<std::uint32_t>(cell);
}

double ScalarQuantizer::decode(std::uint32_t index) const {
  if (index >= levels()) {
    throw ParamError("ScalarQuantizer::decode: index " + std::to_string(index) +
                     " out of range [0, " + std::to_string(levels()) + ")");
  }
  return lower_ + (index + 0.5) * cell_width();
}

double ScalarQuantizer::worst_case_distortion() const noexcept {
  const double half_cell = (upper_ - lower_) * std::ldexp(1.0, -(bits_ + 1));
  return half_cell * half_cell;
}

}  // namespace csplab
