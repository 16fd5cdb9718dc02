#include "csplab/rng.hpp"

#include <cmath>
#include <numbers>

namespace csplab {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// SplitMix64 finalizer (Steele, Lea, Flood 2014): bijective avalanche mixer.
constexpr std::uint64_t finalize(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t CounterRng::next_u64() noexcept {
  return finalize(key_ + ++counter_ * kGolden);
}

double CounterRng::next_unit() noexcept {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::next_uniform(double lo, double hi) noexcept {
  return lo + (hi - lo) * next_unit();
}

double CounterRng::next_normal() noexcept {
  if (have_spare_) {
    have_spare_ = false;
    return spare_normal_;
  }
  const double u1 = next_unit();
  const double u2 = next_unit();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_normal_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

bool CounterRng::next_bernoulli(double p) noexcept {
  return next_unit() < p;
}

std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t index) noexcept {
  // Two finalize rounds with golden-ratio offsets: collisions between
  // (seed, index) pairs would need finalize(seed + G) + (index+1)*G to
  // coincide, which does not happen for the index ranges used here.
  return finalize(finalize(seed + kGolden) + (index + 1) * kGolden);
}

std::uint64_t derive_stream(std::uint64_t seed, StreamTag tag) noexcept {
  return derive_stream(seed, static_cast<std::uint64_t>(tag));
}

}  // namespace csplab
