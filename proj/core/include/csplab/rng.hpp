#pragma once

#include <cstdint>

namespace csplab {

// Counter-based pseudo-random generator built on the SplitMix64 output
// function: the i-th word of a stream with key k is finalize(k + i*GOLDEN).
// Identical keys give identical streams on every platform, draws never
// depend on shared state, and independent streams for parallel trials are
// derived with derive_stream() below, so results are schedule-independent.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}

  // Next raw 64-bit word.
  std::uint64_t next_u64() noexcept;

  // Uniform draw strictly inside (0, 1): ((w >> 11) + 0.5) * 2^-53.
  // Never returns 0.0 or 1.0, which keeps log() in the normal generator
  // total and keeps bounded-support draws inside the open interval.
  double next_unit() noexcept;

  // Uniform draw strictly inside (lo, hi).
  double next_uniform(double lo, double hi) noexcept;

  // Standard normal via the Box-Muller transform. Pairs are generated
  // together; the second member is cached and returned by the next call.
  double next_normal() noexcept;

  // True with probability p (for p in [0, 1]; p = 1 is always true).
  bool next_bernoulli(double p) noexcept;

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_normal_ = 0.0;
  bool have_spare_ = false;
};

// Stream key for (seed, index). Used to give every trial of an experiment
// its own stream: derive_stream(master_seed, trial_index).
std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t index) noexcept;

// Fixed sub-stream tags so the different consumers of one trial seed
// (source draws, measurement matrix entries, measurement noise) never
// overlap even though they share the trial seed.
enum class StreamTag : std::uint64_t {
  kSource = 0x73726300,  // "src"
  kMatrix = 0x6d617400,  // "mat"
  kNoise = 0x6e736500,   // "nse"
};

std::uint64_t derive_stream(std::uint64_t seed, StreamTag tag) noexcept;

}  // namespace csplab
