#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace csplab {

// Continuous value distribution f_c with bounded open support (lower, upper).
// Only the uniform family is shipped: the codec rate-distortion analysis
// needs a concrete distribution and uniform keeps quantizer distortion
// analytic. Adding a family means extending the enum, sample(), and the
// differential entropy used by the Shannon-lower-bound bracket.
enum class DistFamily { Uniform };

struct ContinuousDistSpec {
  DistFamily kind = DistFamily::Uniform;
  double lower = 0.0;
  double upper = 1.0;

  void validate() const;  // ParamError unless finite lower < upper

  double width() const noexcept { return upper - lower; }
  double differential_entropy_bits() const;  // log2(upper - lower) for Uniform
  double variance() const;                   // (upper - lower)^2 / 12 for Uniform
  double d_max() const;                      // sup squared error = (upper - lower)^2
};

// The three stationary processes in scope:
//   SparseIID         X_i ~ (1-p) delta_0 + p f_c, i.i.d.
//   PiecewiseMarkov   X_1 ~ f_c; X_i = X_{i-1} w.p. 1-p, fresh f_c draw w.p. p
//   ContinuousIID     X_i ~ f_c, i.i.d. (jump_prob unused)
enum class SourceKind { SparseIID, PiecewiseMarkov, ContinuousIID };

struct SourceSpec {
  SourceKind kind = SourceKind::PiecewiseMarkov;
  double jump_prob = 0.5;  // p; must lie in (0, 1] where used
  ContinuousDistSpec value_dist;

  void validate() const;
};

const char* source_kind_name(SourceKind kind);

// Deterministic function of (spec, n, seed): same arguments, bit-identical
// block. Draws come from the seed's kSource sub-stream, so a matrix or
// noise generator sharing the same trial seed never consumes these values.
std::vector<double> sample_block(const SourceSpec& spec, std::size_t n,
                                 std::uint64_t seed);

// Maximal runs of exactly-equal consecutive values. Exact float equality is
// the right test here: generated blocks repeat stored values bit-for-bit.
// Noisy external data is out of scope.
struct RunDecomposition {
  std::vector<std::size_t> run_lengths;  // T_1..T_N, sums to the blocklength
  std::vector<double> values;            // S_1..S_N, adjacent values distinct

  std::size_t run_count() const noexcept { return run_lengths.size(); }  // N
};

RunDecomposition decompose_runs(const std::vector<double>& x);
std::vector<double> reassemble_runs(const RunDecomposition& runs);

// Hoeffding bound 2*exp(-2*n*eps^2) on P(|N/n - p| > eps) for the
// jump-count statistic N of a blocklength-n PiecewiseMarkov sample.
double jump_count_tail(std::size_t n, double p, double eps);

}  // namespace csplab
