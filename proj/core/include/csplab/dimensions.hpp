#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "csplab/source_models.hpp"

namespace csplab {

// Operational rate-distortion curve; D strictly decreasing along the list,
// rates nonnegative and nondecreasing as D decreases.
struct RdCurve {
  struct Point {
    double d = 0.0;
    double r = 0.0;
  };

  std::vector<Point> points;
  std::string source_tag;
  std::string codec_tag;
  std::size_t seed_count = 0;

  void validate() const;
};

// Information-dimension estimate: fitted slope plus the per-resolution
// normalized entropies (b, H/b) it was fitted from; k = conditioning order.
struct IdEstimate {
  double value = 0.0;
  std::vector<std::pair<int, double>> per_b;
  std::size_t k = 0;
};

// Plug-in entropy -sum p_hat log2 p_hat of the empirical distribution, bits.
double plugin_entropy(const std::vector<std::int64_t>& samples);

// Entropy H([X]_b) at each resolution in b_grid on one sampled stream; the
// estimate is the least-squares slope of H([X]_b) versus b (additive
// constants cancel, unlike the ratio at the largest b).
IdEstimate estimate_id_marginal(const SourceSpec& spec, std::size_t n_samples,
                                const std::vector<int>& b_grid, std::uint64_t seed);

// Conditional version: H of the quantized (k+1)-window minus H of the
// k-window over sliding windows; k = 0 reduces exactly to the marginal.
IdEstimate estimate_id_process(const SourceSpec& spec, std::size_t n_samples,
                               std::size_t k, const std::vector<int>& b_grid,
                               std::uint64_t seed);

// 2 x least-squares slope of R against log2(1/D). Invariant under adding a
// constant to every rate on the curve.
double estimate_rdd(const RdCurve& curve);

double binary_entropy(double p);

// max(0, h_bits - 0.5*log2(2*pi*e*D)) for a source with differential
// entropy h_bits.
double shannon_lower_bound(double h_bits, double distortion);

// Smallest bit depth whose midpoint scalar quantizer on dist has worst-case
// squared error <= distortion.
int operational_bits_for_distortion(const ContinuousDistSpec& dist,
                                    double distortion);

// Rate bracket (p*SLB(D), H(p) + p*b_op) for the piecewise-constant process
// with jump probability p and value distribution dist.
std::pair<double, double> rd_bracket_pwc(double p, double distortion,
                                         const ContinuousDistSpec& dist);

}  // namespace csplab
