#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace csplab {

// Dense Gaussian measurement operator. Entries are i.i.d. N(0,1) drawn from
// the seed's kMatrix sub-stream in row-major order, so the same (m, n, seed)
// always reproduces A bit-exactly. With normalized = true entries are
// N(0, 1/n) instead (the column-normalized variant used in noisy runs).
struct MeasurementSystem {
  std::size_t m = 0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  bool normalized = false;
  std::vector<double> a;  // row-major, m*n entries

  double at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
  const double* row(std::size_t i) const { return a.data() + i * n; }
};

MeasurementSystem sample_matrix(std::size_t m, std::size_t n, std::uint64_t seed,
                                bool normalize_columns = false);

enum class NoiseKind { None, GaussianIID };

struct NoiseSpec {
  NoiseKind kind = NoiseKind::None;
  double sigma = 0.0;  // standard deviation per measurement for GaussianIID

  void validate() const;
  bool active() const noexcept { return kind == NoiseKind::GaussianIID && sigma > 0.0; }
};

// y = A x, plus i.i.d. N(0, sigma^2) per coordinate when noise is active.
// Noise draws come from the seed's kNoise sub-stream. Row sums accumulate
// left to right so results are bit-reproducible.
std::vector<double> measure(const MeasurementSystem& sys, const std::vector<double>& x,
                            const NoiseSpec& noise, std::uint64_t seed);

// Largest singular value via power iteration on A^T A: deterministic
// all-ones start vector, stop when the singular-value estimate changes by
// less than 1e-10 relative or after 10^4 iterations.
double max_singular_value(const MeasurementSystem& sys);

// Chi-square concentration for S = sum of m squared standard normals:
//   P(S < m(1-tau)) <= exp((m/2)(tau + ln(1-tau)))    (lower)
//   P(S > m(1+tau)) <= exp(-(m/2)(tau - ln(1+tau)))   (upper)
// Requires 0 < tau < 1 so that both members are defined.
struct Chi2TailBounds {
  double lower;
  double upper;
};
Chi2TailBounds chi2_tail_bounds(std::size_t m, double tau);

// Upper-tail member alone; valid for every tau > 0.
double chi2_upper_tail(std::size_t m, double tau);

// m = ceil(2 * eta * n * R / log2(1/D)), at least 1. Requires D in (0,1),
// eta > 1, R > 0.
std::size_t required_measurements(std::size_t n, double rate_bits, double distortion,
                                  double eta);

// Largest sigma such that i.i.d. N(0, sigma^2) noise on m coordinates has
// P(||Z||_2 >= sqrt(m) * sigma_m) <= eps_m by the chi-square upper tail:
// solves (m/2)(tau - ln(1+tau)) = ln(1/eps_m) and returns
// sigma_m / sqrt(1 + tau). Conservative by exactly the slack in the bound.
double sigma_for_noise_power_bound(double sigma_m, double eps_m, std::size_t m);

}  // namespace csplab
