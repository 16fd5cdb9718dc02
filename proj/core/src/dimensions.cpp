#include "csplab/dimensions.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>
#include <unordered_map>

#include "csplab/errors.hpp"
#include "csplab/quantization.hpp"

namespace csplab {

namespace {

// Deterministic regardless of hash-map iteration order: counts are sorted
// by key before the probability sum is accumulated.
double entropy_bits(const std::unordered_map<std::uint64_t, std::uint64_t>& counts,
                    double total) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> sorted(counts.begin(),
                                                              counts.end());
  std::sort(sorted.begin(), sorted.end());
  double h = 0.0;
  for (const auto& [key, count] : sorted) {
    const double p = static_cast<double>(count) / total;
    h -= p * std::log2(p);
  }
  return h;
}

double least_squares_slope(const std::vector<double>& xs,
                           const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= n;
  mean_y /= n;
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mean_x;
    num += dx * (ys[i] - mean_y);
    den += dx * dx;
  }
  if (den == 0.0) {
    throw ParamError("slope fit: abscissae are all identical");
  }
  return num / den;
}

void check_b_grid(const std::vector<int>& b_grid) {
  if (b_grid.size() < 3) {
    throw ParamError("b_grid must contain at least 3 resolutions");
  }
  for (int b : b_grid) {
    if (b < 1 || b > 62) {
      throw ParamError("b_grid entries must be in [1, 62], got " +
                       std::to_string(b));
    }
  }
}

}  // namespace

double plugin_entropy(const std::vector<std::int64_t>& samples) {
  if (samples.empty()) {
    throw ParamError("plugin_entropy: empty sample list");
  }
  std::unordered_map<std::uint64_t, std::uint64_t> counts;
  counts.reserve(samples.size() / 4 + 1);
  for (std::int64_t s : samples) {
    ++counts[static_cast<std::uint64_t>(s)];
  }
  return entropy_bits(counts, static_cast<double>(samples.size()));
}

IdEstimate estimate_id_process(const SourceSpec& spec, std::size_t n_samples,
                               std::size_t k, const std::vector<int>& b_grid,
                               std::uint64_t seed) {
  spec.validate();
  check_b_grid(b_grid);
  const int max_b = *std::max_element(b_grid.begin(), b_grid.end());
  // Undersampling guard: at least 50 samples per possible (k+1)-window cell.
  const std::size_t window_bits = (k + 1) * static_cast<std::size_t>(max_b);
  if (window_bits >= 57 ||
      n_samples < 50ull * (1ull << window_bits)) {
    throw ParamError("undersampled: need n_samples >= 50*2^((k+1)*max_b)");
  }
  if (n_samples < k + 1) {
    throw ParamError("n_samples must exceed the window order k");
  }

  const std::vector<double> stream = sample_block(spec, n_samples, seed);

  IdEstimate estimate;
  estimate.k = k;
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<std::int64_t> cells(n_samples);
  for (int b : b_grid) {
    for (std::size_t i = 0; i < n_samples; ++i) {
      cells[i] = static_cast<std::int64_t>(std::floor(std::ldexp(stream[i], b)));
    }
    const auto [min_it, max_it] = std::minmax_element(cells.begin(), cells.end());
    const std::int64_t base = *min_it;
    const std::uint64_t span = static_cast<std::uint64_t>(*max_it - base);
    const unsigned coord_bits = span == 0 ? 0 : std::bit_width(span);
    if (static_cast<std::size_t>(coord_bits) * (k + 1) > 63) {
      throw ParamError("window cells overflow the 64-bit packing");
    }

    const std::size_t windows = n_samples - k;
    std::unordered_map<std::uint64_t, std::uint64_t> joint;
    joint.reserve(windows / 8 + 1);
    for (std::size_t i = 0; i < windows; ++i) {
      std::uint64_t key = 0;
      for (std::size_t j = 0; j <= k; ++j) {
        key = (key << coord_bits) |
              static_cast<std::uint64_t>(cells[i + j] - base);
      }
      ++joint[key];
    }
    double h = entropy_bits(joint, static_cast<double>(windows));
    if (k > 0) {
      // Past-tuple counts aggregate over the last coordinate.
      std::unordered_map<std::uint64_t, std::uint64_t> past;
      past.reserve(joint.size());
      for (const auto& [key, count] : joint) {
        past[key >> coord_bits] += count;
      }
      h -= entropy_bits(past, static_cast<double>(windows));
    }
    xs.push_back(static_cast<double>(b));
    ys.push_back(h);
    estimate.per_b.emplace_back(b, h / static_cast<double>(b));
  }
  estimate.value = least_squares_slope(xs, ys);
  return estimate;
}

IdEstimate estimate_id_marginal(const SourceSpec& spec, std::size_t n_samples,
                                const std::vector<int>& b_grid,
                                std::uint64_t seed) {
  return estimate_id_process(spec, n_samples, 0, b_grid, seed);
}

void RdCurve::validate() const {
  if (points.empty()) {
    throw ParamError("RdCurve: no points");
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(points[i].d > 0.0) || !(points[i].d < 1.0)) {
      throw ParamError("RdCurve: D must be in (0, 1)");
    }
    if (!(points[i].r >= 0.0)) {
      throw ParamError("RdCurve: R must be nonnegative");
    }
    if (i > 0) {
      if (!(points[i].d < points[i - 1].d)) {
        throw ParamError("RdCurve: D values must be strictly decreasing");
      }
      if (points[i].r < points[i - 1].r) {
        throw ParamError("RdCurve: R must be nondecreasing as D decreases");
      }
    }
  }
}

double estimate_rdd(const RdCurve& curve) {
  curve.validate();
  if (curve.points.size() < 3) {
    throw ParamError("estimate_rdd: need at least 3 points");
  }
  const double span =
      std::log10(curve.points.front().d / curve.points.back().d);
  if (span < 2.0) {
    throw ParamError("estimate_rdd: D range spans " + std::to_string(span) +
                     " decades, need >= 2");
  }
  std::vector<double> xs;
  std::vector<double> ys;
  xs.reserve(curve.points.size());
  ys.reserve(curve.points.size());
  for (const RdCurve::Point& pt : curve.points) {
    xs.push_back(std::log2(1.0 / pt.d));
    ys.push_back(pt.r);
  }
  return 2.0 * least_squares_slope(xs, ys);
}

double binary_entropy(double p) {
  if (!(p >= 0.0) || !(p <= 1.0)) {
    throw ParamError("binary_entropy: p must be in [0, 1]");
  }
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

double shannon_lower_bound(double h_bits, double distortion) {
  if (!(distortion > 0.0)) {
    throw ParamError("shannon_lower_bound: D must be positive");
  }
  const double slb =
      h_bits - 0.5 * std::log2(2.0 * std::numbers::pi * std::numbers::e *
                               distortion);
  return std::max(0.0, slb);
}

int operational_bits_for_distortion(const ContinuousDistSpec& dist,
                                    double distortion) {
  dist.validate();
  if (!(distortion > 0.0)) {
    throw ParamError("operational bits: D must be positive");
  }
  for (int b = 1; b <= 30; ++b) {
    const double half_cell = std::ldexp(dist.width(), -b - 1);
    if (half_cell * half_cell <= distortion) {
      return b;
    }
  }
  throw ParamError("operational bits: no quantizer with <= 30 bits reaches D");
}

std::pair<double, double> rd_bracket_pwc(double p, double distortion,
                                         const ContinuousDistSpec& dist) {
  dist.validate();
  if (!(p > 0.0) || !(p <= 1.0)) {
    throw ParamError("rd_bracket_pwc: p must be in (0, 1]");
  }
  if (!(distortion > 0.0) || !(distortion < dist.variance())) {
    throw ParamError("rd_bracket_pwc: D must be in (0, var(dist))");
  }
  const double slb = shannon_lower_bound(dist.differential_entropy_bits(),
                                         distortion);
  const int b_op = operational_bits_for_distortion(dist, distortion);
  return {p * slb, binary_entropy(p) + p * static_cast<double>(b_op)};
}

}  // namespace csplab
