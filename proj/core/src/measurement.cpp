#include "csplab/measurement.hpp"

#include <cmath>
#include <string>

#include "csplab/errors.hpp"
#include "csplab/rng.hpp"

namespace csplab {

MeasurementSystem sample_matrix(std::size_t m, std::size_t n, std::uint64_t seed,
                                bool normalize_columns) {
  if (m < 1 || n < 1) {
    throw ParamError("sample_matrix: m and n must be >= 1");
  }
  MeasurementSystem sys;
  sys.m = m;
  sys.n = n;
  sys.seed = seed;
  sys.normalized = normalize_columns;
  sys.a.resize(m * n);
  CounterRng rng(derive_stream(seed, StreamTag::kMatrix));
  const double scale = normalize_columns ? 1.0 / std::sqrt(static_cast<double>(n)) : 1.0;
  for (double& entry : sys.a) {
    entry = scale * rng.next_normal();
  }
  return sys;
}

void NoiseSpec::validate() const {
  if (!(sigma >= 0.0)) {
    throw ParamError("noise.sigma: must be >= 0");
  }
}

std::vector<double> measure(const MeasurementSystem& sys, const std::vector<double>& x,
                            const NoiseSpec& noise, std::uint64_t seed) {
  noise.validate();
  if (x.size() != sys.n) {
    throw ParamError("measure: x has length " + std::to_string(x.size()) +
                     ", system expects " + std::to_string(sys.n));
  }
  std::vector<double> y(sys.m);
  for (std::size_t i = 0; i < sys.m; ++i) {
    const double* row = sys.row(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < sys.n; ++j) {
      acc += row[j] * x[j];
    }
    y[i] = acc;
  }
  // sigma == 0 adds nothing and draws nothing, so None and GaussianIID(0)
  // produce bit-identical measurements.
  if (noise.active()) {
    CounterRng rng(derive_stream(seed, StreamTag::kNoise));
    for (std::size_t i = 0; i < sys.m; ++i) {
      y[i] += noise.sigma * rng.next_normal();
    }
  }
  return y;
}

double max_singular_value(const MeasurementSystem& sys) {
  if (sys.m < 1 || sys.n < 1 || sys.a.size() != sys.m * sys.n) {
    throw ParamError("max_singular_value: invalid system");
  }
  constexpr int kMaxIterations = 10000;
  constexpr double kRelTol = 1e-10;

  std::vector<double> v(sys.n, 1.0 / std::sqrt(static_cast<double>(sys.n)));
  std::vector<double> av(sys.m);
  std::vector<double> atav(sys.n);

  double sigma_prev = -1.0;
  double sigma = 0.0;
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    for (std::size_t i = 0; i < sys.m; ++i) {
      const double* row = sys.row(i);
      double acc = 0.0;
      for (std::size_t j = 0; j < sys.n; ++j) {
        acc += row[j] * v[j];
      }
      av[i] = acc;
    }
    // ||v|| = 1, so ||A v||^2 is the Rayleigh quotient of A^T A at v.
    double lambda = 0.0;
    for (std::size_t i = 0; i < sys.m; ++i) {
      lambda += av[i] * av[i];
    }
    sigma = std::sqrt(lambda);
    if (sigma == 0.0) {
      return 0.0;  // v in the null space of a degenerate (e.g. zero) matrix
    }
    if (sigma_prev >= 0.0 && std::abs(sigma - sigma_prev) <= kRelTol * sigma) {
      return sigma;
    }
    sigma_prev = sigma;

    for (std::size_t j = 0; j < sys.n; ++j) {
      atav[j] = 0.0;
    }
    for (std::size_t i = 0; i < sys.m; ++i) {
      const double* row = sys.row(i);
      const double avi = av[i];
      for (std::size_t j = 0; j < sys.n; ++j) {
        atav[j] += row[j] * avi;
      }
    }
    double norm = 0.0;
    for (std::size_t j = 0; j < sys.n; ++j) {
      norm += atav[j] * atav[j];
    }
    norm = std::sqrt(norm);
    if (norm == 0.0) {
      return sigma;
    }
    for (std::size_t j = 0; j < sys.n; ++j) {
      v[j] = atav[j] / norm;
    }
  }
  return sigma;
}

Chi2TailBounds chi2_tail_bounds(std::size_t m, double tau) {
  if (m < 1) {
    throw ParamError("chi2_tail_bounds: m must be >= 1");
  }
  if (!(tau > 0.0) || !(tau < 1.0)) {
    throw ParamError("chi2_tail_bounds: tau must be in (0, 1), got " +
                     std::to_string(tau));
  }
  const double half_m = 0.5 * static_cast<double>(m);
  Chi2TailBounds bounds;
  bounds.lower = std::exp(half_m * (tau + std::log1p(-tau)));
  bounds.upper = chi2_upper_tail(m, tau);
  return bounds;
}

double chi2_upper_tail(std::size_t m, double tau) {
  if (m < 1) {
    throw ParamError("chi2_upper_tail: m must be >= 1");
  }
  if (!(tau > 0.0)) {
    throw ParamError("chi2_upper_tail: tau must be > 0");
  }
  const double half_m = 0.5 * static_cast<double>(m);
  return std::exp(-half_m * (tau - std::log1p(tau)));
}

std::size_t required_measurements(std::size_t n, double rate_bits, double distortion,
                                  double eta) {
  if (n < 1) {
    throw ParamError("required_measurements: n must be >= 1");
  }
  if (!(distortion > 0.0) || !(distortion < 1.0)) {
    throw ParamError("required_measurements: D must be in (0, 1), got " +
                     std::to_string(distortion));
  }
  if (!(eta > 1.0)) {
    throw ParamError("required_measurements: eta must be > 1");
  }
  if (!(rate_bits > 0.0)) {
    throw ParamError("required_measurements: R must be > 0");
  }
  const double ratio =
      2.0 * eta * static_cast<double>(n) * rate_bits / std::log2(1.0 / distortion);
  const double m = std::ceil(ratio);
  return m < 1.0 ? 1 : static_cast<std::size_t>(m);
}

double sigma_for_noise_power_bound(double sigma_m, double eps_m, std::size_t m) {
  if (m < 1) {
    throw ParamError("sigma_for_noise_power_bound: m must be >= 1");
  }
  if (!(sigma_m >= 0.0)) {
    throw ParamError("sigma_for_noise_power_bound: sigma_m must be >= 0");
  }
  if (!(eps_m > 0.0) || !(eps_m < 1.0)) {
    throw ParamError("sigma_for_noise_power_bound: eps_m must be in (0, 1)");
  }
  if (sigma_m == 0.0) {
    return 0.0;
  }
  // chi2_upper_tail is strictly decreasing in tau; bisect for the tau where
  // it equals eps_m.
  double lo = 0.0;
  double hi = 1.0;
  while (chi2_upper_tail(m, hi) > eps_m) {
    hi *= 2.0;
    if (hi > 1e12) break;  // eps_m astronomically small; settle for hi
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (chi2_upper_tail(m, mid) > eps_m) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  // hi satisfies the bound (tail <= eps_m); use it for a guaranteed sigma.
  return sigma_m / std::sqrt(1.0 + hi);
}

}  // namespace csplab
