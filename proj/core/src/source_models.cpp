#include "csplab/source_models.hpp"

#include <cmath>
#include <string>

#include "csplab/errors.hpp"
#include "csplab/rng.hpp"

namespace csplab {

void ContinuousDistSpec::validate() const {
  if (!std::isfinite(lower) || !std::isfinite(upper) || !(lower < upper)) {
    throw ParamError("value_dist: requires finite lower < upper");
  }
}

double ContinuousDistSpec::differential_entropy_bits() const {
  validate();
  return std::log2(upper - lower);
}

double ContinuousDistSpec::variance() const {
  validate();
  return width() * width() / 12.0;
}

double ContinuousDistSpec::d_max() const {
  validate();
  return width() * width();
}

void SourceSpec::validate() const {
  value_dist.validate();
  if (kind != SourceKind::ContinuousIID) {
    // p = 1 is admitted as the degenerate always-jump case (every entry a
    // fresh continuous draw); p = 0 would freeze the process and is not.
    if (!(jump_prob > 0.0) || !(jump_prob <= 1.0)) {
      throw ParamError("jump_prob: must be in (0, 1], got " +
                       std::to_string(jump_prob));
    }
  }
}

const char* source_kind_name(SourceKind kind) {
  switch (kind) {
    case SourceKind::SparseIID:
      return "sparse-iid";
    case SourceKind::PiecewiseMarkov:
      return "piecewise-markov";
    case SourceKind::ContinuousIID:
      return "continuous-iid";
  }
  return "unknown";
}

std::vector<double> sample_block(const SourceSpec& spec, std::size_t n,
                                 std::uint64_t seed) {
  spec.validate();
  if (n < 1) {
    throw ParamError("sample_block: n must be >= 1");
  }
  CounterRng rng(derive_stream(seed, StreamTag::kSource));
  const double lo = spec.value_dist.lower;
  const double hi = spec.value_dist.upper;

  std::vector<double> x(n);
  switch (spec.kind) {
    case SourceKind::SparseIID:
      for (std::size_t i = 0; i < n; ++i) {
        const bool jump = rng.next_bernoulli(spec.jump_prob);
        x[i] = jump ? rng.next_uniform(lo, hi) : 0.0;
      }
      break;
    case SourceKind::PiecewiseMarkov:
      x[0] = rng.next_uniform(lo, hi);
      for (std::size_t i = 1; i < n; ++i) {
        const bool jump = rng.next_bernoulli(spec.jump_prob);
        x[i] = jump ? rng.next_uniform(lo, hi) : x[i - 1];
      }
      break;
    case SourceKind::ContinuousIID:
      for (std::size_t i = 0; i < n; ++i) {
        x[i] = rng.next_uniform(lo, hi);
      }
      break;
  }
  return x;
}

RunDecomposition decompose_runs(const std::vector<double>& x) {
  if (x.empty()) {
    throw ParamError("decompose_runs: input vector is empty");
  }
  RunDecomposition runs;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= x.size(); ++i) {
    if (i == x.size() || x[i] != x[start]) {
      runs.run_lengths.push_back(i - start);
      runs.values.push_back(x[start]);
      start = i;
    }
  }
  return runs;
}

std::vector<double> reassemble_runs(const RunDecomposition& runs) {
  std::vector<double> x;
  for (std::size_t r = 0; r < runs.run_count(); ++r) {
    x.insert(x.end(), runs.run_lengths[r], runs.values[r]);
  }
  return x;
}

double jump_count_tail(std::size_t n, double p, double eps) {
  if (n < 1) {
    throw ParamError("jump_count_tail: n must be >= 1");
  }
  if (!(p >= 0.0) || !(p <= 1.0)) {
    throw ParamError("jump_count_tail: p must be in [0, 1]");
  }
  if (!(eps > 0.0)) {
    throw ParamError("jump_count_tail: eps must be > 0");
  }
  return 2.0 * std::exp(-2.0 * static_cast<double>(n) * eps * eps);
}

}  // namespace csplab
