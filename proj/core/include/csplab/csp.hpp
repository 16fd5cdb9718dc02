#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "csplab/codecs.hpp"
#include "csplab/measurement.hpp"
#include "csplab/source_models.hpp"

namespace csplab {

struct CspResult {
  std::vector<double> reconstruction;  // the argmin codebook vector
  std::size_t chosen_index = 0;        // index into the scored entry list
  double residual = 0.0;               // ||y - A*reconstruction||_2
  // (1/sqrt(n)) * ||x - reconstruction||_2 when the true block was supplied;
  // NaN otherwise.
  double per_letter_error = 0.0;
};

// Exhaustive codebook search: returns the entry minimizing ||y - A c||_2^2.
// Every entry is scored; squared residuals accumulate left to right and the
// argmin scan walks entries in canonical order taking the first strict
// minimum, so ties resolve to the lowest canonical bitstring and the result
// does not depend on `threads`.
CspResult csp_decode(const std::vector<double>& y, const MeasurementSystem& sys,
                     const Codebook& codebook,
                     const std::vector<double>* truth = nullptr,
                     unsigned threads = 1);

// The set of vectors reachable by decoding any bitstring of length at most
// bit_budget, deduplicated (several strings may decode to one vector, e.g.
// split runs with equal adjacent value indices) and canonically sorted with
// each vector keeping its canonically smallest encoding. Enumeration works
// by generating valid encodings directly instead of scanning all 2^(L+1)-1
// strings; the decodable-string count is capped by `cap`.
// Throws NoCandidateError when nothing decodes within the budget.
Codebook ucsp_decodable_codebook(const BlockCode& code, std::size_t bit_budget,
                                 std::uint64_t cap = kDefaultCodebookCap);

// Minimizes ||y - A g(b)||_2 over all bitstrings b, |b| <= bit_budget, that
// decode without error (undecodable strings are skipped). Implemented as
// csp_decode over ucsp_decodable_codebook(code, bit_budget, cap).
CspResult ucsp_decode(const std::vector<double>& y, const MeasurementSystem& sys,
                      const BlockCode& code, std::size_t bit_budget,
                      std::uint64_t cap = kDefaultCodebookCap,
                      const std::vector<double>* truth = nullptr,
                      unsigned threads = 1);

// Recomputes the residual of every codebook entry (or a deterministic
// sample of about `sample_fraction` of them on large books) and confirms
// none beats result.residual. Returns true when the certificate holds.
bool audit_csp_result(const std::vector<double>& y, const MeasurementSystem& sys,
                      const Codebook& codebook, const CspResult& result,
                      double sample_fraction = 1.0);

// Analytic recovery guarantee for exhaustive codebook decoding from m
// Gaussian measurements at blocklength n, code rate R and distortion D:
// with delta = eta/log2(1/D) + alpha and tau = 1 - D^((1+delta)/eta),
//   P( per-letter error >= (2 + sqrt(n/m)) * D^((1 - (1+delta)/eta)/2) )
//     <= epsilon_code + 2^(-n R alpha / 2) + e^(-m/2).
// The probability bound may exceed 1 at small n and is reported as-is.
struct BoundReport {
  double delta = 0.0;
  double tau = 0.0;
  double distortion_threshold = 0.0;
  double probability_bound = 0.0;
  double noise_term = 0.0;  // 0 in the noiseless case
};

BoundReport theorem1_bound(std::size_t n, std::size_t m, double rate_bits,
                           double distortion, double eta, double alpha,
                           double epsilon_code);

// Noisy variant: when the measurement noise satisfies
// P(||Z||_2 >= sqrt(m) * sigma_m) <= epsilon_m, the threshold gains
// 2*sigma_m / sqrt(D^((1+delta)/eta) * n) and the probability bound gains
// epsilon_m. With sigma_m = epsilon_m = 0 this reduces to theorem1_bound.
BoundReport theorem2_bound(std::size_t n, std::size_t m, double rate_bits,
                           double distortion, double eta, double alpha,
                           double epsilon_code, double sigma_m, double epsilon_m);

// One row of a Monte-Carlo recovery experiment.
struct TrialRow {
  std::size_t trial = 0;
  std::uint64_t seed = 0;  // derived per-trial stream seed
  std::size_t n = 0;
  std::size_t m = 0;
  double rate_bits = 0.0;
  double d_target = 0.0;
  double eta = 0.0;
  double alpha = 0.0;
  double per_letter_error = 0.0;
  double threshold = 0.0;
  bool success = false;  // per_letter_error < threshold
  double residual = 0.0;
  double noise_sigma = 0.0;
};

// Everything shared between the trials of one experiment: the enumerated
// codebook, the measurement count from the rate/distortion operating point,
// and the analytic bound. Immutable after prepare; safe to share across
// trial workers.
struct CspExperiment {
  SourceSpec source;
  BlockCode code;
  Codebook codebook;
  std::size_t n = 0;
  std::size_t m = 0;
  double eta = 0.0;
  double alpha = 0.0;
  double d_target = 0.0;
  double epsilon_code = 0.0;
  NoiseSpec noise;
  double sigma_m = 0.0;
  double epsilon_m = 0.0;
  BoundReport bound;
  bool normalize_columns = false;
};

// d_target <= 0 selects the code's worst-case quantizer distortion.
// Gaussian noise with sigma = 0 and sigma_m > 0 is auto-calibrated via
// sigma_for_noise_power_bound(sigma_m, epsilon_m, m). The bound is the
// noisy variant exactly when sigma_m > 0 or epsilon_m > 0.
CspExperiment prepare_csp_experiment(const SourceSpec& source, const BlockCode& code,
                                     double eta, double alpha, NoiseSpec noise,
                                     double sigma_m = 0.0, double epsilon_m = 0.0,
                                     double d_target = -1.0,
                                     std::uint64_t cap = kDefaultCodebookCap,
                                     bool normalize_columns = false);

// One end-to-end sample of the recovery experiment: sample a block, draw a
// fresh measurement matrix, measure (plus noise), decode, compare against
// the threshold. Deterministic in (experiment, trial_index, master_seed).
TrialRow run_trial(const CspExperiment& experiment, std::size_t trial_index,
                   std::uint64_t master_seed);

// Convenience one-shot form; enumerates the codebook on every call.
// `n` must match code.n.
TrialRow run_trial(const SourceSpec& source, const BlockCode& code, std::size_t n,
                   double eta, double alpha, const NoiseSpec& noise,
                   std::uint64_t seed);

}  // namespace csplab
