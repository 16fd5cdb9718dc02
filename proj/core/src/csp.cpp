#include "csplab/csp.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <string>
#include <unordered_set>

#include "csplab/errors.hpp"
#include "csplab/parallel.hpp"
#include "csplab/rng.hpp"

namespace csplab {

namespace {

double squared_residual(const std::vector<double>& y, const MeasurementSystem& sys,
                        const std::vector<double>& c) {
  double total = 0.0;
  for (std::size_t i = 0; i < sys.m; ++i) {
    const double* row = sys.row(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < sys.n; ++j) {
      acc += row[j] * c[j];
    }
    const double diff = y[i] - acc;
    total += diff * diff;
  }
  return total;
}

double per_letter_error_of(const std::vector<double>& truth,
                           const std::vector<double>& rec) {
  double sq = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double d = truth[i] - rec[i];
    sq += d * d;
  }
  return std::sqrt(sq / static_cast<double>(truth.size()));
}

}  // namespace

CspResult csp_decode(const std::vector<double>& y, const MeasurementSystem& sys,
                     const Codebook& codebook, const std::vector<double>* truth,
                     unsigned threads) {
  if (codebook.entries.empty()) {
    throw ParamError("csp_decode: codebook is empty");
  }
  if (codebook.n != sys.n) {
    throw ParamError("csp_decode: codebook n=" + std::to_string(codebook.n) +
                     " does not match system n=" + std::to_string(sys.n));
  }
  if (y.size() != sys.m) {
    throw ParamError("csp_decode: y has length " + std::to_string(y.size()) +
                     ", system produces m=" + std::to_string(sys.m));
  }
  if (truth != nullptr && truth->size() != sys.n) {
    throw ParamError("csp_decode: truth vector length mismatch");
  }

  // Score every entry. Entries are scored independently (any schedule), the
  // argmin scan below is a single deterministic pass in canonical order.
  std::vector<double> scores(codebook.size());
  parallel_for(codebook.size(), threads, [&](std::size_t e) {
    scores[e] = squared_residual(y, sys, codebook.entries[e].vec);
  });

  std::size_t best = 0;
  for (std::size_t e = 1; e < scores.size(); ++e) {
    if (scores[e] < scores[best]) {
      best = e;  // strict: equal scores keep the earlier (canonically lower) entry
    }
  }

  CspResult result;
  result.reconstruction = codebook.entries[best].vec;
  result.chosen_index = best;
  result.residual = std::sqrt(scores[best]);
  result.per_letter_error = truth != nullptr
                                ? per_letter_error_of(*truth, result.reconstruction)
                                : std::numeric_limits<double>::quiet_NaN();
  return result;
}

bool audit_csp_result(const std::vector<double>& y, const MeasurementSystem& sys,
                      const Codebook& codebook, const CspResult& result,
                      double sample_fraction) {
  if (codebook.entries.empty()) {
    throw ParamError("audit_csp_result: codebook is empty");
  }
  std::size_t stride = 1;
  if (sample_fraction > 0.0 && sample_fraction < 1.0) {
    stride = static_cast<std::size_t>(std::ceil(1.0 / sample_fraction));
  }
  const double chosen = squared_residual(y, sys, result.reconstruction);
  for (std::size_t e = 0; e < codebook.size(); e += stride) {
    if (squared_residual(y, sys, codebook.entries[e].vec) < chosen) {
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// UCSP decodable-set enumeration
// ---------------------------------------------------------------------------

namespace {

// Enumerates the variable-length piecewise-constant encodings that decode
// without error and fit in `budget` bits, i.e. the strings
//   gamma(N) gamma(T_1)..gamma(T_{N-1}) index_1..index_N
// with N <= min(n, K+1) runs, positive partial run lengths leaving at least
// one letter for the last run, and any b-bit index per run (pwc_decode does
// not require adjacent indices distinct, so neither does the enumeration).
// The counting pass adds 2^(b*N) per structure and aborts past `cap`; the
// generation pass materializes entries.
class UcspEnumerator {
 public:
  UcspEnumerator(const BlockCode& code, std::size_t budget, std::uint64_t cap)
      : code_(code),
        budget_(budget),
        cap_(cap),
        quantizer_(code.value_quantizer()),
        levels_(quantizer_.levels()) {
    midpoints_.resize(levels_);
    for (std::uint32_t i = 0; i < levels_; ++i) {
      midpoints_[i] = quantizer_.decode(i);
    }
  }

  // Returns the decodable-string count (saturated at cap_ + 1).
  std::uint64_t count() {
    counting_ = true;
    run();
    return count_;
  }

  std::vector<CodebookEntry> generate() {
    counting_ = false;
    entries_.clear();
    run();
    return std::move(entries_);
  }

 private:
  void run() {
    count_ = 0;
    const std::size_t max_runs =
        std::min(code_.n, code_.effective_max_jumps() + 1);
    for (std::size_t runs = 1; runs <= max_runs; ++runs) {
      const std::size_t header =
          elias_gamma_length(runs) +
          runs * static_cast<std::size_t>(code_.value_bits);
      if (header > budget_) {
        break;  // gamma(N) and N*b both grow with N
      }
      num_runs_ = runs;
      lengths_.assign(runs, 0);
      descend(0, 0, header);
      if (counting_ && count_ > cap_) return;
    }
  }

  // Fixes run length r of num_runs_-1 encoded ones; letters/bits consumed
  // so far are excluding the final run (implied) and value indices
  // (already counted in the header passed to run()).
  void descend(std::size_t r, std::size_t letters_used, std::size_t bits_used) {
    if (counting_ && count_ > cap_) return;
    if (r + 1 == num_runs_) {
      lengths_[num_runs_ - 1] = code_.n - letters_used;
      emit(bits_used);
      return;
    }
    // Remaining encoded runs after this one each need >= 1 letter and
    // >= 1 bit; the final run needs >= 1 letter.
    const std::size_t future_runs = num_runs_ - r - 2;
    for (std::size_t t = 1;; ++t) {
      if (letters_used + t + future_runs + 1 > code_.n) break;
      const std::size_t cost = elias_gamma_length(t);
      if (bits_used + cost + future_runs > budget_) {
        break;  // gamma length is nondecreasing in t
      }
      lengths_[r] = t;
      descend(r + 1, letters_used + t, bits_used + cost);
      if (counting_ && count_ > cap_) return;
    }
  }

  void emit(std::size_t) {
    if (counting_) {
      // 2^(b*N) value assignments; saturate to avoid overflow.
      const std::size_t shift =
          static_cast<std::size_t>(code_.value_bits) * num_runs_;
      if (shift >= 64) {
        count_ = cap_ + 1;
        return;
      }
      const std::uint64_t assignments = 1ull << shift;
      count_ = (count_ > cap_ || cap_ + 1 - count_ <= assignments)
                   ? cap_ + 1
                   : count_ + assignments;
      return;
    }

    BitString structure = elias_gamma_encode(num_runs_);
    for (std::size_t r = 0; r + 1 < num_runs_; ++r) {
      structure.append(elias_gamma_encode(lengths_[r]));
    }
    std::vector<std::uint32_t> digit(num_runs_, 0);
    for (;;) {
      CodebookEntry entry;
      entry.bits = structure;
      entry.vec.reserve(code_.n);
      for (std::size_t r = 0; r < num_runs_; ++r) {
        entry.bits.append_uint(digit[r], code_.value_bits);
        entry.vec.insert(entry.vec.end(), lengths_[r], midpoints_[digit[r]]);
      }
      entries_.push_back(std::move(entry));

      std::size_t d = num_runs_;
      while (d-- > 0) {
        if (++digit[d] < levels_) break;
        digit[d] = 0;
        if (d == 0) return;
      }
    }
  }

  const BlockCode& code_;
  std::size_t budget_;
  std::uint64_t cap_;
  ScalarQuantizer quantizer_;
  std::uint32_t levels_;
  std::vector<double> midpoints_;

  bool counting_ = true;
  std::uint64_t count_ = 0;
  std::size_t num_runs_ = 0;
  std::vector<std::size_t> lengths_;
  std::vector<CodebookEntry> entries_;
};

std::string vector_key(const std::vector<double>& v) {
  std::string key(v.size() * sizeof(double), '\0');
  std::memcpy(key.data(), v.data(), key.size());
  return key;
}

}  // namespace

Codebook ucsp_decodable_codebook(const BlockCode& code, std::size_t bit_budget,
                                 std::uint64_t cap) {
  code.validate();
  if (code.length_mode != LengthMode::VariableLength) {
    throw ParamError("ucsp: requires a variable-length code");
  }
  cap = std::min(cap, std::uint64_t{1} << 62);  // keep cap+1 arithmetic safe

  std::vector<CodebookEntry> candidates;
  if (code.kind == CodecKind::ScalarIID) {
    // The only decodable strings are the full-length index tuples.
    if (bit_budget < code.n * static_cast<std::size_t>(code.value_bits)) {
      throw NoCandidateError("ucsp: no bitstring of length <= " +
                             std::to_string(bit_budget) + " decodes");
    }
    return enumerate_codebook(code, cap);
  }

  UcspEnumerator enumerator(code, bit_budget, cap);
  const std::uint64_t predicted = enumerator.count();
  if (predicted > cap) {
    throw CapacityError("ucsp: decodable-string count exceeds cap " +
                            std::to_string(cap),
                        static_cast<double>(predicted), cap);
  }
  if (predicted == 0) {
    throw NoCandidateError("ucsp: no bitstring of length <= " +
                           std::to_string(bit_budget) + " decodes");
  }
  candidates = enumerator.generate();

  std::sort(candidates.begin(), candidates.end(),
            [](const CodebookEntry& a, const CodebookEntry& b) {
              return canonical_less(a.bits, b.bits);
            });
  // Keep the canonically smallest string for every distinct vector.
  Codebook cb;
  cb.n = code.n;
  std::unordered_set<std::string> seen;
  seen.reserve(candidates.size());
  for (CodebookEntry& entry : candidates) {
    if (seen.insert(vector_key(entry.vec)).second) {
      cb.entries.push_back(std::move(entry));
    }
  }
  cb.declared_rate = std::log2(static_cast<double>(cb.entries.size())) /
                     static_cast<double>(cb.n);
  return cb;
}

CspResult ucsp_decode(const std::vector<double>& y, const MeasurementSystem& sys,
                      const BlockCode& code, std::size_t bit_budget,
                      std::uint64_t cap, const std::vector<double>* truth,
                      unsigned threads) {
  const Codebook decodable = ucsp_decodable_codebook(code, bit_budget, cap);
  return csp_decode(y, sys, decodable, truth, threads);
}

// ---------------------------------------------------------------------------
// Analytic bounds
// ---------------------------------------------------------------------------

namespace {

void check_bound_domain(std::size_t n, std::size_t m, double rate_bits,
                        double distortion, double eta, double alpha,
                        double epsilon_code) {
  if (n < 1 || m < 1) {
    throw ParamError("bound: n and m must be >= 1");
  }
  if (!(distortion > 0.0) || !(distortion < 1.0)) {
    throw ParamError("bound: D must be in (0, 1), got " + std::to_string(distortion));
  }
  if (!(eta > 1.0)) {
    throw ParamError("bound: eta must be > 1, got " + std::to_string(eta));
  }
  if (!(alpha > 0.0)) {
    throw ParamError("bound: alpha must be > 0, got " + std::to_string(alpha));
  }
  if (!(rate_bits > 0.0)) {
    throw ParamError("bound: R must be > 0");
  }
  if (!(epsilon_code >= 0.0) || !(epsilon_code <= 1.0)) {
    throw ParamError("bound: epsilon_code must be in [0, 1]");
  }
}

}  // namespace

BoundReport theorem1_bound(std::size_t n, std::size_t m, double rate_bits,
                           double distortion, double eta, double alpha,
                           double epsilon_code) {
  check_bound_domain(n, m, rate_bits, distortion, eta, alpha, epsilon_code);
  BoundReport report;
  report.delta = eta / std::log2(1.0 / distortion) + alpha;
  const double exponent = (1.0 + report.delta) / eta;
  report.tau = 1.0 - std::pow(distortion, exponent);
  const double prefactor =
      2.0 + std::sqrt(static_cast<double>(n) / static_cast<double>(m));
  report.distortion_threshold =
      prefactor * std::pow(distortion, 0.5 * (1.0 - exponent));
  report.probability_bound =
      epsilon_code +
      std::exp2(-0.5 * static_cast<double>(n) * rate_bits * alpha) +
      std::exp(-0.5 * static_cast<double>(m));
  report.noise_term = 0.0;
  return report;
}

BoundReport theorem2_bound(std::size_t n, std::size_t m, double rate_bits,
                           double distortion, double eta, double alpha,
                           double epsilon_code, double sigma_m, double epsilon_m) {
  if (!(sigma_m >= 0.0)) {
    throw ParamError("bound: sigma_m must be >= 0");
  }
  if (!(epsilon_m >= 0.0) || !(epsilon_m <= 1.0)) {
    throw ParamError("bound: epsilon_m must be in [0, 1]");
  }
  BoundReport report =
      theorem1_bound(n, m, rate_bits, distortion, eta, alpha, epsilon_code);
  const double exponent = (1.0 + report.delta) / eta;
  report.noise_term =
      2.0 * sigma_m /
      std::sqrt(std::pow(distortion, exponent) * static_cast<double>(n));
  report.distortion_threshold += report.noise_term;
  report.probability_bound += epsilon_m;
  return report;
}

// ---------------------------------------------------------------------------
// Trial runner
// ---------------------------------------------------------------------------

CspExperiment prepare_csp_experiment(const SourceSpec& source, const BlockCode& code,
                                     double eta, double alpha, NoiseSpec noise,
                                     double sigma_m, double epsilon_m,
                                     double d_target, std::uint64_t cap,
                                     bool normalize_columns) {
  source.validate();
  code.validate();
  noise.validate();

  CspExperiment ex;
  ex.source = source;
  ex.code = code;
  ex.n = code.n;
  ex.eta = eta;
  ex.alpha = alpha;
  ex.d_target = d_target > 0.0 ? d_target : code.worst_case_distortion();
  ex.epsilon_code = excess_code_prob(code, source);
  ex.sigma_m = sigma_m;
  ex.epsilon_m = epsilon_m;
  ex.normalize_columns = normalize_columns;
  ex.codebook = enumerate_codebook(code, cap);
  ex.m = required_measurements(ex.n, ex.codebook.declared_rate, ex.d_target, eta);

  if (noise.kind == NoiseKind::GaussianIID && noise.sigma == 0.0 && sigma_m > 0.0) {
    noise.sigma = sigma_for_noise_power_bound(sigma_m, epsilon_m, ex.m);
  }
  ex.noise = noise;

  ex.bound = (sigma_m > 0.0 || epsilon_m > 0.0)
                 ? theorem2_bound(ex.n, ex.m, ex.codebook.declared_rate, ex.d_target,
                                  eta, alpha, ex.epsilon_code, sigma_m, epsilon_m)
                 : theorem1_bound(ex.n, ex.m, ex.codebook.declared_rate, ex.d_target,
                                  eta, alpha, ex.epsilon_code);
  return ex;
}

TrialRow run_trial(const CspExperiment& experiment, std::size_t trial_index,
                   std::uint64_t master_seed) {
  const std::uint64_t trial_seed = derive_stream(master_seed, trial_index);
  const std::vector<double> x =
      sample_block(experiment.source, experiment.n, trial_seed);
  const MeasurementSystem sys = sample_matrix(experiment.m, experiment.n, trial_seed,
                                              experiment.normalize_columns);
  const std::vector<double> y = measure(sys, x, experiment.noise, trial_seed);
  const CspResult result = csp_decode(y, sys, experiment.codebook, &x);

  TrialRow row;
  row.trial = trial_index;
  row.seed = trial_seed;
  row.n = experiment.n;
  row.m = experiment.m;
  row.rate_bits = experiment.codebook.declared_rate;
  row.d_target = experiment.d_target;
  row.eta = experiment.eta;
  row.alpha = experiment.alpha;
  row.per_letter_error = result.per_letter_error;
  row.threshold = experiment.bound.distortion_threshold;
  row.success = result.per_letter_error < experiment.bound.distortion_threshold;
  row.residual = result.residual;
  row.noise_sigma = experiment.noise.active() ? experiment.noise.sigma : 0.0;
  return row;
}

TrialRow run_trial(const SourceSpec& source, const BlockCode& code, std::size_t n,
                   double eta, double alpha, const NoiseSpec& noise,
                   std::uint64_t seed) {
  if (n != code.n) {
    throw ParamError("run_trial: n=" + std::to_string(n) +
                     " does not match code n=" + std::to_string(code.n));
  }
  const CspExperiment ex = prepare_csp_experiment(source, code, eta, alpha, noise);
  return run_trial(ex, 0, seed);
}

}  // namespace csplab
