#include "csplab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "csplab/csv.hpp"
#include "csplab/errors.hpp"
#include "csplab/parallel.hpp"
#include "csplab/rng.hpp"

namespace csplab {

namespace {

std::string fmt_sz(std::size_t v) { return std::to_string(v); }
std::string fmt_u64(std::uint64_t v) { return std::to_string(v); }

const char* kTrialHeader =
    "trial,seed,n,m,R_bits,D_target,eta,alpha,per_letter_error,threshold,"
    "success,residual,noise_sigma";

std::string trial_row_csv(const TrialRow& row) {
  return join_csv({fmt_sz(row.trial), fmt_u64(row.seed), fmt_sz(row.n),
                   fmt_sz(row.m), format_double(row.rate_bits),
                   format_double(row.d_target), format_double(row.eta),
                   format_double(row.alpha), format_double(row.per_letter_error),
                   format_double(row.threshold), row.success ? "1" : "0",
                   format_double(row.residual), format_double(row.noise_sigma)});
}

std::string source_tag(const SourceSpec& spec) {
  std::string tag = source_kind_name(spec.kind);
  if (spec.kind != SourceKind::ContinuousIID) {
    tag += "-p" + format_double(spec.jump_prob);
  }
  return tag;
}

CspExperiment make_experiment(const ExperimentConfig& config) {
  return prepare_csp_experiment(config.source, config.code, config.eta,
                                config.alpha, config.noise, config.sigma_m,
                                config.epsilon_m, config.d_target, config.cap,
                                config.normalize_columns);
}

void append_bound_summary(const CspExperiment& ex, double empirical_failure,
                          std::size_t trials, std::vector<std::string>& out) {
  out.push_back("codebook_size=" + fmt_sz(ex.codebook.size()) +
                " R_bits=" + format_double(ex.codebook.declared_rate) +
                " m=" + fmt_sz(ex.m) + " n=" + fmt_sz(ex.n));
  out.push_back("D_target=" + format_double(ex.d_target) +
                " epsilon_code=" + format_double(ex.epsilon_code) +
                " noise_sigma=" +
                format_double(ex.noise.active() ? ex.noise.sigma : 0.0));
  out.push_back("threshold=" + format_double(ex.bound.distortion_threshold) +
                " noise_term=" + format_double(ex.bound.noise_term) +
                " probability_bound=" + format_double(ex.bound.probability_bound));
  out.push_back("empirical_failure_rate=" + format_double(empirical_failure) +
                " trials=" + fmt_sz(trials));
}

ExperimentResult run_sample(const ExperimentConfig& config) {
  ExperimentResult result;
  result.kind = config.kind;
  const std::vector<double> x = sample_block(config.source, config.n, config.seed);
  result.csv_lines.push_back("# source=" + std::string(source_kind_name(config.source.kind)) +
                             " p=" + format_double(config.source.jump_prob) +
                             " n=" + fmt_sz(config.n) + " seed=" + fmt_u64(config.seed));
  for (double v : x) {
    result.csv_lines.push_back(format_double(v));
  }
  const RunDecomposition runs = decompose_runs(x);
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  result.summary_lines.push_back("experiment=sample source=" + source_tag(config.source));
  result.summary_lines.push_back("n=" + fmt_sz(config.n) + " seed=" + fmt_u64(config.seed) +
                                 " runs=" + fmt_sz(runs.run_count()) +
                                 " mean=" + format_double(mean));
  return result;
}

ExperimentResult run_codec_eval(const ExperimentConfig& config) {
  ExperimentResult result;
  result.kind = config.kind;
  std::vector<int> grid = config.b_grid;
  if (grid.empty()) {
    grid.push_back(config.code.value_bits);
  }

  result.curve.source_tag = source_tag(config.source);
  result.curve.codec_tag = codec_kind_name(config.code.kind);
  result.curve.seed_count = config.trials;

  result.csv_lines.push_back("D,R,codec,source,seed_count");
  result.summary_lines.push_back("experiment=codec-eval source=" +
                                 result.curve.source_tag +
                                 " codec=" + result.curve.codec_tag +
                                 " trials=" + fmt_sz(config.trials));
  for (int b : grid) {
    BlockCode code = config.code;
    code.value_bits = b;
    code.validate();
    const RateDistortionStats stats = empirical_rate_distortion(
        code, config.source, config.trials, config.seed, config.d_target);
    result.curve_stats.push_back(stats);
    result.curve.points.push_back({stats.mean_distortion, stats.mean_rate});
    result.csv_lines.push_back(join_csv(
        {format_double(stats.mean_distortion), format_double(stats.mean_rate),
         result.curve.codec_tag + "-b" + std::to_string(b),
         result.curve.source_tag, fmt_sz(config.trials)}));
    std::string line = "b=" + std::to_string(b) +
                       " mean_rate=" + format_double(stats.mean_rate) +
                       " mean_distortion=" + format_double(stats.mean_distortion) +
                       " excess_prob=" + format_double(stats.excess_prob) +
                       " excess_threshold=" + format_double(stats.excess_threshold);
    if (config.code.kind == CodecKind::PiecewiseConstant &&
        config.source.kind == SourceKind::PiecewiseMarkov &&
        stats.mean_distortion > 0.0 &&
        stats.mean_distortion < config.source.value_dist.variance()) {
      const auto [lo, hi] = rd_bracket_pwc(config.source.jump_prob,
                                           stats.mean_distortion,
                                           config.source.value_dist);
      line += " bracket_lower=" + format_double(lo) +
              " bracket_upper=" + format_double(hi);
    }
    result.summary_lines.push_back(line);
  }
  return result;
}

ExperimentResult run_dim_estimate(const ExperimentConfig& config) {
  ExperimentResult result;
  result.kind = config.kind;
  result.id_estimate = estimate_id_process(config.source, config.dim_samples,
                                           config.dim_k, config.b_grid,
                                           config.seed);
  result.csv_lines.push_back("b,H_norm");
  for (const auto& [b, h_norm] : result.id_estimate.per_b) {
    result.csv_lines.push_back(join_csv({std::to_string(b), format_double(h_norm)}));
  }
  result.csv_lines.push_back(join_csv({"slope", format_double(result.id_estimate.value)}));
  result.summary_lines.push_back("experiment=dim-estimate source=" +
                                 source_tag(config.source) +
                                 " samples=" + fmt_sz(config.dim_samples) +
                                 " k=" + fmt_sz(config.dim_k));
  result.summary_lines.push_back("id_estimate=" +
                                 format_double(result.id_estimate.value));
  return result;
}

ExperimentResult run_csp(const ExperimentConfig& config, unsigned threads) {
  ExperimentResult result;
  result.kind = config.kind;
  const CspExperiment ex = make_experiment(config);
  result.bound = ex.bound;

  result.trial_rows.resize(config.trials);
  parallel_for(config.trials, threads, [&](std::size_t t) {
    result.trial_rows[t] = run_trial(ex, t, config.seed);
  });

  std::size_t failures = 0;
  result.csv_lines.push_back(kTrialHeader);
  for (const TrialRow& row : result.trial_rows) {
    result.csv_lines.push_back(trial_row_csv(row));
    if (!row.success) ++failures;
  }
  result.empirical_failure_rate =
      static_cast<double>(failures) / static_cast<double>(config.trials);

  result.summary_lines.push_back("experiment=" +
                                 std::string(experiment_kind_name(config.kind)) +
                                 " source=" + source_tag(config.source));
  append_bound_summary(ex, result.empirical_failure_rate, config.trials,
                       result.summary_lines);
  if (config.kind == ExperimentKind::Bounds) {
    // Bound-vs-empirical table, one row per applicable theorem.
    const double capped =
        std::min(1.0, result.bound.probability_bound);
    result.summary_lines.push_back("bound_table: threshold probability_bound empirical_failure_rate");
    result.summary_lines.push_back(
        "bound_row: " + format_double(result.bound.distortion_threshold) + " " +
        format_double(capped) + " " +
        format_double(result.empirical_failure_rate));
    if (ex.sigma_m > 0.0 || ex.epsilon_m > 0.0) {
      const BoundReport clean =
          theorem1_bound(ex.n, ex.m, ex.codebook.declared_rate, ex.d_target,
                         ex.eta, ex.alpha, ex.epsilon_code);
      result.summary_lines.push_back(
          "noiseless_reference: threshold=" +
          format_double(clean.distortion_threshold) + " probability_bound=" +
          format_double(std::min(1.0, clean.probability_bound)));
    }
  }
  return result;
}

ExperimentResult run_ucsp(const ExperimentConfig& config, unsigned threads) {
  ExperimentResult result;
  result.kind = config.kind;
  const CspExperiment ex = make_experiment(config);
  result.bound = ex.bound;
  const std::size_t budget = config.bit_budget > 0
                                 ? config.bit_budget
                                 : config.code.max_codeword_length();
  const Codebook decodable =
      ucsp_decodable_codebook(config.code, budget, config.cap);

  result.trial_rows.resize(config.trials);
  std::vector<std::uint8_t> matches(config.trials, 0);
  parallel_for(config.trials, threads, [&](std::size_t t) {
    const std::uint64_t trial_seed = derive_stream(config.seed, t);
    const std::vector<double> x = sample_block(ex.source, ex.n, trial_seed);
    const MeasurementSystem sys =
        sample_matrix(ex.m, ex.n, trial_seed, ex.normalize_columns);
    const std::vector<double> y = measure(sys, x, ex.noise, trial_seed);
    const CspResult via_ucsp = csp_decode(y, sys, decodable, &x);
    const CspResult via_csp = csp_decode(y, sys, ex.codebook, &x);
    matches[t] = via_ucsp.reconstruction == via_csp.reconstruction ? 1 : 0;

    TrialRow row;
    row.trial = t;
    row.seed = trial_seed;
    row.n = ex.n;
    row.m = ex.m;
    row.rate_bits = ex.codebook.declared_rate;
    row.d_target = ex.d_target;
    row.eta = ex.eta;
    row.alpha = ex.alpha;
    row.per_letter_error = via_ucsp.per_letter_error;
    row.threshold = ex.bound.distortion_threshold;
    row.success = via_ucsp.per_letter_error < ex.bound.distortion_threshold;
    row.residual = via_ucsp.residual;
    row.noise_sigma = ex.noise.active() ? ex.noise.sigma : 0.0;
    result.trial_rows[t] = row;
  });

  std::size_t failures = 0;
  std::size_t agreed = 0;
  result.ucsp_matches.resize(config.trials);
  result.csv_lines.push_back(std::string(kTrialHeader) + ",match");
  for (std::size_t t = 0; t < config.trials; ++t) {
    result.ucsp_matches[t] = matches[t] != 0;
    if (matches[t] != 0) ++agreed;
    if (!result.trial_rows[t].success) ++failures;
    result.csv_lines.push_back(trial_row_csv(result.trial_rows[t]) + "," +
                               (matches[t] != 0 ? "1" : "0"));
  }
  result.empirical_failure_rate =
      static_cast<double>(failures) / static_cast<double>(config.trials);

  result.summary_lines.push_back("experiment=ucsp-run source=" +
                                 source_tag(config.source));
  result.summary_lines.push_back("bit_budget=" + fmt_sz(budget) +
                                 " decodable_vectors=" + fmt_sz(decodable.size()) +
                                 " codebook_size=" + fmt_sz(ex.codebook.size()));
  result.summary_lines.push_back(
      "agreement=" + fmt_sz(agreed) + "/" + fmt_sz(config.trials));
  append_bound_summary(ex, result.empirical_failure_rate, config.trials,
                       result.summary_lines);
  return result;
}

ExperimentResult run_sweep(const ExperimentConfig& config, unsigned threads) {
  ExperimentResult result;
  result.kind = config.kind;
  const Codebook codebook = enumerate_codebook(config.code, config.cap);
  const double d_target = config.d_target > 0.0
                              ? config.d_target
                              : config.code.worst_case_distortion();
  const double error_threshold = std::sqrt(d_target);

  const std::size_t points = config.sweep_ratios.size();
  const std::size_t total = points * config.trials;
  std::vector<std::size_t> ms(points);
  for (std::size_t g = 0; g < points; ++g) {
    const auto rounded = std::llround(config.sweep_ratios[g] *
                                      static_cast<double>(config.n));
    ms[g] = rounded < 1 ? 1 : static_cast<std::size_t>(rounded);
  }

  // Sweep success means the reconstruction is quantization-accurate:
  // squared per-letter error within the distortion target. This criterion
  // is independent of m, unlike the theorem thresholds.
  std::vector<std::uint8_t> ok(total, 0);
  parallel_for(total, threads, [&](std::size_t idx) {
    const std::size_t g = idx / config.trials;
    const std::size_t t = idx % config.trials;
    const std::uint64_t point_seed = derive_stream(config.seed, g);
    const std::uint64_t trial_seed = derive_stream(point_seed, t);
    const std::vector<double> x = sample_block(config.source, config.n, trial_seed);
    const MeasurementSystem sys =
        sample_matrix(ms[g], config.n, trial_seed, config.normalize_columns);
    const std::vector<double> y = measure(sys, x, config.noise, trial_seed);
    const CspResult res = csp_decode(y, sys, codebook, &x);
    ok[idx] = res.per_letter_error * res.per_letter_error <= d_target ? 1 : 0;
  });

  result.sweep.resize(points);
  for (std::size_t g = 0; g < points; ++g) {
    SweepPoint& pt = result.sweep[g];
    pt.ratio = config.sweep_ratios[g];
    pt.m = ms[g];
    pt.trials = config.trials;
    pt.successes = 0;
    for (std::size_t t = 0; t < config.trials; ++t) {
      pt.successes += ok[g * config.trials + t];
    }
    pt.success_rate =
        static_cast<double>(pt.successes) / static_cast<double>(config.trials);
  }
  for (std::size_t g = 0; g < points; ++g) {
    const double a = result.sweep[g > 0 ? g - 1 : 0].success_rate;
    const double b = result.sweep[g].success_rate;
    const double c = result.sweep[g + 1 < points ? g + 1 : points - 1].success_rate;
    result.sweep[g].smoothed_rate =
        std::max(std::min(a, b), std::min(std::max(a, b), c));
  }
  for (const SweepPoint& pt : result.sweep) {
    if (pt.success_rate >= config.sweep_pass_rate) {
      result.sweep_threshold = pt.ratio;
      break;
    }
  }

  result.csv_lines.push_back("ratio,m,n,trials,successes,success_rate,smoothed_rate");
  for (const SweepPoint& pt : result.sweep) {
    result.csv_lines.push_back(join_csv(
        {format_double(pt.ratio), fmt_sz(pt.m), fmt_sz(config.n),
         fmt_sz(pt.trials), fmt_sz(pt.successes), format_double(pt.success_rate),
         format_double(pt.smoothed_rate)}));
  }
  result.summary_lines.push_back("experiment=sweep-m source=" +
                                 source_tag(config.source) +
                                 " codebook_size=" + fmt_sz(codebook.size()) +
                                 " d_target=" + format_double(d_target) +
                                 " error_threshold=" + format_double(error_threshold));
  for (const SweepPoint& pt : result.sweep) {
    result.summary_lines.push_back(
        "ratio=" + format_double(pt.ratio) + " m=" + fmt_sz(pt.m) +
        " success_rate=" + format_double(pt.success_rate) +
        " smoothed=" + format_double(pt.smoothed_rate));
  }
  result.summary_lines.push_back(
      std::isnan(result.sweep_threshold)
          ? std::string("threshold_estimate=none")
          : "threshold_estimate=" + format_double(result.sweep_threshold));
  return result;
}

}  // namespace

ExperimentResult run(const ExperimentConfig& config) {
  config.validate();
  const unsigned threads = resolve_thread_count(config.threads);
  switch (config.kind) {
    case ExperimentKind::Sample:
      return run_sample(config);
    case ExperimentKind::CodecEval:
      return run_codec_eval(config);
    case ExperimentKind::DimEstimate:
      return run_dim_estimate(config);
    case ExperimentKind::CspRun:
    case ExperimentKind::Bounds:
      return run_csp(config, threads);
    case ExperimentKind::Ucsp:
      return run_ucsp(config, threads);
    case ExperimentKind::SweepM:
      return run_sweep(config, threads);
  }
  throw ParamError("unknown experiment kind");
}

void emit_csv(const ExperimentResult& result, const std::string& path) {
  write_lines(path, result.csv_lines);
}

std::string emit_summary(const ExperimentResult& result) {
  std::string text;
  for (const std::string& line : result.summary_lines) {
    text += line;
    text += '\n';
  }
  return text;
}

std::vector<std::string> codebook_csv(const Codebook& codebook) {
  std::vector<std::string> lines;
  lines.reserve(codebook.size() + 1);
  std::string header = "index,bitstring";
  for (std::size_t j = 1; j <= codebook.n; ++j) {
    header += ",v_" + fmt_sz(j);
  }
  lines.push_back(header);
  for (std::size_t i = 0; i < codebook.size(); ++i) {
    std::string line = fmt_sz(i) + "," + codebook.entries[i].bits.to_string();
    for (double v : codebook.entries[i].vec) {
      line += ",";
      line += format_double(v);
    }
    lines.push_back(line);
  }
  return lines;
}

std::vector<std::string> matrix_csv(const MeasurementSystem& sys) {
  std::vector<std::string> lines;
  lines.reserve(sys.m);
  for (std::size_t i = 0; i < sys.m; ++i) {
    std::vector<std::string> fields;
    fields.reserve(sys.n);
    for (std::size_t j = 0; j < sys.n; ++j) {
      fields.push_back(format_double_17(sys.at(i, j)));
    }
    lines.push_back(join_csv(fields));
  }
  return lines;
}

}  // namespace csplab
