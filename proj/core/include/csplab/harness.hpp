#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "csplab/config.hpp"
#include "csplab/csp.hpp"
#include "csplab/dimensions.hpp"

namespace csplab {

struct SweepPoint {
  double ratio = 0.0;  // requested m/n
  std::size_t m = 0;
  std::size_t trials = 0;
  std::size_t successes = 0;
  double success_rate = 0.0;
  double smoothed_rate = 0.0;  // 3-point median
};

// Rows (as preformatted CSV lines, schema fixed per experiment kind) plus
// the typed payload each experiment produced; summary is recomputable from
// the rows.
struct ExperimentResult {
  ExperimentKind kind = ExperimentKind::CspRun;
  std::vector<std::string> csv_lines;  // header + rows
  std::vector<std::string> summary_lines;

  std::vector<TrialRow> trial_rows;       // csp-run / bounds / ucsp-run
  std::vector<bool> ucsp_matches;         // ucsp-run: per-trial equality
  BoundReport bound;                      // csp-run / bounds / ucsp-run
  double empirical_failure_rate = 0.0;    // fraction with error >= threshold
  RdCurve curve;                          // codec-eval
  std::vector<RateDistortionStats> curve_stats;  // codec-eval, per grid b
  IdEstimate id_estimate;                 // dim-estimate
  std::vector<SweepPoint> sweep;          // sweep-m
  // Smallest grid ratio whose raw success rate reaches the configured pass
  // rate; NaN when no point qualifies.
  double sweep_threshold = std::numeric_limits<double>::quiet_NaN();
};

// Dispatches on config.kind; fully deterministic given the config,
// including under any thread count.
ExperimentResult run(const ExperimentConfig& config);

void emit_csv(const ExperimentResult& result, const std::string& path);
std::string emit_summary(const ExperimentResult& result);

// Dump formats: codebook rows are index,bitstring,v_1..v_n; matrices are
// row-major with 17-significant-digit decimals (bit-exact reload).
std::vector<std::string> codebook_csv(const Codebook& codebook);
std::vector<std::string> matrix_csv(const MeasurementSystem& sys);

}  // namespace csplab
