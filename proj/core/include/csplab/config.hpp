#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "csplab/codecs.hpp"
#include "csplab/measurement.hpp"
#include "csplab/source_models.hpp"

namespace csplab {

enum class ExperimentKind {
  Sample,
  CodecEval,
  CspRun,
  SweepM,
  DimEstimate,
  Bounds,
  Ucsp,
};

const char* experiment_kind_name(ExperimentKind kind);
ExperimentKind experiment_kind_from_name(const std::string& name);

// Flat `key = value` text; '#' starts a comment, blank lines ignored,
// later assignments win. Keys are dotted (source.p = 0.1).
using KeyValueMap = std::map<std::string, std::string>;

KeyValueMap parse_config_text(const std::string& text);
KeyValueMap load_config_file(const std::string& path);

// Applies one `key=value` override (CLI --set) on top of `kv`.
void apply_override(KeyValueMap& kv, const std::string& assignment);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::CspRun;
  SourceSpec source;
  BlockCode code;  // code.n mirrors n
  std::size_t n = 24;
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  double eta = 2.0;
  double alpha = 0.1;
  NoiseSpec noise;
  double sigma_m = 0.0;     // Theorem 2 noise-power bound; 0 = noiseless analysis
  double epsilon_m = 0.0;
  double d_target = -1.0;   // <= 0 selects the code's worst-case distortion
  std::uint64_t cap = kDefaultCodebookCap;
  unsigned threads = 0;     // 0 = auto (env override, then hardware)
  bool normalize_columns = false;

  std::vector<double> sweep_ratios;  // m/n grid for SweepM
  double sweep_pass_rate = 0.95;     // threshold-estimate success level

  std::vector<int> b_grid;       // resolutions for DimEstimate / CodecEval
  std::size_t dim_samples = 100000;
  std::size_t dim_k = 0;

  std::size_t bit_budget = 0;  // Ucsp; 0 = code.max_codeword_length()

  std::string out_path;  // empty = no CSV file

  // Parses and validates; unknown keys and malformed values raise
  // ParamError naming the offending key.
  static ExperimentConfig from_kv(ExperimentKind kind, const KeyValueMap& kv);

  void validate() const;
};

}  // namespace csplab
