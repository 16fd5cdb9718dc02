#include "csplab/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "csplab/errors.hpp"

namespace csplab {

namespace {

std::string trim(const std::string& s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(begin, end - begin);
}

[[noreturn]] void bad_key(const std::string& key, const std::string& why) {
  throw ParamError("config key '" + key + "': " + why);
}

double parse_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  const char* first = value.data();
  const char* last = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last) bad_key(key, "expected a real number, got '" + value + "'");
  return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  const char* first = value.data();
  const char* last = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last) bad_key(key, "expected a nonnegative integer, got '" + value + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  bad_key(key, "expected a boolean, got '" + value + "'");
}

std::vector<std::string> split_commas(const std::string& value) {
  std::vector<std::string> parts;
  std::string item;
  std::stringstream ss(value);
  while (std::getline(ss, item, ',')) {
    parts.push_back(trim(item));
  }
  return parts;
}

// Accepts "a,b,c" and the range shorthand "lo..hi" (inclusive, step 1).
std::vector<int> parse_int_list(const std::string& key, const std::string& value) {
  std::vector<int> out;
  for (const std::string& part : split_commas(value)) {
    const std::size_t dots = part.find("..");
    if (dots != std::string::npos) {
      const std::uint64_t lo = parse_u64(key, trim(part.substr(0, dots)));
      const std::uint64_t hi = parse_u64(key, trim(part.substr(dots + 2)));
      if (lo > hi) bad_key(key, "range '" + part + "' is empty");
      for (std::uint64_t v = lo; v <= hi; ++v) out.push_back(static_cast<int>(v));
    } else {
      out.push_back(static_cast<int>(parse_u64(key, part)));
    }
  }
  if (out.empty()) bad_key(key, "expected a nonempty integer list");
  return out;
}

std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  for (const std::string& part : split_commas(value)) {
    out.push_back(parse_double(key, part));
  }
  if (out.empty()) bad_key(key, "expected a nonempty real list");
  return out;
}

SourceKind parse_source_kind(const std::string& key, const std::string& value) {
  if (value == "sparse-iid") return SourceKind::SparseIID;
  if (value == "piecewise-markov") return SourceKind::PiecewiseMarkov;
  if (value == "continuous-iid") return SourceKind::ContinuousIID;
  bad_key(key, "expected sparse-iid | piecewise-markov | continuous-iid, got '" + value + "'");
}

CodecKind parse_codec_kind(const std::string& key, const std::string& value) {
  if (value == "scalar-iid") return CodecKind::ScalarIID;
  if (value == "piecewise-constant") return CodecKind::PiecewiseConstant;
  bad_key(key, "expected scalar-iid | piecewise-constant, got '" + value + "'");
}

LengthMode parse_length_mode(const std::string& key, const std::string& value) {
  if (value == "variable") return LengthMode::VariableLength;
  if (value == "fixed") return LengthMode::FixedLength;
  bad_key(key, "expected variable | fixed, got '" + value + "'");
}

NoiseKind parse_noise_kind(const std::string& key, const std::string& value) {
  if (value == "none") return NoiseKind::None;
  if (value == "gaussian") return NoiseKind::GaussianIID;
  bad_key(key, "expected none | gaussian, got '" + value + "'");
}

}  // namespace

const char* experiment_kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Sample: return "sample";
    case ExperimentKind::CodecEval: return "codec-eval";
    case ExperimentKind::CspRun: return "csp-run";
    case ExperimentKind::SweepM: return "sweep-m";
    case ExperimentKind::DimEstimate: return "dim-estimate";
    case ExperimentKind::Bounds: return "bounds";
    case ExperimentKind::Ucsp: return "ucsp-run";
  }
  throw ParamError("unknown experiment kind");
}

ExperimentKind experiment_kind_from_name(const std::string& name) {
  for (ExperimentKind kind :
       {ExperimentKind::Sample, ExperimentKind::CodecEval, ExperimentKind::CspRun,
        ExperimentKind::SweepM, ExperimentKind::DimEstimate, ExperimentKind::Bounds,
        ExperimentKind::Ucsp}) {
    if (name == experiment_kind_name(kind)) return kind;
  }
  throw ParamError("unknown experiment '" + name + "'");
}

KeyValueMap parse_config_text(const std::string& text) {
  KeyValueMap kv;
  std::stringstream ss(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ParamError("config line " + std::to_string(lineno) +
                       ": expected key = value, got '" + stripped + "'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      throw ParamError("config line " + std::to_string(lineno) + ": empty key");
    }
    kv[key] = value;
  }
  return kv;
}

KeyValueMap load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParamError("cannot open config file '" + path + "'");
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

void apply_override(KeyValueMap& kv, const std::string& assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw ParamError("--set expects key=value, got '" + assignment + "'");
  }
  const std::string key = trim(assignment.substr(0, eq));
  if (key.empty()) {
    throw ParamError("--set expects key=value, got '" + assignment + "'");
  }
  kv[key] = trim(assignment.substr(eq + 1));
}

ExperimentConfig ExperimentConfig::from_kv(ExperimentKind kind,
                                           const KeyValueMap& kv) {
  ExperimentConfig cfg;
  cfg.kind = kind;

  static const std::vector<std::string> known = {
      "experiment",      "source.kind",     "source.p",
      "source.lower",    "source.upper",    "codec.kind",
      "codec.value_bits", "codec.max_jumps", "codec.length_mode",
      "n",               "trials",          "seed",
      "eta",             "alpha",           "noise.kind",
      "noise.sigma",     "noise.sigma_m",   "noise.epsilon_m",
      "d_target",        "cap",             "threads",
      "matrix.normalize", "sweep.ratios",   "sweep.pass_rate",
      "dim.b_grid",      "dim.samples",     "dim.k",
      "ucsp.bit_budget",
  };
  for (const auto& [key, value] : kv) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ParamError("unknown config key '" + key + "'");
    }
    (void)value;
  }

  const auto get = [&kv](const char* key) -> const std::string* {
    const auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };

  if (const auto* v = get("experiment")) {
    if (experiment_kind_from_name(*v) != kind) {
      throw ParamError("config key 'experiment': '" + *v +
                       "' conflicts with the requested subcommand '" +
                       experiment_kind_name(kind) + "'");
    }
  }
  if (const auto* v = get("source.kind")) cfg.source.kind = parse_source_kind("source.kind", *v);
  if (const auto* v = get("source.p")) cfg.source.jump_prob = parse_double("source.p", *v);
  if (const auto* v = get("source.lower")) cfg.source.value_dist.lower = parse_double("source.lower", *v);
  if (const auto* v = get("source.upper")) cfg.source.value_dist.upper = parse_double("source.upper", *v);
  if (const auto* v = get("codec.kind")) cfg.code.kind = parse_codec_kind("codec.kind", *v);
  if (const auto* v = get("codec.value_bits")) {
    const std::uint64_t b = parse_u64("codec.value_bits", *v);
    if (b < 1 || b > 30) bad_key("codec.value_bits", "must be in [1, 30]");
    cfg.code.value_bits = static_cast<int>(b);
  }
  if (const auto* v = get("codec.max_jumps")) cfg.code.max_jumps = parse_u64("codec.max_jumps", *v);
  if (const auto* v = get("codec.length_mode")) cfg.code.length_mode = parse_length_mode("codec.length_mode", *v);
  if (const auto* v = get("n")) {
    cfg.n = parse_u64("n", *v);
    if (cfg.n < 1) bad_key("n", "must be >= 1");
  }
  if (const auto* v = get("trials")) cfg.trials = parse_u64("trials", *v);
  if (const auto* v = get("seed")) cfg.seed = parse_u64("seed", *v);
  if (const auto* v = get("eta")) cfg.eta = parse_double("eta", *v);
  if (const auto* v = get("alpha")) cfg.alpha = parse_double("alpha", *v);
  if (const auto* v = get("noise.kind")) cfg.noise.kind = parse_noise_kind("noise.kind", *v);
  if (const auto* v = get("noise.sigma")) cfg.noise.sigma = parse_double("noise.sigma", *v);
  if (const auto* v = get("noise.sigma_m")) cfg.sigma_m = parse_double("noise.sigma_m", *v);
  if (const auto* v = get("noise.epsilon_m")) cfg.epsilon_m = parse_double("noise.epsilon_m", *v);
  if (const auto* v = get("d_target")) cfg.d_target = parse_double("d_target", *v);
  if (const auto* v = get("cap")) cfg.cap = parse_u64("cap", *v);
  if (const auto* v = get("threads")) {
    const std::uint64_t t = parse_u64("threads", *v);
    if (t < 1) bad_key("threads", "must be >= 1");
    cfg.threads = static_cast<unsigned>(t);
  }
  if (const auto* v = get("matrix.normalize")) cfg.normalize_columns = parse_bool("matrix.normalize", *v);
  if (const auto* v = get("sweep.ratios")) cfg.sweep_ratios = parse_double_list("sweep.ratios", *v);
  if (const auto* v = get("sweep.pass_rate")) cfg.sweep_pass_rate = parse_double("sweep.pass_rate", *v);
  if (const auto* v = get("dim.b_grid")) cfg.b_grid = parse_int_list("dim.b_grid", *v);
  if (const auto* v = get("dim.samples")) cfg.dim_samples = parse_u64("dim.samples", *v);
  if (const auto* v = get("dim.k")) cfg.dim_k = parse_u64("dim.k", *v);
  if (const auto* v = get("ucsp.bit_budget")) cfg.bit_budget = parse_u64("ucsp.bit_budget", *v);

  // The codec inherits the block length and value distribution.
  cfg.code.n = cfg.n;
  cfg.code.value_dist = cfg.source.value_dist;

  cfg.validate();
  return cfg;
}

void ExperimentConfig::validate() const {
  source.validate();
  noise.validate();
  if (n < 1) throw ParamError("config key 'n': must be >= 1");
  if (!(sigma_m >= 0.0)) throw ParamError("config key 'noise.sigma_m': must be >= 0");
  if (!(epsilon_m >= 0.0) || !(epsilon_m <= 1.0)) {
    throw ParamError("config key 'noise.epsilon_m': must be in [0, 1]");
  }
  switch (kind) {
    case ExperimentKind::Sample:
      break;
    case ExperimentKind::DimEstimate: {
      if (b_grid.size() < 3) {
        throw ParamError("config key 'dim.b_grid': need at least 3 resolutions");
      }
      if (dim_samples < 1) throw ParamError("config key 'dim.samples': must be >= 1");
      break;
    }
    case ExperimentKind::CodecEval: {
      code.validate();
      if (trials < 1) throw ParamError("config key 'trials': must be >= 1");
      break;
    }
    case ExperimentKind::SweepM: {
      code.validate();
      if (trials < 1) throw ParamError("config key 'trials': must be >= 1");
      if (sweep_ratios.empty()) {
        throw ParamError("config key 'sweep.ratios': required for sweep-m");
      }
      for (double r : sweep_ratios) {
        if (!(r > 0.0)) throw ParamError("config key 'sweep.ratios': ratios must be > 0");
      }
      if (!std::is_sorted(sweep_ratios.begin(), sweep_ratios.end())) {
        throw ParamError("config key 'sweep.ratios': must be increasing");
      }
      if (!(sweep_pass_rate > 0.0) || !(sweep_pass_rate <= 1.0)) {
        throw ParamError("config key 'sweep.pass_rate': must be in (0, 1]");
      }
      break;
    }
    case ExperimentKind::CspRun:
    case ExperimentKind::Bounds:
    case ExperimentKind::Ucsp: {
      code.validate();
      if (trials < 1) throw ParamError("config key 'trials': must be >= 1");
      if (!(eta > 1.0)) throw ParamError("config key 'eta': must be > 1");
      if (!(alpha > 0.0)) throw ParamError("config key 'alpha': must be > 0");
      break;
    }
  }
}

}  // namespace csplab
