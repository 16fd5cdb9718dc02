#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "csplab/config.hpp"
#include "csplab/csv.hpp"
#include "csplab/errors.hpp"
#include "csplab/harness.hpp"

using namespace csplab;

namespace {

ExperimentConfig cfg_from(ExperimentKind kind, const std::string& text) {
  return ExperimentConfig::from_kv(kind, parse_config_text(text));
}

const char* kSmallCsp =
    "source.kind = piecewise-markov\n"
    "source.p = 0.2\n"
    "codec.kind = piecewise-constant\n"
    "codec.value_bits = 1\n"
    "codec.max_jumps = 1\n"
    "n = 8\n"
    "trials = 5\n"
    "seed = 42\n"
    "eta = 2.0\n"
    "alpha = 0.2\n";

}  // namespace

TEST_CASE("config text parsing: comments, blanks, later assignments win") {
  const KeyValueMap kv = parse_config_text(
      "# a comment\n"
      "\n"
      "n = 8   # trailing comment\n"
      "  seed=1\n"
      "seed = 7\n");
  CHECK(kv.size() == 2);
  CHECK(kv.at("n") == "8");
  CHECK(kv.at("seed") == "7");
}

TEST_CASE("config text parsing rejects malformed lines with their number") {
  try {
    parse_config_text("n = 8\nbogus line\n");
    FAIL("expected ParamError");
  } catch (const ParamError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config_text("= 3\n"), ParamError);
}

TEST_CASE("--set overrides layer on top of the file") {
  KeyValueMap kv = parse_config_text("n = 8\n");
  apply_override(kv, "n=16");
  apply_override(kv, "seed = 3");
  CHECK(kv.at("n") == "16");
  CHECK(kv.at("seed") == "3");
  CHECK_THROWS_AS(apply_override(kv, "no-equals"), ParamError);
  CHECK_THROWS_AS(apply_override(kv, "=5"), ParamError);
}

TEST_CASE("from_kv names offending keys") {
  try {
    cfg_from(ExperimentKind::CspRun, std::string(kSmallCsp) + "bogus.key = 1\n");
    FAIL("expected ParamError");
  } catch (const ParamError& e) {
    CHECK(std::string(e.what()).find("bogus.key") != std::string::npos);
  }
  try {
    cfg_from(ExperimentKind::CspRun, std::string(kSmallCsp) + "eta = fast\n");
    FAIL("expected ParamError");
  } catch (const ParamError& e) {
    CHECK(std::string(e.what()).find("eta") != std::string::npos);
  }
}

TEST_CASE("the experiment key must agree with the subcommand") {
  CHECK_THROWS_AS(
      cfg_from(ExperimentKind::CspRun, std::string(kSmallCsp) + "experiment = sample\n"),
      ParamError);
  const ExperimentConfig cfg =
      cfg_from(ExperimentKind::CspRun, std::string(kSmallCsp) + "experiment = csp-run\n");
  CHECK(cfg.kind == ExperimentKind::CspRun);
}

TEST_CASE("the codec inherits block length and value distribution") {
  const ExperimentConfig cfg = cfg_from(
      ExperimentKind::CspRun,
      std::string(kSmallCsp) + "source.lower = -2\nsource.upper = 3\n");
  CHECK(cfg.code.n == cfg.n);
  CHECK(cfg.code.value_dist.lower == -2.0);
  CHECK(cfg.code.value_dist.upper == 3.0);
}

TEST_CASE("per-kind validation") {
  // sweep-m requires an increasing positive ratio grid.
  CHECK_THROWS_AS(cfg_from(ExperimentKind::SweepM, kSmallCsp), ParamError);
  CHECK_THROWS_AS(cfg_from(ExperimentKind::SweepM,
                           std::string(kSmallCsp) + "sweep.ratios = 2,1\n"),
                  ParamError);
  CHECK_THROWS_AS(cfg_from(ExperimentKind::SweepM,
                           std::string(kSmallCsp) + "sweep.ratios = 0,1\n"),
                  ParamError);
  // dim-estimate needs at least three resolutions.
  CHECK_THROWS_AS(cfg_from(ExperimentKind::DimEstimate, "dim.b_grid = 3,4\n"),
                  ParamError);
  // eta must exceed 1 wherever the bound applies.
  CHECK_THROWS_AS(cfg_from(ExperimentKind::CspRun,
                           "n = 8\ncodec.value_bits = 1\neta = 1.0\n"),
                  ParamError);
  CHECK_THROWS_AS(cfg_from(ExperimentKind::CspRun,
                           std::string(kSmallCsp) + "threads = 0\n"),
                  ParamError);
}

TEST_CASE("sample experiment is deterministic and carries its header") {
  const ExperimentConfig cfg = cfg_from(
      ExperimentKind::Sample,
      "source.kind = piecewise-markov\nsource.p = 0.1\nn = 16\nseed = 5\n");
  const ExperimentResult a = run(cfg);
  const ExperimentResult b = run(cfg);
  CHECK(a.csv_lines == b.csv_lines);
  REQUIRE(a.csv_lines.size() == 17);
  CHECK(a.csv_lines[0] == "# source=piecewise-markov p=0.1 n=16 seed=5");
  for (std::size_t i = 1; i < a.csv_lines.size(); ++i) {
    const double v = std::stod(a.csv_lines[i]);
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
  }
}

TEST_CASE("csp-run emits the pinned schema and a recomputable summary") {
  const ExperimentConfig cfg = cfg_from(ExperimentKind::CspRun, kSmallCsp);
  const ExperimentResult result = run(cfg);
  REQUIRE(result.csv_lines.size() == 6);
  CHECK(result.csv_lines[0] ==
        "trial,seed,n,m,R_bits,D_target,eta,alpha,per_letter_error,threshold,"
        "success,residual,noise_sigma");
  REQUIRE(result.trial_rows.size() == 5);
  std::size_t failures = 0;
  for (std::size_t t = 0; t < result.trial_rows.size(); ++t) {
    const TrialRow& row = result.trial_rows[t];
    CHECK(row.trial == t);
    CHECK(row.n == 8);
    CHECK(row.success == (row.per_letter_error < row.threshold));
    if (!row.success) ++failures;
  }
  CHECK(result.empirical_failure_rate ==
        static_cast<double>(failures) / 5.0);
  const std::string summary = emit_summary(result);
  CHECK(summary.find("experiment=csp-run") != std::string::npos);
  CHECK(summary.find("codebook_size=16") != std::string::npos);
  CHECK(summary.find("empirical_failure_rate=") != std::string::npos);
}

TEST_CASE("thread count never changes emitted bytes") {
  ExperimentConfig serial = cfg_from(ExperimentKind::CspRun, kSmallCsp);
  serial.threads = 1;
  ExperimentConfig wide = serial;
  wide.threads = 4;
  CHECK(run(serial).csv_lines == run(wide).csv_lines);

  ExperimentConfig sweep_serial = cfg_from(
      ExperimentKind::SweepM,
      std::string(kSmallCsp) + "sweep.ratios = 0.5,1,2\ntrials = 10\n");
  sweep_serial.threads = 1;
  ExperimentConfig sweep_wide = sweep_serial;
  sweep_wide.threads = 4;
  CHECK(run(sweep_serial).csv_lines == run(sweep_wide).csv_lines);
}

TEST_CASE("ucsp-run reports per-trial agreement with the enumerated book") {
  const ExperimentConfig cfg = cfg_from(
      ExperimentKind::Ucsp,
      "source.kind = piecewise-markov\n"
      "source.p = 0.2\n"
      "codec.value_bits = 1\n"
      "codec.max_jumps = 1\n"
      "n = 6\n"
      "trials = 8\n"
      "seed = 11\n"
      "eta = 2.0\n"
      "alpha = 0.2\n");
  const ExperimentResult result = run(cfg);
  REQUIRE(result.csv_lines.size() == 9);
  CHECK(result.csv_lines[0] ==
        "trial,seed,n,m,R_bits,D_target,eta,alpha,per_letter_error,threshold,"
        "success,residual,noise_sigma,match");
  REQUIRE(result.ucsp_matches.size() == 8);
  // At the family-maximum budget the decodable set covers the codebook, so
  // the two searches decode identically on every trial.
  for (bool match : result.ucsp_matches) {
    CHECK(match);
  }
  const std::string summary = emit_summary(result);
  CHECK(summary.find("agreement=8/8") != std::string::npos);
  CHECK(summary.find("bit_budget=") != std::string::npos);
}

TEST_CASE("sweep-m grid bookkeeping is self-consistent") {
  const ExperimentConfig cfg = cfg_from(
      ExperimentKind::SweepM,
      std::string(kSmallCsp) +
          "sweep.ratios = 0.5,1,2\ntrials = 10\nsweep.pass_rate = 0.5\n");
  const ExperimentResult result = run(cfg);
  CHECK(result.csv_lines[0] == "ratio,m,n,trials,successes,success_rate,smoothed_rate");
  REQUIRE(result.sweep.size() == 3);
  CHECK(result.sweep[0].m == 4);
  CHECK(result.sweep[1].m == 8);
  CHECK(result.sweep[2].m == 16);
  for (const SweepPoint& pt : result.sweep) {
    CHECK(pt.trials == 10);
    CHECK(pt.successes <= pt.trials);
    CHECK(pt.success_rate ==
          static_cast<double>(pt.successes) / static_cast<double>(pt.trials));
  }
  // 3-point median with replicated edges.
  const auto median3 = [](double a, double b, double c) {
    return std::max(std::min(a, b), std::min(std::max(a, b), c));
  };
  const double r0 = result.sweep[0].success_rate;
  const double r1 = result.sweep[1].success_rate;
  const double r2 = result.sweep[2].success_rate;
  CHECK(result.sweep[0].smoothed_rate == median3(r0, r0, r1));
  CHECK(result.sweep[1].smoothed_rate == median3(r0, r1, r2));
  CHECK(result.sweep[2].smoothed_rate == median3(r1, r2, r2));
  // Threshold estimate: first ratio whose raw rate reaches the pass rate.
  double expected = std::numeric_limits<double>::quiet_NaN();
  for (const SweepPoint& pt : result.sweep) {
    if (pt.success_rate >= 0.5) {
      expected = pt.ratio;
      break;
    }
  }
  if (std::isnan(expected)) {
    CHECK(std::isnan(result.sweep_threshold));
  } else {
    CHECK(result.sweep_threshold == expected);
  }
}

TEST_CASE("dim-estimate emits one row per resolution plus the slope") {
  const ExperimentConfig cfg = cfg_from(
      ExperimentKind::DimEstimate,
      "source.kind = continuous-iid\n"
      "dim.b_grid = 3..5\n"
      "dim.samples = 60000\n"
      "seed = 2\n");
  const ExperimentResult result = run(cfg);
  REQUIRE(result.csv_lines.size() == 5);
  CHECK(result.csv_lines[0] == "b,H_norm");
  CHECK(result.csv_lines[1].rfind("3,", 0) == 0);
  CHECK(result.csv_lines[4].rfind("slope,", 0) == 0);
  CHECK(result.id_estimate.value == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("codec-eval walks the resolution grid") {
  const ExperimentConfig cfg = cfg_from(
      ExperimentKind::CodecEval,
      "source.kind = piecewise-markov\n"
      "source.p = 0.3\n"
      "codec.kind = piecewise-constant\n"
      "n = 16\n"
      "trials = 20\n"
      "seed = 6\n"
      "dim.b_grid = 2,3\n");
  const ExperimentResult result = run(cfg);
  CHECK(result.csv_lines[0] == "D,R,codec,source,seed_count");
  REQUIRE(result.csv_lines.size() == 3);
  REQUIRE(result.curve.points.size() == 2);
  REQUIRE(result.curve_stats.size() == 2);
  // Finer quantizers spend more bits for less distortion.
  CHECK(result.curve.points[1].d <= result.curve.points[0].d);
  CHECK(result.curve.points[1].r >= result.curve.points[0].r);
  CHECK(result.curve.codec_tag == "piecewise-constant");
}

TEST_CASE("csv files round-trip through emit and read") {
  const ExperimentConfig cfg = cfg_from(ExperimentKind::CspRun, kSmallCsp);
  const ExperimentResult result = run(cfg);
  const std::string path = "harness_roundtrip.csv";
  emit_csv(result, path);
  CHECK(read_lines(path) == result.csv_lines);
  std::remove(path.c_str());
  CHECK_THROWS_AS(emit_csv(result, "no_such_dir_xyz/out.csv"), IoError);
}

TEST_CASE("codebook dump schema") {
  BlockCode code;
  code.kind = CodecKind::PiecewiseConstant;
  code.n = 3;
  code.value_bits = 1;
  code.max_jumps = 1;
  const Codebook cb = enumerate_codebook(code);
  const std::vector<std::string> lines = codebook_csv(cb);
  REQUIRE(lines.size() == cb.size() + 1);
  CHECK(lines[0] == "index,bitstring,v_1,v_2,v_3");
  CHECK(lines[1].rfind("0,", 0) == 0);
}

TEST_CASE("matrix dump reloads bit-exactly") {
  const MeasurementSystem sys = sample_matrix(3, 4, 99);
  const std::vector<std::string> lines = matrix_csv(sys);
  REQUIRE(lines.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    std::size_t pos = 0;
    for (std::size_t j = 0; j < 4; ++j) {
      const std::size_t comma = lines[i].find(',', pos);
      const std::string field = lines[i].substr(
          pos, comma == std::string::npos ? std::string::npos : comma - pos);
      CHECK(std::stod(field) == sys.at(i, j));
      pos = comma == std::string::npos ? lines[i].size() : comma + 1;
    }
  }
}
