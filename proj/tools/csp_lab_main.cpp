// csp-lab: run compression-based compressed-sensing experiments from flat
// key=value configs and emit CSV plus a text summary.
//
//   csp-lab <subcommand> --config <file> [--set key=value ...] [--out <path>]
//
// Exit codes: 0 ok, 2 config/parameter error, 3 codebook capacity error,
// 4 runtime error (decode/IO/anything else).

#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "csplab/config.hpp"
#include "csplab/errors.hpp"
#include "csplab/harness.hpp"

namespace {

struct Invocation {
  csplab::ExperimentKind kind = csplab::ExperimentKind::CspRun;
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_path;
  bool selected = false;
};

int run_invocation(const Invocation& inv) {
  csplab::KeyValueMap kv;
  if (!inv.config_path.empty()) {
    kv = csplab::load_config_file(inv.config_path);
  }
  for (const std::string& assignment : inv.overrides) {
    csplab::apply_override(kv, assignment);
  }
  csplab::ExperimentConfig config = csplab::ExperimentConfig::from_kv(inv.kind, kv);
  config.out_path = inv.out_path;

  const csplab::ExperimentResult result = csplab::run(config);
  std::cout << csplab::emit_summary(result);
  if (!config.out_path.empty()) {
    csplab::emit_csv(result, config.out_path);
    std::cout << "csv=" << config.out_path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"compression-based compressed-sensing experiment runner"};
  app.require_subcommand(1);

  std::vector<Invocation> invocations;
  for (csplab::ExperimentKind kind :
       {csplab::ExperimentKind::Sample, csplab::ExperimentKind::CodecEval,
        csplab::ExperimentKind::CspRun, csplab::ExperimentKind::Ucsp,
        csplab::ExperimentKind::SweepM, csplab::ExperimentKind::DimEstimate,
        csplab::ExperimentKind::Bounds}) {
    invocations.push_back({kind, "", {}, "", false});
  }

  for (Invocation& inv : invocations) {
    CLI::App* sub = app.add_subcommand(csplab::experiment_kind_name(inv.kind));
    sub->add_option("--config", inv.config_path, "flat key=value config file");
    sub->add_option("--set", inv.overrides, "override: key=value (repeatable)");
    sub->add_option("--out", inv.out_path, "CSV output path");
    sub->callback([&inv]() { inv.selected = true; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return 2;
  }

  try {
    for (const Invocation& inv : invocations) {
      if (inv.selected) {
        return run_invocation(inv);
      }
    }
    std::cerr << "error: config: no subcommand selected\n";
    return 2;
  } catch (const csplab::ParamError& e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return 2;
  } catch (const csplab::CapacityError& e) {
    std::cerr << "error: capacity: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: runtime: " << e.what() << "\n";
    return 4;
  }
}
