// fockborn: run the Born-rule verification suite on a scenario file.
//
//   fockborn verify|simulate|equivalence|all --config PATH [--seed U64]
//            [--output PATH] [--tolerance-scale X] [--traces CSV] [--timestamp STR]
//
// Exit status: 0 when every check passes, 1 when a check fails, 2 when the
// scenario cannot be loaded or the arguments are invalid.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "fockborn/errors.hpp"
#include "fockborn/report.hpp"
#include "fockborn/runner.hpp"
#include "fockborn/scenario.hpp"

namespace {

constexpr int kExitCheckFailed = 1;
constexpr int kExitBadInput = 2;

struct Args {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string output;
  double tolerance_scale = 1.0;
  std::string traces;
  std::optional<std::string> timestamp;
};

void add_common(CLI::App* cmd, Args& args) {
  cmd->add_option("--config", args.config, "scenario JSON file")->required();
  cmd->add_option("--seed", args.seed, "RNG seed (overrides the scenario and FOCKBORN_SEED)");
  cmd->add_option("--output", args.output, "write the JSON report here instead of stdout");
  cmd->add_option("--tolerance-scale", args.tolerance_scale, "multiply every threshold")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--timestamp", args.timestamp,
                  "provenance timestamp (default: SOURCE_DATE_EPOCH, else null)");
}

int run(const std::string& command, const Args& args) {
  using namespace fockborn;
  std::optional<Scenario> loaded;
  RunOptions options;
  try {
    loaded.emplace(load_scenario(args.config));
    options.seed = resolve_seed(args.seed, *loaded, std::getenv("FOCKBORN_SEED"));
  } catch (const Error& e) {
    std::cerr << "fockborn: " << e.kind() << ": " << e.what() << '\n';
    return kExitBadInput;
  }
  const Scenario& scenario = *loaded;
  options.tolerance_scale = args.tolerance_scale;
  options.timestamp = args.timestamp;
  if (!options.timestamp) {
    if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) options.timestamp = epoch;
  }

  Provenance prov;
  prov.seed = options.seed;
  prov.timestamp = options.timestamp;
  Report report(command, scenario.name, prov);

  if (command == "verify" || command == "all") report.merge(run_verify(scenario, options));
  if (command == "simulate" || command == "all") {
    auto sim = run_simulate(scenario, options);
    report.merge(sim.report);
    if (!args.traces.empty()) {
      std::ofstream csv(args.traces);
      if (!csv) {
        std::cerr << "fockborn: cannot write " << args.traces << '\n';
        return kExitBadInput;
      }
      write_traces_csv(csv, sim.traces, sim.labels);
    }
  }
  if (command == "equivalence" || command == "all") report.merge(run_equivalence(scenario, options));

  const std::string json = report.to_json().dump(2) + "\n";
  if (args.output.empty()) {
    std::cout << json;
  } else {
    std::ofstream out(args.output);
    if (!out) {
      std::cerr << "fockborn: cannot write " << args.output << '\n';
      return kExitBadInput;
    }
    out << json;
  }
  report.print_table(std::cerr);
  return report.pass() ? 0 : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Born-rule derivation checks on truncated symmetric Fock space"};
  app.set_version_flag("--version", std::string(fockborn::kVersion));
  app.require_subcommand(1);

  Args args;
  std::string command;
  for (const char* name : {"verify", "simulate", "equivalence", "all"}) {
    auto* cmd = app.add_subcommand(name);
    add_common(cmd, args);
    if (std::string(name) == "simulate" || std::string(name) == "all") {
      cmd->add_option("--traces", args.traces, "write frequency traces as CSV");
    }
    cmd->callback([&command, name] { command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitBadInput;
  }
  return run(command, args);
}
