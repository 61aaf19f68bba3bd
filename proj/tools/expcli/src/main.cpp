#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "covert/errors.hpp"
#include "expcli/runner.hpp"
#include "expcli/scenario_file.hpp"

namespace {

struct Arguments {
  std::string scenario;
  std::optional<std::uint64_t> trials;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::string csv;
  std::string plot_script;
  bool verify = false;
};

void add_common(CLI::App& cmd, Arguments& args, bool has_trials) {
  cmd.add_option("--scenario", args.scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  if (has_trials) cmd.add_option("--trials", args.trials, "Monte Carlo trials or source draws");
  cmd.add_option("--seed", args.seed, "Random seed");
  cmd.add_option("--threads", args.threads, "Worker threads, 0 for all cores");
  cmd.add_option("--csv", args.csv, "Write CSV here instead of standard output");
  cmd.add_option("--plot-script", args.plot_script, "Write a matplotlib script for the table");
}

int execute(expcli::Mode mode, const Arguments& args) {
  const expcli::Scenario scenario = expcli::load_scenario(args.scenario);
  expcli::RunOptions options;
  options.trials = args.trials;
  options.seed = args.seed;
  options.threads = args.threads;
  options.monte_carlo = args.verify;
  const expcli::RunResult result = expcli::run(mode, scenario, options);

  for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
  if (args.csv.empty()) {
    result.table.write_csv(std::cout);
  } else {
    std::ofstream out(args.csv);
    if (!out) throw std::runtime_error("cannot write " + args.csv);
    result.table.write_csv(out);
  }
  if (!args.plot_script.empty()) {
    if (result.plot.x_column.empty()) {
      std::cerr << "warning: a single point has nothing to plot; no script written\n";
    } else {
      std::ofstream out(args.plot_script);
      if (!out) throw std::runtime_error("cannot write " + args.plot_script);
      out << expcli::plot_script(result.table, result.plot);
    }
  }
  if (!result.checks_passed) {
    std::cerr << "error: Monte Carlo estimates outside 3 standard errors\n";
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Covert communication in amplify-and-forward relay networks"};
  app.require_subcommand(1);
  Arguments args;

  const std::map<std::string, std::pair<expcli::Mode, const char*>> commands{
      {"eval", {expcli::Mode::Eval, "Detection error and covert rate at the base point"}},
      {"sweep", {expcli::Mode::Sweep, "Evaluate every [series] x [sweep] point"}},
      {"optimize", {expcli::Mode::Optimize, "Maximize the covert rate under the covertness limit"}},
      {"verify", {expcli::Mode::Verify, "Sweep with Monte Carlo columns and 3 SE checks"}},
      {"average", {expcli::Mode::Average, "Optimize averaged over random source-relay gains"}},
  };
  std::map<const CLI::App*, expcli::Mode> modes;
  for (const auto& [name, entry] : commands) {
    CLI::App* cmd = app.add_subcommand(name, entry.second);
    const bool takes_trials = entry.first == expcli::Mode::Verify ||
                              entry.first == expcli::Mode::Average ||
                              entry.first == expcli::Mode::Eval || entry.first == expcli::Mode::Sweep;
    add_common(*cmd, args, takes_trials);
    if (entry.first == expcli::Mode::Eval || entry.first == expcli::Mode::Sweep) {
      cmd->add_flag("--verify", args.verify, "Add Monte Carlo columns and 3 SE checks");
    }
    modes[cmd] = entry.first;
  }

  CLI11_PARSE(app, argc, argv);

  try {
    for (const auto& [cmd, mode] : modes) {
      if (cmd->parsed()) return execute(mode, args);
    }
  } catch (const expcli::ScenarioError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
