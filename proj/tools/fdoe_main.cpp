// fdoe: A-optimal designs for scalar-on-function linear models.
//
//   fdoe run <config.yaml> [--seed N] [--starts K] [--workers W] [--out DIR] [--oracle]
//   fdoe sweep <config.yaml> [same options]
//   fdoe evaluate <config.yaml> <design.csv>

#include "fdoe/app.hpp"
#include "fdoe/errors.hpp"
#include "fdoe/io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 1,
  kIdentifiability = 2,
  kInfeasible = 3,
  kOracleMismatch = 4,
  kIoError = 5,
};

void add_overrides(CLI::App* cmd, fdoe::app::Overrides& o) {
  cmd->add_option("--seed", o.seed, "Random seed (overrides the config)");
  cmd->add_option("--starts", o.starts, "Number of random starts")->check(CLI::PositiveNumber);
  cmd->add_option("--workers", o.workers, "Worker threads, 0 = all cores")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_flag("--oracle", o.oracle, "Cross-check against exhaustive vertex enumeration");
}

fdoe::io::RunConfig load(const std::string& path, const fdoe::app::Overrides& o) {
  auto cfg = fdoe::io::load_run_config(path);
  fdoe::app::apply(cfg, o);
  return cfg;
}

int do_run(const std::string& path, const fdoe::app::Overrides& o) {
  const auto cfg = load(path, o);
  const auto report = fdoe::app::run_experiment(cfg);
  const auto& s = report.summary;
  std::cout << "criterion " << fdoe::io::format_double(s.criterion) << " (start "
            << s.winning_start << ", " << s.sweeps << " sweeps)\n";
  if (const auto eff = s.efficiency()) {
    std::cout << "efficiency " << fdoe::io::format_double(*eff) << '\n';
  }
  std::cout << "wrote " << cfg.outputs.directory.string() << '\n';
  if (report.oracle_ok) {
    std::cout << "oracle " << fdoe::io::format_double(*s.oracle_value) << ' '
              << (*report.oracle_ok ? "ok" : "MISMATCH") << '\n';
    if (!*report.oracle_ok) {
      return kOracleMismatch;
    }
  }
  return kOk;
}

int do_sweep(const std::string& path, const fdoe::app::Overrides& o) {
  const auto cfg = load(path, o);
  const auto rows = fdoe::app::run_sweep(cfg);
  fdoe::io::write_sweep_csv(std::cout, rows);
  return kOk;
}

int do_evaluate(const std::string& config_path, const std::string& design_path) {
  const auto cfg = fdoe::io::load_run_config(config_path);
  cfg.problem.validate();
  std::ifstream in(design_path);
  if (!in) {
    std::cerr << "fdoe: cannot open " << design_path << '\n';
    return kIoError;
  }
  const auto design = fdoe::io::read_design_csv(in, cfg.problem);
  const auto value = fdoe::evaluate_design(cfg.problem, design);
  if (!value.is_feasible()) {
    std::cout << "infeasible\n";
    return kInfeasible;
  }
  std::cout << fdoe::io::format_double(value.value()) << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"A-optimal designs for scalar-on-function linear models"};
  app.require_subcommand(1);

  std::string config_path;
  std::string design_path;
  fdoe::app::Overrides run_opts;
  fdoe::app::Overrides sweep_opts;

  auto* run = app.add_subcommand("run", "Search for a design and write design/summary/function files");
  run->add_option("config", config_path, "YAML config file")->required()->check(CLI::ExistingFile);
  add_overrides(run, run_opts);

  auto* sweep = app.add_subcommand("sweep", "Tabulate criterion and efficiency over (runs, size)");
  sweep->add_option("config", config_path, "YAML config file")->required()->check(CLI::ExistingFile);
  add_overrides(sweep, sweep_opts);

  auto* evaluate = app.add_subcommand("evaluate", "Re-evaluate a design.csv against a config");
  evaluate->add_option("config", config_path, "YAML config file")->required()->check(CLI::ExistingFile);
  evaluate->add_option("design", design_path, "design.csv")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      return do_run(config_path, run_opts);
    }
    if (*sweep) {
      return do_sweep(config_path, sweep_opts);
    }
    return do_evaluate(config_path, design_path);
  } catch (const fdoe::IdentifiabilityError& e) {
    std::cerr << "fdoe: not identifiable: " << e.what() << '\n';
    return kIdentifiability;
  } catch (const fdoe::InfeasibleDesignError& e) {
    std::cerr << "fdoe: " << e.what() << '\n';
    return kInfeasible;
  } catch (const fdoe::io::ConfigError& e) {
    std::cerr << "fdoe: config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "fdoe: invalid input: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "fdoe: " << e.what() << '\n';
    return kIoError;
  }
}
