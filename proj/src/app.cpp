#include "fdoe/app.hpp"

#include "fdoe/oracle.hpp"

#include <fstream>
#include <stdexcept>
#include <string>

namespace fdoe::app {

void apply(io::RunConfig& config, const Overrides& o) {
  if (o.seed) {
    config.optimizer.seed = *o.seed;
  }
  if (o.starts) {
    config.optimizer.starts = *o.starts;
  }
  if (o.workers) {
    config.optimizer.workers = *o.workers;
  }
  if (o.out) {
    config.outputs.directory = *o.out;
  }
  config.oracle = config.oracle || o.oracle;
  config.optimizer.validate();
}

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  return out;
}

void prepare_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory " + dir.string() + ": " +
                             ec.message());
  }
}

}  // namespace

RunReport run_experiment(const io::RunConfig& config) {
  config.problem.validate();
  prepare_directory(config.outputs.directory);
  RunReport report;
  report.result = coordinate_exchange(config.problem, config.optimizer);
  const auto& r = report.result;

  auto& s = report.summary;
  s.criterion = r.best_value.value();
  s.reference_value = config.outputs.reference_value;
  s.winning_start = r.winning_start;
  s.sweeps = r.sweeps_used;
  s.seed = config.optimizer.seed;
  s.starts = config.optimizer.starts;
  s.runs = config.problem.runs;
  s.parameters = config.problem.parameter_count();

  if (config.oracle) {
    const auto vertex = oracle::exhaustive_vertex_search(config.problem);
    s.oracle_value = vertex.value.raw();
    report.oracle_ok = !vertex.value.is_feasible() || s.criterion <= vertex.value.raw() + 1e-9;
  }

  const auto& dir = config.outputs.directory;
  {
    auto out = open_output(dir / "design.csv");
    io::write_design_csv(out, config.problem, r.best_design);
  }
  {
    auto out = open_output(dir / "summary.csv");
    io::write_summary_csv(out, s);
  }
  for (std::size_t j = 0; j < config.problem.profile.size(); ++j) {
    auto out = open_output(dir / ("functions_" + std::to_string(j + 1) + ".csv"));
    io::write_functions_csv(out, config.problem, r.best_design, j, config.outputs.sample_points);
  }
  return report;
}

std::vector<io::SweepRow> run_sweep(const io::RunConfig& config) {
  if (!config.sweep) {
    throw io::ConfigError("sweep needs a 'sweep' section listing runs and sizes");
  }
  if (config.problem.profile.empty()) {
    throw io::ConfigError("sweep varies profile basis sizes; the problem has no profile factor");
  }
  // Validate every cell before spending time on any search.
  std::vector<ProblemSpec> cells;
  for (int n : config.sweep->runs) {
    for (int size : config.sweep->sizes) {
      if (size < 1) {
        throw io::ConfigError("sweep sizes must be positive");
      }
      cells.push_back(io::with_cell(config.problem, n, size));
      cells.back().validate();
    }
  }
  prepare_directory(config.outputs.directory);
  std::vector<io::SweepRow> rows;
  for (const auto& spec : cells) {
    const auto result = coordinate_exchange(spec, config.optimizer);
    const int size = static_cast<int>(spec.profile.front().x_basis.size());
    rows.push_back({spec.runs, size, result.best_value.value(), 0.0, result.winning_start,
                    result.sweeps_used});
    auto out = open_output(config.outputs.directory / ("design_n" + std::to_string(spec.runs) +
                                                       "_nx" + std::to_string(size) + ".csv"));
    io::write_design_csv(out, spec, result.best_design);
  }
  io::fill_sweep_efficiencies(rows);
  auto out = open_output(config.outputs.directory / "sweep.csv");
  io::write_sweep_csv(out, rows);
  return rows;
}

}  // namespace fdoe::app
