#pragma once

#include "fdoe/model.hpp"
#include "fdoe/optimizer.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fdoe::io {

class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct OutputConfig {
  std::filesystem::path directory = "fdoe_out";
  int sample_points = 501;
  std::optional<double> reference_value;
};

/// (n, n_x) grid for table sweeps; n_x is applied to every profile factor.
struct SweepConfig {
  std::vector<int> runs;
  std::vector<int> sizes;
};

struct RunConfig {
  ProblemSpec problem;
  OptimizerConfig optimizer;
  OutputConfig outputs;
  std::optional<SweepConfig> sweep;
  /// Also run the exhaustive vertex oracle (small instances only).
  bool oracle = false;
};

/// Parses the YAML run configuration and validates everything but the
/// problem's identifiability, which depends on sweep cells.
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::filesystem::path& path);

/// Rebuilds the problem with `runs` runs and `size` basis functions for
/// every profile factor, keeping each factor's basis kind and domain.
ProblemSpec with_cell(const ProblemSpec& spec, int runs, int size);

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

/// Columns run,factor,kind,index,value; one row per coordinate in sweep
/// order. Runs, factors and indices are 1-based.
void write_design_csv(std::ostream& out, const ProblemSpec& spec, const Design& design);
Design read_design_csv(std::istream& in, const ProblemSpec& spec);

/// Columns t,run_1,...,run_n sampling each run's profile on a uniform grid.
void write_functions_csv(std::ostream& out, const ProblemSpec& spec, const Design& design,
                         std::size_t factor, int sample_points);

struct Summary {
  double criterion = 0.0;
  std::optional<double> reference_value;
  std::size_t winning_start = 0;
  int sweeps = 0;
  std::uint64_t seed = 0;
  int starts = 0;
  int runs = 0;
  std::size_t parameters = 0;
  std::optional<double> oracle_value;

  std::optional<double> efficiency() const;
};

void write_summary_csv(std::ostream& out, const Summary& summary);

struct SweepRow {
  int runs = 0;
  int size = 0;
  double criterion = 0.0;
  double efficiency = 0.0;
  std::size_t winning_start = 0;
  int sweeps = 0;
};

/// Efficiency of each row against the largest-size row with the same run
/// count.
void fill_sweep_efficiencies(std::vector<SweepRow>& rows);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace fdoe::io
