#pragma once

#include "fdoe/io.hpp"
#include "fdoe/optimizer.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

namespace fdoe::app {

/// Command-line overrides applied on top of a loaded config.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> starts;
  std::optional<int> workers;
  std::optional<std::filesystem::path> out;
  bool oracle = false;
};

void apply(io::RunConfig& config, const Overrides& overrides);

struct RunReport {
  OptimizerResult result;
  io::Summary summary;
  /// Set when the oracle ran; false if the search lost to the vertex lattice.
  std::optional<bool> oracle_ok;
};

/// Runs the search and writes design.csv, summary.csv and one
/// functions_<factor>.csv per profile factor into the output directory.
RunReport run_experiment(const io::RunConfig& config);

/// One search per (runs, size) cell; writes sweep.csv plus
/// design_n<runs>_nx<size>.csv for each cell.
std::vector<io::SweepRow> run_sweep(const io::RunConfig& config);

}  // namespace fdoe::app
