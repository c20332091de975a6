#pragma once

#include "fdoe/criteria.hpp"
#include "fdoe/model.hpp"

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace fdoe {

struct OptimizerConfig {
  int starts = 100;
  std::uint64_t seed = 1;
  /// Equally spaced candidates per coordinate, bounds included.
  int grid_size = 21;
  int max_sweeps = 50;
  /// A start stops once a full sweep improves the criterion by less than
  /// this fraction of its previous value.
  double improvement_tol = 1e-10;
  /// Golden-section refinement between the grid neighbours of the best
  /// grid candidate.
  bool refine = true;
  /// Worker threads for the multi-start loop; 0 picks the hardware count.
  int workers = 1;

  void validate() const;
};

/// One scalar entry of a design: entry (run, index) of gamma block `factor`,
/// or entry (run, factor) of the scalar settings.
struct CoordinateId {
  enum class Kind { Profile, Scalar };
  Kind kind = Kind::Profile;
  std::size_t factor = 0;
  Eigen::Index run = 0;
  Eigen::Index index = 0;

  bool operator==(const CoordinateId&) const = default;
};

/// Fixed sweep order: profile factors in order with each gamma block visited
/// row-major, then the scalar settings row-major.
std::vector<CoordinateId> sweep_order(const ProblemSpec& spec);

Bounds coordinate_bounds(const ProblemSpec& spec, const CoordinateId& c);
double& coordinate_ref(Design& design, const CoordinateId& c);
double coordinate_value(const Design& design, const CoordinateId& c);

/// Random stream for start `start` of a search seeded with `seed`; streams
/// for different starts are independent of worker scheduling.
std::mt19937_64 start_stream(std::uint64_t seed, std::uint64_t start);

/// Every coordinate drawn uniformly on its bounds, in sweep order.
Design random_design(const ProblemSpec& spec, std::mt19937_64& stream);

/// a_criterion(information_matrix(build_model_matrix(spec, design))).
CriterionValue evaluate_design(const ProblemSpec& spec, const Design& design);

struct ExchangeOutcome {
  Design design;
  CriterionValue value;
  bool improved = false;
};

/// Optimizes one coordinate: scans the candidate grid, optionally refines
/// around the best grid point, and moves the coordinate only if the
/// criterion strictly improves on the incumbent.
ExchangeOutcome exchange_coordinate(const ProblemSpec& spec, const Design& design,
                                    const CoordinateId& coordinate,
                                    const OptimizerConfig& config);

struct OptimizerResult {
  Design best_design;
  CriterionValue best_value;
  /// Final criterion of each start; +inf marks an infeasible start.
  std::vector<double> per_start_values;
  std::vector<int> per_start_sweeps;
  /// Criterion before the first sweep and after each sweep, per start.
  std::vector<std::vector<double>> sweep_traces;
  std::size_t winning_start = 0;
  int sweeps_used = 0;
};

/// Multi-start coordinate exchange minimizing tr(M^-1). Throws
/// IdentifiabilityError for specs that cannot be identified and
/// InfeasibleDesignError if every start ends singular.
OptimizerResult coordinate_exchange(const ProblemSpec& spec, const OptimizerConfig& config);

}  // namespace fdoe
