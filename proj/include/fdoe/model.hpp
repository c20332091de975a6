#pragma once

#include "fdoe/basis.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <string>
#include <vector>

namespace fdoe {

/// Closed interval [lower, upper]. lower == upper pins a coordinate.
struct Bounds {
  double lower = -1.0;
  double upper = 1.0;

  double width() const { return upper - lower; }
  double midpoint() const { return 0.5 * (lower + upper); }
  bool contains(double x) const { return x >= lower && x <= upper; }
  bool operator==(const Bounds&) const = default;
};

struct ProfileFactorSpec {
  BasisSystem x_basis;
  BasisSystem beta_basis;
  Bounds bounds;
};

enum class ScalarEffects { MainOnly, MainPlusQuadratic };

const char* to_string(ScalarEffects effects);

struct ScalarFactorSpec {
  Bounds bounds;
  ScalarEffects effects = ScalarEffects::MainOnly;
};

struct ProblemSpec {
  int runs = 0;
  std::vector<ProfileFactorSpec> profile;
  std::vector<ScalarFactorSpec> scalar;

  /// Columns of the model matrix: intercept, every beta coefficient, every
  /// scalar main effect and every scalar quadratic effect.
  std::size_t parameter_count() const;
  std::size_t quadratic_count() const;
  /// Total number of free design coordinates.
  std::size_t coordinate_count() const;

  /// Throws std::invalid_argument for malformed specs and IdentifiabilityError
  /// when no design can have a nonsingular information matrix.
  void validate() const;
};

/// One n x n_x coefficient matrix per profile factor plus an n x f2 matrix of
/// scalar settings. Row i of every block describes run i.
struct Design {
  std::vector<Eigen::MatrixXd> gammas;
  Eigen::MatrixXd scalars;

  int runs() const { return static_cast<int>(scalars.rows()); }
  bool operator==(const Design& other) const;
};

/// Throws std::invalid_argument if the design's shape or bounds do not match.
void check_conforms(const ProblemSpec& spec, const Design& design);

struct ModelMatrix {
  Eigen::MatrixXd z;
  std::vector<std::string> column_labels;
};

/// Gamma * W: the integrals of each run's profile against every beta basis
/// function.
Eigen::MatrixXd build_J(const Eigen::Ref<const Eigen::MatrixXd>& gamma,
                        const CrossIntegralMatrix& w);

/// Main-effect columns for every factor, then squared columns for the
/// factors with quadratic effects, both in factor order.
Eigen::MatrixXd scalar_effect_columns(const Eigen::Ref<const Eigen::MatrixXd>& settings,
                                      const std::vector<ScalarFactorSpec>& specs);

std::vector<std::string> column_labels(const ProblemSpec& spec);

/// Z = [1 | J_1 ... J_f1 | scalar main effects | scalar quadratic effects].
ModelMatrix build_model_matrix(const ProblemSpec& spec, const Design& design);

/// Same as above with precomputed cross-integral matrices, one per profile
/// factor.
ModelMatrix build_model_matrix(const ProblemSpec& spec, const Design& design,
                               const std::vector<CrossIntegralMatrix>& cross_integrals);

std::vector<CrossIntegralMatrix> cross_integrals(const ProblemSpec& spec);

/// Ordinary least squares coefficients. Throws InfeasibleDesignError when Z
/// is column-rank deficient.
Eigen::VectorXd least_squares_estimate(const ModelMatrix& model,
                                       const Eigen::Ref<const Eigen::VectorXd>& y);

}  // namespace fdoe
