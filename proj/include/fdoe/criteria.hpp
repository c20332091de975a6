#pragma once

#include <Eigen/Core>

#include <limits>
#include <vector>

namespace fdoe {

/// Condition estimate above which an information matrix is treated as
/// singular. The estimate is ||M||_1 * tr(M^-1), which bounds the 2-norm
/// condition number from above and exceeds it by at most a factor p^(3/2).
inline constexpr double kMaxCondition = 1e12;

/// An A-criterion value, or the marker for a design whose information matrix
/// is singular. Infeasible values compare worse than every feasible value.
class CriterionValue {
public:
  CriterionValue() = default;
  static CriterionValue feasible(double v) { return CriterionValue(v); }
  static CriterionValue infeasible() { return CriterionValue(); }

  bool is_feasible() const { return value_ < std::numeric_limits<double>::infinity(); }
  /// Throws InfeasibleDesignError for the infeasible marker.
  double value() const;
  /// +inf for infeasible values.
  double raw() const { return value_; }

  /// Strictly better (smaller); infeasible never beats anything.
  bool better_than(const CriterionValue& other) const { return value_ < other.value_; }

  bool operator==(const CriterionValue&) const = default;

private:
  explicit CriterionValue(double v) : value_(v) {}
  double value_ = std::numeric_limits<double>::infinity();
};

/// M = Z^T Z, upper triangle accumulated row by row and mirrored.
Eigen::MatrixXd information_matrix(const Eigen::Ref<const Eigen::MatrixXd>& z);

/// tr(M^-1) via Cholesky; infeasible when M is not positive definite or its
/// condition estimate exceeds kMaxCondition.
CriterionValue a_criterion(const Eigen::Ref<const Eigen::MatrixXd>& m);

/// Psi_A(m_ref) / Psi_A(m_test). Throws on infeasible or mismatched inputs.
double a_efficiency(const Eigen::Ref<const Eigen::MatrixXd>& m_ref,
                    const Eigen::Ref<const Eigen::MatrixXd>& m_test);

/// Efficiency from two criterion values already computed for same-size designs.
double a_efficiency(double reference_value, double test_value);

/// Reusable workspace for repeated A-criterion evaluations of p x p matrices.
class ACriterionEvaluator {
public:
  explicit ACriterionEvaluator(Eigen::Index p);

  CriterionValue operator()(const Eigen::MatrixXd& m);

private:
  Eigen::Index p_;
  std::vector<double> l_;    // Cholesky factor, row-major lower triangle
  std::vector<double> inv_;  // L^-1, same layout
};

}  // namespace fdoe
