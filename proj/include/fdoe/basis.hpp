#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <vector>

namespace fdoe {

/// Ordered knot/breakpoint sequence on [lower, upper], endpoints included.
class BreakpointGrid {
public:
  /// Throws std::invalid_argument unless `points` has at least two strictly
  /// increasing entries.
  explicit BreakpointGrid(std::vector<double> points);

  double lower() const { return points_.front(); }
  double upper() const { return points_.back(); }
  const std::vector<double>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  std::size_t intervals() const { return points_.size() - 1; }

  /// Index of the half-open interval [p[k], p[k+1]) containing t; the last
  /// interval is closed at upper().
  std::size_t interval_of(double t) const;

  bool operator==(const BreakpointGrid&) const = default;

private:
  std::vector<double> points_;
};

BreakpointGrid make_uniform_grid(double lower, double upper, int n_intervals);

enum class BasisKind { Step, BSpline1, Power };

/// A finite basis on [lower, upper].
///
/// Step: indicator functions of the grid intervals, one per interval.
/// BSpline1: degree-1 hat functions, one per knot (half hats at the ends).
/// Power: monomials 1, t, ..., t^degree.
class BasisSystem {
public:
  static BasisSystem step(BreakpointGrid grid);
  static BasisSystem bspline1(BreakpointGrid grid);
  static BasisSystem power(int degree, double lower = 0.0, double upper = 1.0);

  /// Step basis with `size` equal intervals (size + 1 breakpoints).
  static BasisSystem uniform_step(int size, double lower = 0.0, double upper = 1.0);
  /// Hat basis with `size` equally spaced knots.
  static BasisSystem uniform_bspline1(int size, double lower = 0.0, double upper = 1.0);

  BasisKind kind() const { return kind_; }
  std::size_t size() const { return size_; }
  int degree() const { return degree_; }
  double lower() const { return lower_; }
  double upper() const { return upper_; }
  /// Breakpoints; empty for Power.
  const std::vector<double>& knots() const { return knots_; }
  bool has_grid() const { return kind_ != BasisKind::Power; }
  BreakpointGrid grid() const;

  /// Nonnegative basis functions summing to one everywhere.
  bool is_partition_of_unity() const { return kind_ != BasisKind::Power; }

  bool operator==(const BasisSystem&) const = default;

private:
  BasisSystem(BasisKind kind, std::vector<double> knots, int degree, double lower,
              double upper, std::size_t size);

  BasisKind kind_;
  std::vector<double> knots_;
  int degree_ = 0;
  double lower_ = 0.0;
  double upper_ = 1.0;
  std::size_t size_ = 0;
};

const char* to_string(BasisKind kind);

/// Values of every basis function at t. Throws std::out_of_range outside
/// [lower, upper].
Eigen::VectorXd eval_basis(const BasisSystem& basis, double t);

/// sum_l coeffs[l] * c_l(t)
double eval_expansion(const BasisSystem& basis, const Eigen::Ref<const Eigen::VectorXd>& coeffs,
                      double t);

/// W(l, m) = integral over the domain of c_l(t) b_m(t), rows indexed by the
/// x-basis and columns by the beta-basis.
using CrossIntegralMatrix = Eigen::MatrixXd;

/// Closed-form W for a Step or BSpline1 x-basis against a Power beta-basis.
/// Throws std::invalid_argument on other pairings or mismatched domains.
CrossIntegralMatrix cross_integral(const BasisSystem& x_basis, const BasisSystem& beta_basis);

}  // namespace fdoe
