#include "fdoe/basis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fdoe {

BreakpointGrid::BreakpointGrid(std::vector<double> points) : points_(std::move(points)) {
  if (points_.size() < 2) {
    throw std::invalid_argument("breakpoint grid needs at least two points");
  }
  for (std::size_t k = 0; k < points_.size(); ++k) {
    if (!std::isfinite(points_[k])) {
      throw std::invalid_argument("breakpoint grid contains a non-finite point");
    }
    if (k > 0 && !(points_[k - 1] < points_[k])) {
      throw std::invalid_argument("breakpoints must be strictly increasing");
    }
  }
}

std::size_t BreakpointGrid::interval_of(double t) const {
  if (t < lower() || t > upper()) {
    throw std::out_of_range("t = " + std::to_string(t) + " outside the grid domain");
  }
  // First breakpoint strictly greater than t closes the containing interval.
  auto it = std::upper_bound(points_.begin(), points_.end(), t);
  if (it == points_.end()) {
    return intervals() - 1;
  }
  return static_cast<std::size_t>(it - points_.begin()) - 1;
}

BreakpointGrid make_uniform_grid(double lower, double upper, int n_intervals) {
  if (n_intervals < 1) {
    throw std::invalid_argument("uniform grid needs a positive interval count");
  }
  if (!(lower < upper)) {
    throw std::invalid_argument("uniform grid needs lower < upper");
  }
  std::vector<double> points(static_cast<std::size_t>(n_intervals) + 1);
  const double width = upper - lower;
  for (int k = 0; k <= n_intervals; ++k) {
    points[static_cast<std::size_t>(k)] = lower + k * width / n_intervals;
  }
  points.back() = upper;
  return BreakpointGrid(std::move(points));
}

BasisSystem::BasisSystem(BasisKind kind, std::vector<double> knots, int degree, double lower,
                         double upper, std::size_t size)
    : kind_(kind), knots_(std::move(knots)), degree_(degree), lower_(lower), upper_(upper),
      size_(size) {}

BasisSystem BasisSystem::step(BreakpointGrid grid) {
  const std::size_t size = grid.intervals();
  const double lo = grid.lower();
  const double hi = grid.upper();
  return BasisSystem(BasisKind::Step, grid.points(), 0, lo, hi, size);
}

BasisSystem BasisSystem::bspline1(BreakpointGrid grid) {
  const std::size_t size = grid.size();
  const double lo = grid.lower();
  const double hi = grid.upper();
  return BasisSystem(BasisKind::BSpline1, grid.points(), 1, lo, hi, size);
}

BasisSystem BasisSystem::power(int degree, double lower, double upper) {
  if (degree < 0) {
    throw std::invalid_argument("power basis degree must be nonnegative");
  }
  if (!(lower < upper)) {
    throw std::invalid_argument("power basis needs lower < upper");
  }
  return BasisSystem(BasisKind::Power, {}, degree, lower, upper,
                     static_cast<std::size_t>(degree) + 1);
}

BasisSystem BasisSystem::uniform_step(int size, double lower, double upper) {
  return step(make_uniform_grid(lower, upper, size));
}

BasisSystem BasisSystem::uniform_bspline1(int size, double lower, double upper) {
  if (size < 2) {
    throw std::invalid_argument("degree-1 B-spline basis needs at least two knots");
  }
  return bspline1(make_uniform_grid(lower, upper, size - 1));
}

BreakpointGrid BasisSystem::grid() const {
  if (!has_grid()) {
    throw std::logic_error("power basis has no breakpoint grid");
  }
  return BreakpointGrid(knots_);
}

const char* to_string(BasisKind kind) {
  switch (kind) {
    case BasisKind::Step:
      return "step";
    case BasisKind::BSpline1:
      return "bspline1";
    case BasisKind::Power:
      return "power";
  }
  return "unknown";
}

namespace {

void check_domain(const BasisSystem& basis, double t) {
  if (!(t >= basis.lower() && t <= basis.upper())) {
    throw std::out_of_range("t = " + std::to_string(t) + " outside the basis domain");
  }
}

}  // namespace

Eigen::VectorXd eval_basis(const BasisSystem& basis, double t) {
  check_domain(basis, t);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.size()));
  switch (basis.kind()) {
    case BasisKind::Step: {
      const auto& p = basis.knots();
      auto it = std::upper_bound(p.begin(), p.end(), t);
      const auto l = it == p.end() ? p.size() - 2 : static_cast<std::size_t>(it - p.begin()) - 1;
      out[static_cast<Eigen::Index>(l)] = 1.0;
      break;
    }
    case BasisKind::BSpline1: {
      const auto& k = basis.knots();
      auto it = std::upper_bound(k.begin(), k.end(), t);
      const auto span =
          it == k.end() ? k.size() - 2 : static_cast<std::size_t>(it - k.begin()) - 1;
      const double s = (t - k[span]) / (k[span + 1] - k[span]);
      out[static_cast<Eigen::Index>(span)] = 1.0 - s;
      out[static_cast<Eigen::Index>(span) + 1] = s;
      break;
    }
    case BasisKind::Power: {
      double v = 1.0;
      for (Eigen::Index m = 0; m < out.size(); ++m) {
        out[m] = v;
        v *= t;
      }
      break;
    }
  }
  return out;
}

double eval_expansion(const BasisSystem& basis, const Eigen::Ref<const Eigen::VectorXd>& coeffs,
                      double t) {
  if (static_cast<std::size_t>(coeffs.size()) != basis.size()) {
    throw std::invalid_argument("coefficient count does not match basis size");
  }
  return eval_basis(basis, t).dot(coeffs);
}

namespace {

double binomial(int m, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) {
    c = c * (m - k + i) / i;
  }
  return c;
}

// Integral over [a, a + h] of s(t) * t^m with s the rising (or falling) ramp
// from 0 to 1 (or 1 to 0), written in the local coordinate t = a + h s.
double ramp_moment(double a, double h, int m, bool rising) {
  double sum = 0.0;
  double hk = 1.0;
  for (int k = 0; k <= m; ++k) {
    const double local = rising ? 1.0 / (k + 2) : 1.0 / (k + 1) - 1.0 / (k + 2);
    sum += binomial(m, k) * std::pow(a, m - k) * hk * local;
    hk *= h;
  }
  return h * sum;
}

}  // namespace

CrossIntegralMatrix cross_integral(const BasisSystem& x_basis, const BasisSystem& beta_basis) {
  if (beta_basis.kind() != BasisKind::Power) {
    throw std::invalid_argument(std::string("unsupported beta basis for closed-form integrals: ") +
                                to_string(beta_basis.kind()));
  }
  if (x_basis.kind() == BasisKind::Power) {
    throw std::invalid_argument("unsupported x basis for closed-form integrals: power");
  }
  if (x_basis.lower() != beta_basis.lower() || x_basis.upper() != beta_basis.upper()) {
    throw std::invalid_argument("x and beta bases are defined on different domains");
  }
  const auto n_x = static_cast<Eigen::Index>(x_basis.size());
  const auto n_beta = static_cast<Eigen::Index>(beta_basis.size());
  const auto& k = x_basis.knots();
  CrossIntegralMatrix w = CrossIntegralMatrix::Zero(n_x, n_beta);

  if (x_basis.kind() == BasisKind::Step) {
    for (Eigen::Index l = 0; l < n_x; ++l) {
      const double lo = k[static_cast<std::size_t>(l)];
      const double hi = k[static_cast<std::size_t>(l) + 1];
      for (Eigen::Index m = 0; m < n_beta; ++m) {
        const int e = static_cast<int>(m) + 1;
        w(l, m) = (std::pow(hi, e) - std::pow(lo, e)) / e;
      }
    }
    return w;
  }

  // Hat l rises on span l-1 and falls on span l.
  for (std::size_t span = 0; span + 1 < k.size(); ++span) {
    const double a = k[span];
    const double h = k[span + 1] - a;
    for (Eigen::Index m = 0; m < n_beta; ++m) {
      const int deg = static_cast<int>(m);
      w(static_cast<Eigen::Index>(span), m) += ramp_moment(a, h, deg, false);
      w(static_cast<Eigen::Index>(span) + 1, m) += ramp_moment(a, h, deg, true);
    }
  }
  return w;
}

}  // namespace fdoe
