#pragma once

// Test-only oracles, kept independent of the library code they check.

#include "fdoe/model.hpp"

#include <Eigen/Core>

#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace fdoe::test {

/// Composite Simpson over [a, b] split at `cuts`, `panels` per piece.
inline double integrate(const std::function<double(double)>& f, std::vector<double> cuts,
                        int panels = 2000) {
  double total = 0.0;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double a = cuts[s];
    const double b = cuts[s + 1];
    const double h = (b - a) / panels;
    // Interior nodes only see the open span, so evaluate the ends slightly
    // inside it to pick the one-sided limit of discontinuous integrands.
    double sum = f(std::nextafter(a, b)) + f(std::nextafter(b, a));
    for (int k = 1; k < panels; ++k) {
      sum += (k % 2 == 1 ? 4.0 : 2.0) * f(a + k * h);
    }
    total += sum * h / 3.0;
  }
  return total;
}

/// Indicator of [lo, hi).
inline double indicator(double t, double lo, double hi) { return (t >= lo && t < hi) ? 1.0 : 0.0; }

/// Hat function centred on knots[l].
inline double hat(const std::vector<double>& knots, std::size_t l, double t) {
  if (l > 0 && t >= knots[l - 1] && t <= knots[l]) {
    return (t - knots[l - 1]) / (knots[l] - knots[l - 1]);
  }
  if (l + 1 < knots.size() && t >= knots[l] && t <= knots[l + 1]) {
    return (knots[l + 1] - t) / (knots[l + 1] - knots[l]);
  }
  return 0.0;
}

/// Inverse by Gauss-Jordan elimination with partial pivoting.
inline Eigen::MatrixXd gauss_jordan_inverse(Eigen::MatrixXd a) {
  const Eigen::Index n = a.rows();
  Eigen::MatrixXd inv = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index piv = c;
    for (Eigen::Index r = c + 1; r < n; ++r) {
      if (std::abs(a(r, c)) > std::abs(a(piv, c))) {
        piv = r;
      }
    }
    a.row(c).swap(a.row(piv));
    inv.row(c).swap(inv.row(piv));
    const double d = a(c, c);
    a.row(c) /= d;
    inv.row(c) /= d;
    for (Eigen::Index r = 0; r < n; ++r) {
      if (r != c) {
        const double f = a(r, c);
        a.row(r) -= f * a.row(c);
        inv.row(r) -= f * inv.row(c);
      }
    }
  }
  return inv;
}

/// Trace of the inverse of Z^T Z with both products formed naively.
inline double naive_a_value(const Eigen::MatrixXd& z) {
  const Eigen::MatrixXd m = z.transpose() * z;
  return gauss_jordan_inverse(m).trace();
}

inline Eigen::MatrixXd random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols,
                                     double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    m.data()[i] = u(rng);
  }
  return m;
}

/// Single step-basis profile factor with a power beta basis on [0, 1].
inline ProblemSpec step_problem(int runs, int n_x, int beta_degree) {
  ProblemSpec spec;
  spec.runs = runs;
  spec.profile.push_back({BasisSystem::uniform_step(n_x), BasisSystem::power(beta_degree), Bounds{}});
  return spec;
}

inline ProblemSpec bspline_problem(int runs, int n_x, int beta_degree) {
  ProblemSpec spec;
  spec.runs = runs;
  spec.profile.push_back(
      {BasisSystem::uniform_bspline1(n_x), BasisSystem::power(beta_degree), Bounds{}});
  return spec;
}

}  // namespace fdoe::test
