#include "fdoe/criteria.hpp"

#include "fdoe/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fdoe {

double CriterionValue::value() const {
  if (!is_feasible()) {
    throw InfeasibleDesignError("criterion is infeasible (singular information matrix)");
  }
  return value_;
}

Eigen::MatrixXd information_matrix(const Eigen::Ref<const Eigen::MatrixXd>& z) {
  const Eigen::Index p = z.cols();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    for (Eigen::Index a = 0; a < p; ++a) {
      const double za = z(i, a);
      for (Eigen::Index b = a; b < p; ++b) {
        m(a, b) += za * z(i, b);
      }
    }
  }
  for (Eigen::Index a = 0; a < p; ++a) {
    for (Eigen::Index b = 0; b < a; ++b) {
      m(a, b) = m(b, a);
    }
  }
  return m;
}

ACriterionEvaluator::ACriterionEvaluator(Eigen::Index p)
    : p_(p), l_(static_cast<std::size_t>(p * p)), inv_(static_cast<std::size_t>(p * p)) {}

CriterionValue ACriterionEvaluator::operator()(const Eigen::MatrixXd& m) {
  const Eigen::Index p = m.rows();
  if (p == 0) {
    return CriterionValue::infeasible();
  }
  if (p != p_) {
    p_ = p;
    l_.assign(static_cast<std::size_t>(p * p), 0.0);
    inv_.assign(static_cast<std::size_t>(p * p), 0.0);
  }
  const auto at = [p](Eigen::Index i, Eigen::Index j) { return static_cast<std::size_t>(i * p + j); };

  double norm1 = 0.0;
  for (Eigen::Index j = 0; j < p; ++j) {
    double col = 0.0;
    for (Eigen::Index i = 0; i < p; ++i) {
      col += std::abs(m(i, j));
    }
    norm1 = std::max(norm1, col);
  }
  if (!std::isfinite(norm1)) {
    return CriterionValue::infeasible();
  }

  // M = L L^T, reading the lower triangle of M.
  for (Eigen::Index j = 0; j < p; ++j) {
    double d = m(j, j);
    for (Eigen::Index k = 0; k < j; ++k) {
      d -= l_[at(j, k)] * l_[at(j, k)];
    }
    if (!(d > 0.0)) {
      return CriterionValue::infeasible();
    }
    const double ljj = std::sqrt(d);
    l_[at(j, j)] = ljj;
    for (Eigen::Index i = j + 1; i < p; ++i) {
      double s = m(i, j);
      for (Eigen::Index k = 0; k < j; ++k) {
        s -= l_[at(i, k)] * l_[at(j, k)];
      }
      l_[at(i, j)] = s / ljj;
    }
  }

  // tr(M^-1) = ||L^-1||_F^2; column c of L^-1 by forward substitution.
  double trace = 0.0;
  for (Eigen::Index c = 0; c < p; ++c) {
    for (Eigen::Index i = c; i < p; ++i) {
      double s = i == c ? 1.0 : 0.0;
      for (Eigen::Index k = c; k < i; ++k) {
        s -= l_[at(i, k)] * inv_[at(k, c)];
      }
      const double x = s / l_[at(i, i)];
      inv_[at(i, c)] = x;
      trace += x * x;
    }
  }
  if (!std::isfinite(trace) || !(trace > 0.0) || norm1 * trace > kMaxCondition) {
    return CriterionValue::infeasible();
  }
  return CriterionValue::feasible(trace);
}

CriterionValue a_criterion(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("information matrix must be square");
  }
  ACriterionEvaluator eval(m.rows());
  return eval(Eigen::MatrixXd(m));
}

double a_efficiency(double reference_value, double test_value) {
  if (!(reference_value > 0.0) || !(test_value > 0.0) || !std::isfinite(reference_value) ||
      !std::isfinite(test_value)) {
    throw std::invalid_argument("efficiency needs two positive finite criterion values");
  }
  return reference_value / test_value;
}

double a_efficiency(const Eigen::Ref<const Eigen::MatrixXd>& m_ref,
                    const Eigen::Ref<const Eigen::MatrixXd>& m_test) {
  if (m_ref.rows() != m_test.rows() || m_ref.cols() != m_test.cols()) {
    throw std::invalid_argument("efficiency needs information matrices of the same size");
  }
  return a_efficiency(a_criterion(m_ref).value(), a_criterion(m_test).value());
}

}  // namespace fdoe
