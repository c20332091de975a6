#include "fdoe/oracle.hpp"

#include "fdoe/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace fdoe::oracle {

void QuadratureRule::validate() const {
  if (panels < 2 || panels % 2 != 0) {
    throw std::invalid_argument("Simpson rule needs a positive even panel count");
  }
}

namespace {

// Value of basis function `l` at t, for t inside the knot span whose
// midpoint is `mid`. Written directly from the function definitions.
double basis_function(const BasisSystem& basis, std::size_t l, double t, double mid) {
  const auto& k = basis.knots();
  switch (basis.kind()) {
    case BasisKind::Step:
      return (k[l] <= mid && mid < k[l + 1]) ? 1.0 : 0.0;
    case BasisKind::BSpline1: {
      if (l > 0 && k[l - 1] <= mid && mid < k[l]) {
        return (t - k[l - 1]) / (k[l] - k[l - 1]);
      }
      if (l + 1 < k.size() && k[l] <= mid && mid < k[l + 1]) {
        return (k[l + 1] - t) / (k[l + 1] - k[l]);
      }
      return 0.0;
    }
    case BasisKind::Power:
      return std::pow(t, static_cast<double>(l));
  }
  return 0.0;
}

}  // namespace

CrossIntegralMatrix quad_cross_integral(const BasisSystem& x_basis, const BasisSystem& beta_basis,
                                        const QuadratureRule& rule) {
  rule.validate();
  if (x_basis.lower() != beta_basis.lower() || x_basis.upper() != beta_basis.upper()) {
    throw std::invalid_argument("bases are defined on different domains");
  }
  std::vector<double> cuts{x_basis.lower(), x_basis.upper()};
  cuts.insert(cuts.end(), x_basis.knots().begin(), x_basis.knots().end());
  cuts.insert(cuts.end(), beta_basis.knots().begin(), beta_basis.knots().end());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const double total = x_basis.upper() - x_basis.lower();
  CrossIntegralMatrix w = CrossIntegralMatrix::Zero(static_cast<Eigen::Index>(x_basis.size()),
                                                    static_cast<Eigen::Index>(beta_basis.size()));
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double a = cuts[s];
    const double b = cuts[s + 1];
    const double mid = 0.5 * (a + b);
    int panels = static_cast<int>(std::lround(rule.panels * (b - a) / total));
    panels = std::max(2, panels + panels % 2);
    for (std::size_t l = 0; l < x_basis.size(); ++l) {
      for (std::size_t m = 0; m < beta_basis.size(); ++m) {
        auto integrand = [&](double t) {
          return basis_function(x_basis, l, t, mid) * basis_function(beta_basis, m, t, mid);
        };
        w(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(m)) +=
            simpson(integrand, a, b, panels);
      }
    }
  }
  return w;
}

VertexSearchResult exhaustive_vertex_search(const ProblemSpec& spec) {
  const auto order = sweep_order(spec);
  if (order.size() > kMaxVertexCoordinates) {
    throw std::invalid_argument("vertex enumeration is limited to " +
                                std::to_string(kMaxVertexCoordinates) + " coordinates, got " +
                                std::to_string(order.size()));
  }
  std::vector<std::vector<double>> levels;
  levels.reserve(order.size());
  for (const auto& c : order) {
    const Bounds b = coordinate_bounds(spec, c);
    const bool centre = c.kind == CoordinateId::Kind::Scalar &&
                        spec.scalar[c.factor].effects == ScalarEffects::MainPlusQuadratic;
    if (centre) {
      levels.push_back({b.lower, b.midpoint(), b.upper});
    } else {
      levels.push_back({b.lower, b.upper});
    }
  }

  const auto ws = cross_integrals(spec);
  Design design;
  const auto n = static_cast<Eigen::Index>(spec.runs);
  for (const auto& f : spec.profile) {
    design.gammas.emplace_back(n, static_cast<Eigen::Index>(f.x_basis.size()));
  }
  design.scalars.resize(n, static_cast<Eigen::Index>(spec.scalar.size()));

  // Mixed-radix counter; the first coordinate is the most significant digit.
  std::vector<std::size_t> digit(order.size(), 0);
  VertexSearchResult out;
  out.value = CriterionValue::infeasible();
  bool have_any = false;
  ACriterionEvaluator criterion(static_cast<Eigen::Index>(spec.parameter_count()));
  while (true) {
    for (std::size_t c = 0; c < order.size(); ++c) {
      coordinate_ref(design, order[c]) = levels[c][digit[c]];
    }
    const auto z = build_model_matrix(spec, design, ws).z;
    const CriterionValue v = criterion(information_matrix(z));
    ++out.designs_evaluated;
    if (!have_any || v.better_than(out.value)) {
      out.design = design;
      out.value = v;
      have_any = true;
    }
    std::size_t pos = order.size();
    while (pos > 0) {
      --pos;
      if (++digit[pos] < levels[pos].size()) {
        break;
      }
      digit[pos] = 0;
      if (pos == 0) {
        return out;
      }
    }
    if (order.empty()) {
      return out;
    }
  }
}

}  // namespace fdoe::oracle
