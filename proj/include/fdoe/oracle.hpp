#pragma once

#include "fdoe/basis.hpp"
#include "fdoe/criteria.hpp"
#include "fdoe/model.hpp"

#include <cstddef>

namespace fdoe::oracle {

/// Composite Simpson rule. Panels are spread over the union of both bases'
/// breakpoints so that every panel lies inside one knot span.
struct QuadratureRule {
  int panels = 10000;

  void validate() const;
};

/// Quadrature approximation of the cross-integral matrix for any pair of
/// bases on the same domain, evaluated without the closed-form path.
CrossIntegralMatrix quad_cross_integral(const BasisSystem& x_basis, const BasisSystem& beta_basis,
                                        const QuadratureRule& rule = {});

/// Quadrature approximation of the integral of f over [a, b].
template <typename F>
double simpson(F&& f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double sum = f(a) + f(b);
  for (int k = 1; k < panels; ++k) {
    sum += (k % 2 == 1 ? 4.0 : 2.0) * f(a + k * h);
  }
  return sum * h / 3.0;
}

inline constexpr std::size_t kMaxVertexCoordinates = 16;

struct VertexSearchResult {
  Design design;
  CriterionValue value;
  std::size_t designs_evaluated = 0;
};

/// Enumerates every design whose coordinates sit on the vertex lattice:
/// {lower, upper} for profile coefficients and main-effect scalars, plus the
/// midpoint for scalars with quadratic effects. Ties keep the
/// lexicographically first design in sweep order. Throws
/// std::invalid_argument above kMaxVertexCoordinates coordinates.
VertexSearchResult exhaustive_vertex_search(const ProblemSpec& spec);

}  // namespace fdoe::oracle
