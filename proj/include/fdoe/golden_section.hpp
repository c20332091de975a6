#pragma once

#include <cmath>
#include <utility>

namespace fdoe {

struct LineMinimum {
  double x;
  double f;
};

/// Golden-section search for a minimum of f on [a, b], stopping once the
/// bracket is narrower than `tol`. Returns the best point evaluated, which
/// for unimodal f lies inside the final bracket. f may return +inf.
template <typename F>
LineMinimum golden_section_minimize(F&& f, double a, double b, double tol, int max_iterations = 200) {
  constexpr double kInvPhi = 0.6180339887498948482;  // (sqrt(5) - 1) / 2
  if (b < a) {
    std::swap(a, b);
  }
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  LineMinimum best = fc <= fd ? LineMinimum{c, fc} : LineMinimum{d, fd};

  for (int it = 0; it < max_iterations && (b - a) > tol; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
      if (fc < best.f) {
        best = {c, fc};
      }
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
      if (fd < best.f) {
        best = {d, fd};
      }
    }
  }
  return best;
}

}  // namespace fdoe
