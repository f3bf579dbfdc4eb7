#pragma once

#include <cmath>

#include "mqi/errors.hpp"

// Derivative-free 1-d maximization used to cross-validate closed-form optima.

namespace mqi {

struct MaxResult {
  double argmax;
  double max;
  int iterations;
  bool converged;  // tolerance met before the iteration cap
};

// Golden-section search for the maximum of a unimodal objective on [lo, hi].
// Deterministic: fixed shrink ratio, relative argument tolerance, iteration
// cap. Unimodality is the caller's responsibility; on a non-unimodal objective
// the result is a local maximum.
template <typename F>
MaxResult maximize_1d(F&& f, double lo, double hi, double rel_tol = 1e-10, int max_iter = 200) {
  if (!(lo < hi)) throw bracket_error("maximize_1d: bracket must satisfy lo < hi");
  if (!(rel_tol > 0.0)) throw bracket_error("maximize_1d: rel_tol must be > 0");
  constexpr double inv_phi = 0.6180339887498949;  // (sqrt 5 - 1) / 2
  double a = lo;
  double b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  int it = 0;
  bool converged = false;
  for (; it < max_iter; ++it) {
    const double scale = std::max({std::fabs(a), std::fabs(b), 1.0});
    if (b - a <= rel_tol * scale) {
      converged = true;
      break;
    }
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  const double xm = 0.5 * (a + b);
  return {xm, f(xm), it, converged};
}

}  // namespace mqi
