#pragma once

#include <functional>
#include <optional>
#include <vector>

namespace wpgibbs {

struct interval {
  double lo;
  double hi;
};

using scalar_fn = std::function<double(double)>;

/// Bisection on a bracket with f(lo), f(hi) of opposite sign, to hi - lo <= tol.
double bisect(const scalar_fn& fn, double lo, double hi, double tol, int max_iter = 400);

/// Grid scan for sign changes (and exact zeros on grid points), bisection to
/// width tol, optional single Newton polish with `derivative`. Roots are
/// returned sorted with duplicates within tol merged. Tangential roots
/// without a sign change are invisible to this routine.
/// Throws numerical_error if fn returns NaN.
std::vector<double> isolate_and_refine(const scalar_fn& fn, interval range, int grid_n, double tol,
                                       const scalar_fn& derivative = nullptr);

/// Same, on a logarithmically spaced grid over a positive range.
std::vector<double> isolate_and_refine_log(const scalar_fn& fn, interval range, int grid_n,
                                           double tol);

}  // namespace wpgibbs
