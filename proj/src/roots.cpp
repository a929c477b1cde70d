#include "wpgibbs/roots.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wpgibbs/errors.hpp"

namespace wpgibbs {

namespace {

double checked(const scalar_fn& fn, double x) {
  const double v = fn(x);
  if (std::isnan(v)) throw numerical_error("function returned NaN at x = " + std::to_string(x));
  return v;
}

std::vector<double> scan_grid(const scalar_fn& fn, const std::vector<double>& xs, double tol,
                              const scalar_fn& derivative) {
  std::vector<double> vs(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) vs[i] = checked(fn, xs[i]);

  std::vector<double> roots;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (vs[i] == 0.0) {
      roots.push_back(xs[i]);
      continue;
    }
    if (i + 1 < xs.size() && vs[i + 1] != 0.0 && std::signbit(vs[i]) != std::signbit(vs[i + 1])) {
      double r = bisect(fn, xs[i], xs[i + 1], tol);
      if (derivative) {
        const double d = derivative(r);
        if (d != 0.0 && std::isfinite(d)) {
          const double polished = r - fn(r) / d;
          if (polished >= xs[i] && polished <= xs[i + 1]) r = polished;
        }
      }
      roots.push_back(r);
    }
  }
  std::sort(roots.begin(), roots.end());
  std::vector<double> merged;
  for (double r : roots) {
    if (merged.empty() || r - merged.back() > tol) merged.push_back(r);
  }
  return merged;
}

}  // namespace

double bisect(const scalar_fn& fn, double lo, double hi, double tol, int max_iter) {
  double flo = checked(fn, lo);
  const double fhi = checked(fn, hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (std::signbit(flo) == std::signbit(fhi)) throw std::invalid_argument("bisect: no sign change");
  for (int it = 0; it < max_iter && hi - lo > tol; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const double fm = checked(fn, mid);
    if (fm == 0.0) return mid;
    if (std::signbit(fm) == std::signbit(flo)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return lo + 0.5 * (hi - lo);
}

std::vector<double> isolate_and_refine(const scalar_fn& fn, interval range, int grid_n, double tol,
                                       const scalar_fn& derivative) {
  if (!(range.hi > range.lo)) throw std::invalid_argument("degenerate interval");
  if (grid_n < 2) throw std::invalid_argument("grid needs at least two points");
  std::vector<double> xs(static_cast<std::size_t>(grid_n));
  for (int i = 0; i < grid_n; ++i) {
    xs[static_cast<std::size_t>(i)] = range.lo + (range.hi - range.lo) * i / (grid_n - 1);
  }
  xs.back() = range.hi;
  return scan_grid(fn, xs, tol, derivative);
}

std::vector<double> isolate_and_refine_log(const scalar_fn& fn, interval range, int grid_n,
                                           double tol) {
  if (!(range.lo > 0.0) || !(range.hi > range.lo)) {
    throw std::invalid_argument("log grid needs 0 < lo < hi");
  }
  if (grid_n < 2) throw std::invalid_argument("grid needs at least two points");
  const double a = std::log(range.lo);
  const double b = std::log(range.hi);
  std::vector<double> xs(static_cast<std::size_t>(grid_n));
  for (int i = 0; i < grid_n; ++i) xs[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (grid_n - 1));
  xs.front() = range.lo;
  xs.back() = range.hi;
  return scan_grid(fn, xs, tol, nullptr);
}

}  // namespace wpgibbs
