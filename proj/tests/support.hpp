#pragma once

// Shared helpers for the unit and acceptance suites.

#include <cmath>
#include <functional>
#include <vector>

#include "cvdisc/discrim.hpp"

namespace cvdisc::testing {

// `count` evenly spaced points in (lo, hi]; lo itself is excluded.
inline std::vector<double> open_grid(double lo, double hi, int count) {
  std::vector<double> g;
  g.reserve(static_cast<std::size_t>(count));
  for (int i = 1; i <= count; ++i) g.push_back(lo + (hi - lo) * i / count);
  return g;
}

// First root of f on (lo, hi], located by a scan of `scan` cells followed by
// bisection down to `xtol`. Returns NaN if f never changes sign.
inline double first_root(const std::function<double(double)>& f, double lo, double hi, int scan = 400,
                         double xtol = 1e-13) {
  double a = lo;
  double fa = f(a);
  for (int i = 1; i <= scan; ++i) {
    const double b = lo + (hi - lo) * i / scan;
    const double fb = f(b);
    if ((fa <= 0) != (fb <= 0)) {
      double x0 = a, x1 = b, f0 = fa;
      while (x1 - x0 > xtol) {
        const double mid = 0.5 * (x0 + x1);
        const double fm = f(mid);
        if ((f0 <= 0) == (fm <= 0)) {
          x0 = mid;
          f0 = fm;
        } else {
          x1 = mid;
        }
      }
      return 0.5 * (x0 + x1);
    }
    a = b;
    fa = fb;
  }
  return std::nan("");
}

// alpha^2 at which the signal/failure infidelity first reaches `target`.
inline double alpha_sq_at_infidelity(int n, double target) {
  return first_root([n, target](double a2) { return ir_report(EnsembleSpec<>(n, a2)).infidelity - target; },
                    1e-6, 6.0);
}

}  // namespace cvdisc::testing
