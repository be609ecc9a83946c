#pragma once

#include <functional>

namespace speclab {

// Brent's method on a sign-changing bracket [a,b]; xtol is absolute in x.
double brent(const std::function<double(double)>& f, double a, double b,
             double xtol = 1e-13, int max_iter = 200);

// Scan [lo, hi) in steps of `step` for the idx-th sign change (idx = 0 first),
// then polish with brent. Throws NumericError when no bracket is found.
double bracketed_root(const std::function<double(double)>& f, double lo, double hi,
                      double step, int idx = 0, double xtol = 1e-13);

} // namespace speclab
