#include "speclab/roots.hpp"
#include "speclab/errors.hpp"

#include <cmath>
#include <string>

namespace speclab {

double brent(const std::function<double(double)>& f, double a, double b,
             double xtol, int max_iter) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0) throw NumericError("brent: no sign change on bracket");
    double c = a, fc = fa, d = b - a, e = d;
    for (int it = 0; it < max_iter; ++it) {
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        double tol1 = 2.0 * 1e-16 * std::abs(b) + 0.5 * xtol;
        double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double s = fb / fa, p, q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                double qq = fa / fc, r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0 ? tol1 : -tol1);
        fb = f(b);
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
    }
    throw NumericError("brent: max iterations exceeded");
}

double bracketed_root(const std::function<double(double)>& f, double lo, double hi,
                      double step, int idx, double xtol) {
    double x0 = lo, f0 = f(x0);
    int found = 0;
    for (double x1 = lo + step; x0 < hi; x1 = std::min(x1 + step, hi)) {
        if (x1 > hi) x1 = hi;
        double f1 = f(x1);
        if (f0 == 0.0) {
            if (found == idx) return x0;
            ++found;
        } else if (f0 * f1 < 0.0) {
            if (found == idx) return brent(f, x0, x1, xtol);
            ++found;
        }
        if (x1 >= hi) break;
        x0 = x1;
        f0 = f1;
    }
    throw NumericError("bracketed_root: sign change " + std::to_string(idx) +
                       " not found in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

} // namespace speclab
