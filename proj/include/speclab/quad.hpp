#pragma once

#include <functional>
#include <vector>

namespace speclab {

// Nodes/weights of N-point Gauss-Legendre on [-1,1]; computed once per N and cached.
struct GaussRule {
    std::vector<double> x, w;
    static const GaussRule& get(int npts);
};

// One Gauss-Legendre panel of f over [a,b].
double gauss_panel(const std::function<double(double)>& f, double a, double b, int npts);

// Adaptive Gauss-Legendre: bisects panels until the 15- vs 31-point estimates agree to
// tol on each panel (tol distributed by panel length). Absolute tolerance.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-12);

// Trapezoid over tabulated samples on (possibly non-uniform) nodes.
double trapz(const std::vector<double>& x, const std::vector<double>& y);

} // namespace speclab
