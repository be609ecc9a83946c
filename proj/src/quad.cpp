#include "speclab/quad.hpp"
#include "speclab/errors.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace speclab {

// Newton iteration on Legendre P_n from the Chebyshev-like initial guess; the usual
// symmetric construction, exact to machine precision for the orders used here.
static GaussRule make_rule(int n) {
    GaussRule r;
    r.x.resize(n);
    r.w.resize(n);
    const double pi = 3.14159265358979323846;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        r.x[i] = -x;
        r.x[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        r.w[i] = w;
        r.w[n - 1 - i] = w;
    }
    return r;
}

const GaussRule& GaussRule::get(int npts) {
    static std::map<int, GaussRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(npts);
    if (it == cache.end()) it = cache.emplace(npts, make_rule(npts)).first;
    return it->second;
}

double gauss_panel(const std::function<double(double)>& f, double a, double b, int npts) {
    const GaussRule& r = GaussRule::get(npts);
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < npts; ++i) s += r.w[i] * f(mid + half * r.x[i]);
    return s * half;
}

static double adapt(const std::function<double(double)>& f, double a, double b,
                    double tol, double floor_tol, int depth) {
    double coarse = gauss_panel(f, a, b, 15);
    double fine = gauss_panel(f, a, b, 31);
    double err = std::abs(fine - coarse);
    // Stop on the requested tolerance, on the global roundoff floor, or once the
    // panel has converged to its own machine precision: splitting cannot improve it.
    if (err <= std::max(tol, floor_tol) || err <= 4e-16 * std::abs(fine) || depth >= 40)
        return fine;
    double mid = 0.5 * (a + b);
    return adapt(f, a, mid, 0.5 * tol, floor_tol, depth + 1)
         + adapt(f, mid, b, 0.5 * tol, floor_tol, depth + 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    if (!(b >= a)) throw DomainError("integrate: reversed interval");
    if (a == b) return 0.0;
    double floor_tol = 1e-15 * std::abs(gauss_panel(f, a, b, 31));
    return adapt(f, a, b, tol, floor_tol, 0);
}

double trapz(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw DomainError("trapz: size mismatch");
    double s = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i)
        s += 0.5 * (y[i] + y[i - 1]) * (x[i] - x[i - 1]);
    return s;
}

} // namespace speclab
