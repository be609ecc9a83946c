#include "speclab/ode.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "speclab/errors.hpp"

namespace speclab {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// 4th-order embedded weights (b - bhat gives the error estimate).
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

struct Stepper {
    const OdeRhs& f;
    std::size_t dim;
    double rtol, atol;
    std::vector<double> k1, k2, k3, k4, k5, k6, k7, ytmp, ynew;

    Stepper(const OdeRhs& rhs, std::size_t n, double rt, double at)
        : f(rhs), dim(n), rtol(rt), atol(at),
          k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n) {}

    // Attempts one step of size h from (t, y); k1 must hold f(t, y) on entry (FSAL).
    // Returns the scaled error norm; on success (<= 1) ynew and k7 = f(t+h, ynew) are valid.
    double try_step(double t, const std::vector<double>& y, double h) {
        for (std::size_t i = 0; i < dim; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
        f(t + c2 * h, ytmp.data(), k2.data());
        for (std::size_t i = 0; i < dim; ++i)
            ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        f(t + c3 * h, ytmp.data(), k3.data());
        for (std::size_t i = 0; i < dim; ++i)
            ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        f(t + c4 * h, ytmp.data(), k4.data());
        for (std::size_t i = 0; i < dim; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        f(t + c5 * h, ytmp.data(), k5.data());
        for (std::size_t i = 0; i < dim; ++i)
            ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                  a65 * k5[i]);
        f(t + h, ytmp.data(), k6.data());
        for (std::size_t i = 0; i < dim; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                                  b6 * k6[i]);
        f(t + h, ynew.data(), k7.data());

        double err = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                             e6 * k6[i] + e7 * k7[i]);
            double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            double r = ei / sc;
            err += r * r;
        }
        return std::sqrt(err / static_cast<double>(dim));
    }
};

// Core driver; calls emit(t, y) whenever t hits a node of tgrid (which must start at t0).
void drive(const OdeRhs& f, std::vector<double> y, const std::vector<double>& tgrid,
           const std::function<void(std::size_t, double, const std::vector<double>&)>& emit,
           double rtol, double atol) {
    if (tgrid.size() < 2) throw DomainError("ode_integrate: need at least two time nodes");
    for (std::size_t i = 1; i < tgrid.size(); ++i)
        if (!(tgrid[i] > tgrid[i - 1]))
            throw DomainError("ode_integrate: time nodes must be strictly increasing");

    const std::size_t dim = y.size();
    Stepper st(f, dim, rtol, atol);
    double t = tgrid.front();
    if (emit) emit(0, t, y);
    f(t, y.data(), st.k1.data());

    const double span = tgrid.back() - tgrid.front();
    double h = span / 100.0;
    const double hmin = span * 1e-15;
    std::size_t next = 1;
    long guard = 0;

    while (next < tgrid.size()) {
        bool hit = false;
        double hstep = h;
        if (t + hstep >= tgrid[next] - hmin) {
            hstep = tgrid[next] - t;
            hit = true;
        }
        double err = st.try_step(t, y, hstep);
        if (err <= 1.0) {
            t = hit ? tgrid[next] : t + hstep;
            y = st.ynew;
            std::swap(st.k1, st.k7); // FSAL
            if (hit) {
                if (emit) emit(next, t, y);
                ++next;
            }
            double fac = (err == 0.0) ? 5.0 : 0.9 * std::pow(err, -0.2);
            h = hstep * std::clamp(fac, 0.2, 5.0);
        } else {
            h = hstep * std::max(0.2, 0.9 * std::pow(err, -0.2));
        }
        if (h < hmin)
            throw NumericError("ode_integrate: step size underflow (stiff or singular RHS)");
        if (++guard > 50'000'000)
            throw NumericError("ode_integrate: step budget exhausted");
    }
}

} // namespace

std::vector<double> ode_integrate(const OdeRhs& f, std::vector<double> y0,
                                  double t0, double t1, double rtol, double atol) {
    std::vector<double> out;
    drive(f, std::move(y0), {t0, t1},
          [&](std::size_t idx, double, const std::vector<double>& y) {
              if (idx == 1) out = y;
          },
          rtol, atol);
    return out;
}

void ode_integrate_grid(const OdeRhs& f, std::vector<double> y0,
                        const std::vector<double>& tgrid,
                        const std::function<void(std::size_t, double, const std::vector<double>&)>& observe,
                        double rtol, double atol) {
    drive(f, std::move(y0), tgrid, observe, rtol, atol);
}

} // namespace speclab
