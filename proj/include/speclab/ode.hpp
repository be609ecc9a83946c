#pragma once

#include <functional>
#include <vector>

namespace speclab {

// Right-hand side y' = f(t, y); y and dydt have the system dimension.
using OdeRhs = std::function<void(double t, const double* y, double* dydt)>;

// Dormand-Prince 5(4) with standard step control. Integrates from t0 to t1
// (t1 > t0) and returns the final state. Mixed error test: |err_i| <= atol + rtol*|y_i|.
std::vector<double> ode_integrate(const OdeRhs& f, std::vector<double> y0,
                                  double t0, double t1,
                                  double rtol = 1e-12, double atol = 1e-14);

// Same integrator, but lands exactly on each node of tgrid (ascending, tgrid[0] is the
// start) and invokes observe(index, t, y) there, including the start point.
void ode_integrate_grid(const OdeRhs& f, std::vector<double> y0,
                        const std::vector<double>& tgrid,
                        const std::function<void(std::size_t, double, const std::vector<double>&)>& observe,
                        double rtol = 1e-12, double atol = 1e-14);

} // namespace speclab
