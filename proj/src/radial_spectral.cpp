#include "speclab/radial_spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "speclab/errors.hpp"
#include "speclab/ode.hpp"
#include "speclab/parallel.hpp"
#include "speclab/roots.hpp"

namespace speclab {

namespace {

// Integrations start here, just off the regular singular point at phi = 0.
constexpr double kStartEps = 1e-6;
constexpr double kTailTol = 1e-14;
constexpr int kMaxTerms = 2'000'000;

double series_ratio(int m, double lambda, int k) {
    return (double(k) * k + (m - 1.0) * k - lambda) / ((k + 1.0) * (2.0 * k + m));
}

void check_series_point(double t) {
    if (!(std::abs(1.0 - t) < 2.0))
        throw DomainError("legendre series: t outside the convergence interval (-1, 3)");
}

// Locates the idx-th sign change of F scanning right from just above zero,
// then polishes with Brent.
double scan_root(const std::function<double(double)>& F, double step, int idx) {
    double lo = 1e-9;
    double flo = F(lo);
    int found = 0;
    for (int it = 0; it < 2'000'000 && lo < 1e8; ++it) {
        double hi = lo + step;
        double fhi = F(hi);
        if (flo * fhi <= 0.0) {
            if (found == idx) return brent(F, lo, hi, 1e-13);
            ++found;
        }
        lo = hi;
        flo = fhi;
    }
    throw NumericError("radial spectral: eigenvalue bracketing failed (scanned past 1e8)");
}

// Endpoint value u(rho; lambda) of the radial problem with u(0)=1, u'(0)=0.
double shoot_endpoint(const SpaceForm& s, double rho, double lambda) {
    const int m = s.m;
    const double eps = std::min(kStartEps, 1e-3 * rho);
    OdeRhs rhs = [&s, m, lambda](double phi, const double* y, double* d) {
        d[0] = y[1];
        d[1] = -(m - 1) * s.sn_prime(phi) / s.sn(phi) * y[1] - lambda * y[0];
    };
    auto y = ode_integrate(rhs, {1.0 - lambda * eps * eps / (2.0 * m), -lambda * eps / m},
                           eps, rho);
    return y[0];
}

double shooting_step(const SpaceForm& s, double rho) {
    double guess = (s.kind == Space::Sphere)
                       ? s.m * std::pow(1.5707963267948966 / rho, 2)
                       : std::pow((0.5 * s.m + 1.5) / rho, 2);
    return std::max(0.25, 0.04 * guess);
}

void check_nodes(const std::vector<double>& nodes, double rho) {
    if (nodes.size() < 2) throw DomainError("radial grid: need at least two nodes");
    for (std::size_t i = 1; i < nodes.size(); ++i)
        if (!(nodes[i] > nodes[i - 1]))
            throw DomainError("radial grid: nodes must be strictly increasing");
    if (nodes.front() < 0.0 || std::abs(nodes.back() - rho) > 1e-12 * std::max(1.0, rho))
        throw DomainError("radial grid: nodes must live in [0, rho] and end at rho");
}

} // namespace

RadialGrid RadialGrid::uniform(double rho, std::size_t n_cells) {
    if (n_cells < 2) throw DomainError("RadialGrid::uniform: need at least two cells");
    RadialGrid g;
    g.nodes.resize(n_cells + 1);
    for (std::size_t i = 0; i <= n_cells; ++i)
        g.nodes[i] = rho * double(i) / double(n_cells);
    g.nodes.back() = rho;
    return g;
}

double legendre_series_eval(int m, double lambda, double t, int K) {
    if (m < 2) throw DomainError("legendre series: dimension must be >= 2");
    if (K < 1) throw DomainError("legendre series: truncation must be >= 1");
    check_series_point(t);
    const double s = 1.0 - t;
    double a = 1.0, pw = 1.0, sum = 1.0;
    for (int k = 0; k < K; ++k) {
        a *= series_ratio(m, lambda, k);
        pw *= s;
        sum += a * pw;
    }
    return sum;
}

double legendre_series_value(int m, double lambda, double t) {
    if (m < 2) throw DomainError("legendre series: dimension must be >= 2");
    check_series_point(t);
    const double s = 1.0 - t;
    const double as = std::abs(s);
    double a = 1.0, pw = 1.0, sum = 1.0;
    for (int k = 0; k < kMaxTerms; ++k) {
        a *= series_ratio(m, lambda, k);
        pw *= s;
        sum += a * pw;
        // geometric tail estimate: beyond the turnover index the coefficient ratio
        // is below 1/2, so the remainder is bounded by |a s^k| / (1 - |s|/2)
        double kk = double(k + 1);
        bool decaying = kk * kk + (m - 1.0) * kk > std::abs(lambda);
        if (decaying && std::abs(a) * std::abs(pw) / (1.0 - as / 2.0) < kTailTol)
            return sum;
    }
    throw NumericError("legendre series: no convergence within the term budget");
}

SeriesSolution legendre_series(int m, double lambda, double t) {
    if (m < 2) throw DomainError("legendre series: dimension must be >= 2");
    check_series_point(t);
    const double s = 1.0 - t;
    const double as = std::abs(s);
    SeriesSolution out;
    out.m = m;
    out.lambda = lambda;
    out.coeffs.push_back(1.0);
    double a = 1.0, pw = 1.0;
    for (int k = 0; k < kMaxTerms; ++k) {
        a *= series_ratio(m, lambda, k);
        pw *= s;
        out.coeffs.push_back(a);
        double kk = double(k + 1);
        bool decaying = kk * kk + (m - 1.0) * kk > std::abs(lambda);
        if (decaying && std::abs(a) * std::abs(pw) / (1.0 - as / 2.0) < kTailTol)
            return out;
    }
    throw NumericError("legendre series: no convergence within the term budget");
}

double cap_first_eigenvalue_shooting(const SpaceForm& space, double rho) {
    rho = space.clamp_radius(rho);
    return scan_root([&](double lam) { return shoot_endpoint(space, rho, lam); },
                     shooting_step(space, rho), 0);
}

std::vector<double> radial_eigenfunction(const SpaceForm& space, double rho,
                                         double lambda,
                                         const std::vector<double>& nodes,
                                         double* slope) {
    rho = space.clamp_radius(rho);
    check_nodes(nodes, rho);
    const int m = space.m;
    const double eps = std::min(kStartEps, 1e-3 * rho);
    const double area = unit_sphere_area(m);

    OdeRhs rhs = [&space, m, lambda, area](double phi, const double* y, double* d) {
        d[0] = y[1];
        d[1] = -(m - 1) * space.sn_prime(phi) / space.sn(phi) * y[1] - lambda * y[0];
        d[2] = area * std::pow(space.sn(phi), m - 1) * y[0] * y[0];
    };

    std::vector<double> tgrid{eps};
    std::vector<std::size_t> target;   // node index served by tgrid[i+ off]
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i] > eps * (1.0 + 1e-12)) {
            tgrid.push_back(nodes[i]);
            target.push_back(i);
        }

    std::vector<double> raw(nodes.size(), 0.0);
    double u_rho = 0.0, v_rho = 0.0, mass = 0.0;
    std::vector<double> y0{1.0 - lambda * eps * eps / (2.0 * m), -lambda * eps / m,
                           area * std::pow(eps, m) / m};
    ode_integrate_grid(rhs, y0, tgrid,
                       [&](std::size_t idx, double, const std::vector<double>& y) {
                           if (idx == 0) return;
                           raw[target[idx - 1]] = y[0];
                           if (idx == tgrid.size() - 1) {
                               u_rho = y[0];
                               v_rho = y[1];
                               mass = y[2];
                           }
                       });
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i] <= eps * (1.0 + 1e-12))
            raw[i] = 1.0 - lambda * nodes[i] * nodes[i] / (2.0 * m);

    if (!(mass > 0.0)) throw NumericError("radial eigenfunction: vanishing L2 mass");
    const double c = 1.0 / std::sqrt(mass);
    for (double& v : raw) v *= c;
    // the last node is the Dirichlet boundary: the residual there is root-finder
    // noise, not data
    (void)u_rho;
    raw.back() = 0.0;
    if (slope) *slope = c * v_rho;
    return raw;
}

EigenSolution cap_first_eigenvalue(const SpaceForm& space, double rho,
                                   std::size_t n_grid) {
    rho = space.clamp_radius(rho);
    EigenSolution out;
    if (space.kind == Space::Sphere) {
        const double t = std::cos(rho);
        out.lambda = scan_root(
            [&](double lam) { return legendre_series_value(space.m, lam, t); }, 0.25, 0);
    } else {
        out.lambda = cap_first_eigenvalue_shooting(space, rho);
    }
    out.grid = RadialGrid::uniform(rho, n_grid);
    out.profile = radial_eigenfunction(space, rho, out.lambda, out.grid.nodes,
                                       &out.boundary_slope);
    return out;
}

AngularRadialSolution angular_radial_solution(const SpaceForm& space, double rho,
                                              double mu, double lambda,
                                              double boundary_value,
                                              std::size_t n_grid) {
    rho = space.clamp_radius(rho);
    if (!(mu > 0.0))
        throw DomainError("angular radial solution: mu must be positive "
                          "(the mean mode has no radial factor here)");
    if (!(boundary_value > 0.0))
        throw DomainError("angular radial solution: boundary value must be positive");
    const int m = space.m;
    const double alpha = 0.5 * (-(m - 2) + std::sqrt(double(m - 2) * (m - 2) + 4.0 * mu));
    const double eps = std::min(kStartEps, 1e-3 * rho);

    OdeRhs rhs = [&space, m, mu, lambda](double phi, const double* y, double* d) {
        const double sn = space.sn(phi);
        const double w = std::pow(sn, m - 1);
        d[0] = y[1];
        d[1] = -(m - 1) * space.sn_prime(phi) / sn * y[1] - (lambda - mu / (sn * sn)) * y[0];
        d[2] = (y[1] * y[1] + (mu / (sn * sn) - lambda) * y[0] * y[0]) * w;
        d[3] = y[0] * y[0] * w;
    };

    AngularRadialSolution out;
    out.grid = RadialGrid::uniform(rho, n_grid);
    const auto& nodes = out.grid.nodes;

    std::vector<double> tgrid{eps};
    std::vector<std::size_t> target;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i] > eps * (1.0 + 1e-12)) {
            tgrid.push_back(nodes[i]);
            target.push_back(i);
        }

    // start data from the indicial behavior g ~ phi^alpha; the quadrature states
    // get their analytic [0, eps) contributions (the energy one simplifies to
    // alpha * eps^{2 alpha + m - 2} because alpha^2 + mu = alpha (2 alpha + m - 2))
    std::vector<double> y0{std::pow(eps, alpha), alpha * std::pow(eps, alpha - 1.0),
                           alpha * std::pow(eps, 2.0 * alpha + m - 2.0),
                           std::pow(eps, 2.0 * alpha + m - 1.0) / (2.0 * alpha + m - 1.0)};

    std::vector<double> raw(nodes.size(), 0.0);
    double g_rho = 0.0, gp_rho = 0.0, energy_raw = 0.0, l2_raw = 0.0;
    ode_integrate_grid(rhs, y0, tgrid,
                       [&](std::size_t idx, double, const std::vector<double>& y) {
                           if (idx == 0) return;
                           raw[target[idx - 1]] = y[0];
                           if (idx == tgrid.size() - 1) {
                               g_rho = y[0];
                               gp_rho = y[1];
                               energy_raw = y[2];
                               l2_raw = y[3];
                           }
                       });
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i] <= eps * (1.0 + 1e-12)) raw[i] = std::pow(nodes[i], alpha);

    if (!(g_rho > 0.0))
        throw InvariantViolation("angular radial solution: profile vanished in (0, rho)");
    for (std::size_t i = 1; i + 1 < raw.size(); ++i)
        if (!(raw[i] > 0.0))
            throw InvariantViolation("angular radial solution: profile vanished in (0, rho)");

    const double s = boundary_value / g_rho;
    out.profile = std::move(raw);
    for (double& v : out.profile) v *= s;
    out.slope_rho = s * gp_rho;
    out.energy = s * s * energy_raw / std::pow(space.sn(rho), m - 1);
    out.l2_weight2 = s * s * l2_raw;
    return out;
}

TorsionSolution torsion_ball(const SpaceForm& space, double rho, std::size_t n_grid) {
    rho = space.clamp_radius(rho);
    const int m = space.m;
    const double eps = std::min(kStartEps, 1e-3 * rho);
    const double area = unit_sphere_area(m);

    // V = int_0^phi sn^{m-1}, W = int_0^phi sn^{1-m} V, U = int_0^phi W sn^{m-1};
    // then u(phi) = W(rho) - W(phi) and tor = -1/2 area (W(rho) V(rho) - U(rho)).
    OdeRhs rhs = [&space, m](double phi, const double* y, double* d) {
        const double w = std::pow(space.sn(phi), m - 1);
        d[0] = w;
        d[1] = y[0] / w;
        d[2] = y[1] * w;
    };

    TorsionSolution out;
    out.grid = RadialGrid::uniform(rho, n_grid);
    const auto& nodes = out.grid.nodes;

    std::vector<double> tgrid{eps};
    std::vector<std::size_t> target;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i] > eps * (1.0 + 1e-12)) {
            tgrid.push_back(nodes[i]);
            target.push_back(i);
        }

    std::vector<double> y0{std::pow(eps, m) / m, eps * eps / (2.0 * m),
                           std::pow(eps, m + 2.0) / (2.0 * m * (m + 2.0))};
    std::vector<double> W(nodes.size(), 0.0);
    double V_rho = 0.0, W_rho = 0.0, U_rho = 0.0;
    ode_integrate_grid(rhs, y0, tgrid,
                       [&](std::size_t idx, double, const std::vector<double>& y) {
                           if (idx == 0) return;
                           W[target[idx - 1]] = y[1];
                           if (idx == tgrid.size() - 1) {
                               V_rho = y[0];
                               W_rho = y[1];
                               U_rho = y[2];
                           }
                       });
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i] <= eps * (1.0 + 1e-12)) W[i] = nodes[i] * nodes[i] / (2.0 * m);

    out.profile.resize(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) out.profile[i] = W_rho - W[i];
    out.profile.back() = 0.0;
    out.tor_value = -0.5 * area * (W_rho * V_rho - U_rho);
    return out;
}

double cap_second_eigenvalue(const SpaceForm& space, double rho) {
    rho = space.clamp_radius(rho);
    const int m = space.m;

    // (a) second root of the radial (mu = 0) problem
    double radial2;
    if (space.kind == Space::Sphere) {
        const double t = std::cos(rho);
        radial2 = scan_root(
            [&](double lam) { return legendre_series_value(m, lam, t); }, 0.25, 1);
    } else {
        radial2 = scan_root([&](double lam) { return shoot_endpoint(space, rho, lam); },
                            shooting_step(space, rho), 1);
    }

    // (b) first root of the mu = m-1 branch; its indicial exponent is exactly 1
    const double mu = double(m - 1);
    const double eps = std::min(kStartEps, 1e-3 * rho);
    auto mode_endpoint = [&](double lam) {
        OdeRhs rhs = [&space, m, mu, lam](double phi, const double* y, double* d) {
            const double sn = space.sn(phi);
            d[0] = y[1];
            d[1] = -(m - 1) * space.sn_prime(phi) / sn * y[1] - (lam - mu / (sn * sn)) * y[0];
        };
        return ode_integrate(rhs, {eps, 1.0}, eps, rho)[0];
    };
    double mode1 = scan_root(mode_endpoint, shooting_step(space, rho), 0);

    return std::min(radial2, mode1);
}

KjCurves kj_deficit_curves(const SpaceForm& space, double R,
                           const std::vector<double>& r_grid) {
    R = space.clamp_radius(R);
    if (r_grid.empty()) throw DomainError("kj curves: empty radius grid");
    for (std::size_t i = 0; i < r_grid.size(); ++i) {
        if (!(r_grid[i] > 0.0) || r_grid[i] > R * (1.0 + 1e-12))
            throw DomainError("kj curves: radii must lie in (0, R]");
        if (i > 0 && !(r_grid[i] > r_grid[i - 1]))
            throw DomainError("kj curves: radii must be strictly increasing");
    }

    const double lam_R = cap_first_eigenvalue(space, R, 64).lambda;
    const double tor_R = torsion_ball(space, R, 64).tor_value;

    KjCurves out;
    out.r = r_grid;
    out.f.resize(r_grid.size());
    out.g.resize(r_grid.size());
    parallel_for(r_grid.size(), [&](std::size_t i) {
        const double r = r_grid[i];
        if (std::abs(r - R) <= 1e-12 * R) {
            out.f[i] = 0.0;
            out.g[i] = 0.0;
        } else {
            out.f[i] = cap_first_eigenvalue(space, r, 64).lambda - lam_R;
            out.g[i] = torsion_ball(space, r, 64).tor_value - tor_R;
        }
    });

    out.c_est = 0.0;
    for (std::size_t i = 0; i < r_grid.size(); ++i) {
        if (std::abs(r_grid[i] - R) <= 1e-12 * R) continue;
        if (out.f[i] > 0.0) out.c_est = std::max(out.c_est, out.g[i] / out.f[i]);
    }
    return out;
}

} // namespace speclab
