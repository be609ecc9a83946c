#pragma once

#include <cstddef>
#include <vector>

#include "speclab/spaceform.hpp"

namespace speclab {

// Radial node set on [0, rho]; last node is exactly rho.
struct RadialGrid {
    std::vector<double> nodes;
    static RadialGrid uniform(double rho, std::size_t n_cells);
};

// First Dirichlet eigenpair of a geodesic cap, radial profile on a grid.
// profile is positive on the open interval, vanishes at rho, and is normalized
// to unit L2 norm over the cap; boundary_slope = u'(rho) < 0.
struct EigenSolution {
    double lambda = 0.0;
    RadialGrid grid;
    std::vector<double> profile;
    double boundary_slope = 0.0;
};

// Coefficients a_0..a_K of the series expansion of the radial cap solution on
// S^m about t = cos(phi) = 1, a_0 = 1.
struct SeriesSolution {
    int m = 0;
    double lambda = 0.0;
    std::vector<double> coeffs;
};

struct TorsionSolution {
    RadialGrid grid;
    std::vector<double> profile;
    double tor_value = 0.0;   // energy value; <= 0
};

// Radial factor for a separated mode with angular eigenvalue mu at spectral
// parameter lambda, scaled so that profile(rho) = boundary_value.
struct AngularRadialSolution {
    RadialGrid grid;
    std::vector<double> profile;
    double slope_rho = 0.0;      // g'(rho) under the same scaling
    double energy = 0.0;         // int (g'^2 + (mu/sn^2 - lambda) g^2) sn^{m-1} dphi / sn^{m-1}(rho)
    double l2_weight2 = 0.0;     // int g^2 sn^{m-1} dphi
};

// Partial sum sum_{k<=K} a_k (1-t)^k of the cap series on S^m; the recursion is
// a_{k+1} = a_k (k^2 + (m-1)k - lambda) / ((k+1)(2k+m)), a_0 = 1.
// Requires |1-t| < 2 (the series' disk of convergence).
double legendre_series_eval(int m, double lambda, double t, int K);

// Same sum, truncated automatically once the geometric tail bound
// |a_K||1-t|^K / (1 - |1-t|/2) drops below 1e-14.
double legendre_series_value(int m, double lambda, double t);

// Coefficients a_0..a_K for inspection (K chosen by the same tail rule at t).
SeriesSolution legendre_series(int m, double lambda, double t);

// Smallest lambda whose radial solution first vanishes at rho. On the sphere the
// root is located on the series value at t = cos(rho); on Euclidean/hyperbolic
// space by ODE shooting. The returned profile always comes from the ODE route.
EigenSolution cap_first_eigenvalue(const SpaceForm& space, double rho,
                                   std::size_t n_grid = 512);

// Shooting-only eigenvalue (all space forms); the series/shooting agreement on
// the sphere is part of the test contract.
double cap_first_eigenvalue_shooting(const SpaceForm& space, double rho);

// Second Dirichlet eigenvalue of the cap: minimum of the second radial root and
// the first root of the mu = m-1 angular branch.
double cap_second_eigenvalue(const SpaceForm& space, double rho);

// Normalized first eigenfunction evaluated on arbitrary ascending nodes in
// [0, rho] (nodes.back() must equal rho). Returns the profile, u'(rho) in
// slope, and guarantees unit cap L2 norm.
std::vector<double> radial_eigenfunction(const SpaceForm& space, double rho,
                                         double lambda,
                                         const std::vector<double>& nodes,
                                         double* slope = nullptr);

// Mode radial factor: g'' + (m-1)(sn'/sn) g' + (lambda - mu/sn^2) g = 0 started
// with the indicial exponent alpha = positive root of a^2 + (m-2)a - mu = 0.
// mu must be strictly positive (the mean mode is excluded). Throws
// InvariantViolation if g vanishes inside (0, rho).
AngularRadialSolution angular_radial_solution(const SpaceForm& space, double rho,
                                              double mu, double lambda,
                                              double boundary_value = 1.0,
                                              std::size_t n_grid = 512);

// Radial torsion function u(phi) = int_phi^rho sn^{1-m}(s) int_0^s sn^{m-1}(t) dt ds
// and its energy tor = -1/2 int_{B_rho} u.
TorsionSolution torsion_ball(const SpaceForm& space, double rho,
                             std::size_t n_grid = 512);

// Deficit comparison curves against the reference ball B_R:
// f(r) = lambda_1(B_r) - lambda_1(B_R), g(r) = tor(B_r) - tor(B_R).
struct KjCurves {
    std::vector<double> r;
    std::vector<double> f;
    std::vector<double> g;
    double c_est = 0.0;       // max over r < R of g/f
};
KjCurves kj_deficit_curves(const SpaceForm& space, double R,
                           const std::vector<double>& r_grid);

} // namespace speclab
