#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "speclab/dtn.hpp"
#include "speclab/radial_spectral.hpp"
#include "speclab/spaceform.hpp"

namespace speclab {

// Perturbed-domain toolkit: nearly circular domains Omega = {(theta, s) :
// s < (1 + xi(theta)) rho} in a two-dimensional space form, their first
// Dirichlet eigenvalue, and the stability quantities that compare Omega
// against the cap B_rho.
//
// Every operation here is restricted to m = 2 space forms. BoundaryPerturbation
// coefficients are read against the real harmonic basis orthonormal in
// L^2(boundary circle): Y_0 = 1/sqrt(2 pi sn(rho)), Y_{k,0} = cos(k theta)/
// sqrt(pi sn(rho)), Y_{k,1} = sin(k theta)/sqrt(pi sn(rho)). This is the
// normalization under which the dtn-spectrum eta values predict eigenvalue
// deficits per unit squared coefficient, and it makes ||xi||_{L^2(boundary)}^2
// equal to the plain coefficient sum of squares.

// xi(theta) and its first two theta-derivatives from the mode list.
double xi_value(const SpaceForm& space, double rho, const BoundaryPerturbation& xi,
                double theta, int deriv = 0);

// Smallness proxy used by the admissibility gate: max over theta of |xi|,
// |xi'|, |xi''| (second-order centered differences on a fine grid, so the
// gate matches what the discretized solver actually sees).
double xi_smallness_proxy(const SpaceForm& space, double rho,
                          const BoundaryPerturbation& xi);

// ---------------------------------------------------------------------------
// Harmonic extension

// h = sum_i a_i ghat_{k_i}(t) Y_i(theta), where ghat_k solves the mu = k^2
// radial Laplace equation (angular_radial_solution with lambda = 0) normalized
// to 1 at rho, and ghat_0 = 1. seminorm = int_{B_rho} |grad h|^2, the
// H^{1/2} seminorm of xi; in this basis it is the plain sum of a_i^2 times the
// per-mode energies, so it is additive across orthogonal modes.
struct HarmonicExtension {
    SpaceForm space{Space::Sphere, 2};
    double rho = 0.0;
    BoundaryPerturbation xi;
    double seminorm = 0.0;
    std::vector<double> nodes;                   // uniform on [0, rho]
    std::map<int, std::vector<double>> profiles; // per degree, ghat_k on nodes
    std::map<int, std::vector<double>> slopes;   // d/dt ghat_k on nodes

    // h and its derivatives at (nodes[i], theta).
    double value(std::size_t i, double theta) const;
    double d_t(std::size_t i, double theta) const;
    double d_theta(std::size_t i, double theta) const;
};

HarmonicExtension harmonic_extension(const SpaceForm& space, double rho,
                                     const BoundaryPerturbation& xi,
                                     std::size_t n_grid = 512);

// ---------------------------------------------------------------------------
// Pullback map and coefficients

// Polar pullback of the Rayleigh quotient of Omega through the map
// T(t, theta) = (s(t, theta), theta), s = (1 + h(t, theta)) t, which extends
// the boundary graph into the cap with the harmonic profile h. Energy density
// that the solver integrates over (t, theta):
//
//   e_tt v_t^2 + 2 e_tth v_t v_theta + e_thth v_theta^2,
//   e_tt  = sn(s)/s_t + s_theta^2/(s_t sn(s)),
//   e_tth = -s_theta/sn(s),
//   e_thth = s_t/sn(s),          with det of the coefficient pair == 1,
//
// and mass density mass = sn(s) s_t. abar_* / m_hat are the same fields
// normalized by their xi = 0 values (the orthonormal-frame view): abar -> Id
// and m_hat -> 1 with |abar - Id| and |m_hat - 1| <= C (|h| + |grad h|)
// pointwise, while det abar == 1 identically.
struct MappedCoefficients {
    SpaceForm space{Space::Sphere, 2};
    double rho = 0.0;
    std::size_t n_r = 0;     // radial cells K (nodes 0..K)
    std::size_t n_theta = 0; // angular nodes N
    std::vector<double> t_nodes;  // K+1
    std::vector<double> t_mid;    // K
    std::vector<double> theta;    // N

    // midpoint x theta fields, row-major [k * n_theta + j]
    std::vector<double> e_tt, e_tth, e_thth;
    std::vector<double> abar_tt, abar_tth, abar_thth;
    std::vector<double> h_mid, h_t_mid, h_theta_mid;

    // node x theta fields, row-major [(k) * n_theta + j], k = 0..K
    std::vector<double> mass;    // sn(s) s_t
    std::vector<double> m_hat;   // mass / sn(t); (1 + h)^2 at the pole
    std::vector<double> s_nodes; // physical radius of each node

    double smallness = 0.0; // xi_smallness_proxy of the defining xi
};

// Gate: xi_smallness_proxy > 0.1, s_t <= 0, 1 + h <= 0, or (sphere) s >= pi
// anywhere on the grid throw PerturbationTooLarge.
MappedCoefficients build_map_coefficients(const SpaceForm& space, double rho,
                                          const BoundaryPerturbation& xi,
                                          std::size_t n_r = 256,
                                          std::size_t n_theta = 128);

// ---------------------------------------------------------------------------
// Perturbed eigenvalue solve

// First Dirichlet eigenpair of Omega computed on the pulled-back problem:
// second-order staggered finite differences in t, Fourier collocation in
// theta (derivatives averaged to the radial midpoints), a single shared
// unknown at the pole, and shift-invert power iteration (shift 0.9 lambda_rho,
// Rayleigh tolerance 1e-10) with preconditioned CG inner solves; the
// preconditioner is the exact per-mode tridiagonal inverse of the xi = 0
// operator, so the unperturbed solve converges in one inner iteration. The
// start vector is the pulled-back cap eigenfunction, making runs deterministic.
struct PerturbedEigenResult {
    SpaceForm space{Space::Sphere, 2};
    double rho = 0.0;
    BoundaryPerturbation xi;
    std::size_t n_r = 0, n_theta = 0;

    double lambda_omega = 0.0;    // first eigenvalue of Omega
    double lambda_rho_grid = 0.0; // xi = 0 eigenvalue on the same grid
    double lambda_rho = 0.0;      // 1D reference (cap_first_eigenvalue)
    // deficit = lambda_omega - lambda_rho_grid: differencing against the
    // same-grid cap value cancels the shared O(h^2) discretization error, so
    // the deficit of a small perturbation is resolved far below the absolute
    // eigenvalue error.
    double deficit = 0.0;
    double error_estimate = 0.0; // |lambda(h) - lambda(2h)| / 3 (order 2)
    double solver_tol = 0.0;     // error_estimate + iteration tolerance share

    // u_hat >= 0 on nodes x theta ((K+1) x N, row-major), sum mass u_hat^2 = 1
    // (i.e. int_Omega u^2 = 1 through the pullback); s_nodes are the physical
    // radii realizing the map.
    std::vector<double> u_hat;
    std::vector<double> s_nodes;
    std::vector<double> t_nodes; // K+1
    std::vector<double> theta;   // N

    int iterations = 0;     // outer power-iteration count (fine grid)
    double residual = 0.0;  // ||K u - lambda M u|| / lambda ||M u||
};

PerturbedEigenResult perturbed_eigenvalue(const SpaceForm& space, double rho,
                                          const BoundaryPerturbation& xi,
                                          std::size_t n_r = 256,
                                          std::size_t n_theta = 128);

// ---------------------------------------------------------------------------
// Constraint projection and geometric quantities

// Newton correction of the degree-0 coefficient (volume: |Omega| = |B_rho|
// exactly, via the coarea integral of F(t) = int_0^t sn) and of the degree-1
// pair (set center at the pole: first ambient moments vanish). The linearized
// solution seeds the iteration; corrections are second order in xi_raw for
// mean-zero degree >= 2 input.
struct ProjectedPerturbation {
    BoundaryPerturbation xi;
    double correction_deg0 = 0.0; // |a_0 shift|
    double correction_deg1 = 0.0; // |(a_1c, a_1s) shift|
    int iterations = 0;
};

ProjectedPerturbation project_constraints(const SpaceForm& space, double rho,
                                          const BoundaryPerturbation& xi_raw);

// Mean ambient position y over Omega (coarea integral; sphere only) and the
// normalized center y/|y|. Throws DomainError when |y| vanishes (the center
// of an antipodally symmetric set is undefined).
struct SetCenter {
    std::array<double, 3> y{};
    std::array<double, 3> center{};
    double y_norm = 0.0;
};

SetCenter set_center(const SpaceForm& space, double rho,
                     const BoundaryPerturbation& xi);

// |Omega symmetric-difference B_rho| = int |F((1 + xi) rho) - F(rho)| dtheta.
double symmetric_difference(const SpaceForm& space, double rho,
                            const BoundaryPerturbation& xi);

// Fourier coefficients (degrees <= k_max) of the exact radial graph of the
// cap of radius rho centered at geodesic distance delta along the theta = 0
// meridian; the tail above k_max decays geometrically in delta. Periodic
// trapezoid quadrature on n_quad nodes.
BoundaryPerturbation translated_cap_perturbation(const SpaceForm& space, double rho,
                                                 double delta, int k_max = 8,
                                                 std::size_t n_quad = 2048);

// ---------------------------------------------------------------------------
// Eigenfunction distance

// distance = int |u_Omega - u_B|^2 over the whole space (both eigenfunctions
// nonnegative, unit L^2, extended by zero), evaluated per theta on a fine
// physical radial grid: overlap region plus the one-sided slivers where only
// one of the two supports is present. pullback_error = int |u_Omega - u_hat|^2
// (u_hat read as a function on B_rho) and alpha = int_{B_rho} u_hat u_B are
// the intermediate quantities of the comparison argument.
struct EigenfunctionDistance {
    double distance = 0.0;
    double pullback_error = 0.0;
    double alpha = 0.0;
};

EigenfunctionDistance eigenfunction_distance(const PerturbedEigenResult& result);

// ---------------------------------------------------------------------------
// Deficit report

// project_constraints -> perturbed_eigenvalue -> distances, plus the
// second-variation prediction 2 sum eta_i a_i^2 (sphere only; NaN elsewhere)
// and the measured stability constant
// c_est = deficit / (sym_diff^2 + efn_dist).
struct DeficitReport {
    SpaceForm space{Space::Sphere, 2};
    double rho = 0.0;
    BoundaryPerturbation xi_raw; // input
    BoundaryPerturbation xi;     // volume- and center-projected
    double correction_deg0 = 0.0;
    double correction_deg1 = 0.0;

    PerturbedEigenResult eigen;
    double sym_diff = 0.0;
    double efn_dist = 0.0;
    double pullback_error = 0.0;
    double alpha = 0.0;
    double h_half_norm = 0.0;    // ||xi||^2_{H^{1/2}} (projected xi)
    double sv_prediction = 0.0;  // 2 sum eta_i a_i^2, calibrated convention
    double c_est = 0.0;
};

DeficitReport fk_deficit_report(const SpaceForm& space, double rho,
                                const BoundaryPerturbation& xi_raw,
                                std::size_t n_r = 256, std::size_t n_theta = 128);

// Serialized JSON object {space, n, rho, xi_modes, lambda_omega, deficit,
// sym_diff, efn_dist, h_half_norm, sv_prediction, c_est, grid, convention}.
std::string fk_report_json(const DeficitReport& report);

} // namespace speclab
