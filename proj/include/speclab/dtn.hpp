#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "speclab/radial_spectral.hpp"
#include "speclab/spaceform.hpp"

namespace speclab {

// Normalization convention for the boundary-operator eigenvalues eta.
//
// The two candidate formulas (ghat is the mode profile normalized so that
// ghat(rho) = |u'_rho|, H the boundary mean curvature):
//
//   AsWritten:   eta = ghat'(rho) + H |u'_rho|^2 / 2
//   Calibrated:  eta = (rho^2/2) (|u'_rho| ghat'(rho) + H |u'_rho|^2)
//
// Calibrated is the one under which (a) the mode-sum and direct-quadrature
// forms of the second variation coincide and (b) degree-1 (translation)
// perturbations are exactly neutral; it is the default everywhere and every
// report records which convention produced its numbers.
enum class EtaConvention { Calibrated, AsWritten };

std::string convention_name(EtaConvention conv);
EtaConvention parse_convention(const std::string& name);

struct ModeIndex {
    int degree = 0;     // spherical-harmonic degree k on S^{n-1}
    double mu = 0.0;    // Laplace eigenvalue k (k + n - 2)
    int degeneracy = 0; // multiplicity of the degree-k eigenspace

    static ModeIndex make(int n, int k);
};

struct DtNMode {
    ModeIndex index;
    std::vector<double> g_profile; // on DtNSpectrum::grid, g(rho) = |u'_rho|
    double g_prime_rho = 0.0;
    double eta = 0.0;
};

struct DtNSpectrum {
    int n = 0;   // cap lives in S^n
    double rho = 0.0;
    double lambda_rho = 0.0;
    double u_slope = 0.0;        // |u'_rho| of the cap ground state
    double mean_curvature = 0.0; // H of the boundary sphere
    EtaConvention convention = EtaConvention::Calibrated;
    RadialGrid grid;
    std::vector<DtNMode> modes; // degrees 1..k_max in order
};

struct PerturbationTerm {
    int degree = 0; // harmonic degree, >= 1 for admissible perturbations
    int index = 0;  // intra-degree index in [0, degeneracy)
    double coeff = 0.0;
};

struct BoundaryPerturbation {
    double rho = 0.0;
    std::vector<PerturbationTerm> terms;

    double l2_norm() const; // sqrt(sum a_i^2), harmonics orthonormal on S^{n-1}
};

// eta for the degree-k mode of the shifted boundary operator on the cap of
// radius rho in S^n. k = 0 is excluded (the volume constraint leaves no
// solvable mode there). Values are cached per (n, rho, k, convention); set
// SPECLAB_CACHE_DIR to persist the cache as CSV across runs.
double dtn_eigenvalue(int n, double rho, int k,
                      EtaConvention conv = EtaConvention::Calibrated);

DtNSpectrum dtn_spectrum(int n, double rho, int k_max = 12,
                         EtaConvention conv = EtaConvention::Calibrated,
                         std::size_t n_grid = 512);

struct GapScanRow {
    double rho = 0.0;
    std::vector<double> eta;       // degrees 1..k_max
    double h_min_interior = 0.0;   // min over interior grid nodes of g_1 - g_2
    double h_at_zero = 0.0;        // h(0), zero by the indicial behavior
    double h_at_rho = 0.0;         // h(rho), zero by the shared normalization
    double h_slope_rho = 0.0;      // (g_1 - g_2)'(rho)
};

struct GapScanReport {
    int n = 0;
    int k_max = 0;
    EtaConvention convention = EtaConvention::Calibrated;
    std::vector<GapScanRow> rows;
    double min_eta_deg2 = 0.0; // min over the rho grid of eta(degree 2)
};

GapScanReport spectral_gap_scan(int n, const std::vector<double>& rho_grid,
                                int k_max = 12,
                                EtaConvention conv = EtaConvention::Calibrated);

struct SecondVariation {
    double value = 0.0;              // 2 sum_i eta_i a_i^2
    double mode_sum = 0.0;           // sum_i eta_i a_i^2
    double direct_quadrature = 0.0;  // Dirichlet-form route, convention-free
    EtaConvention convention = EtaConvention::Calibrated;
};

// Quadratic form of the eigenvalue deficit at the cap. Under Calibrated the
// mode-sum and quadrature routes must agree to 1e-8 relative (enforced);
// under AsWritten both numbers are reported and the discrepancy is the
// caller's evidence for the calibration choice.
SecondVariation second_variation(int n, double rho, const BoundaryPerturbation& xi,
                                 EtaConvention conv = EtaConvention::Calibrated);

struct CapField {
    int n = 0;
    double rho = 0.0;
    double lambda_rho = 0.0;
    double u_slope = 0.0;
    RadialGrid grid;
    std::vector<PerturbationTerm> terms;          // aligned with profiles
    std::vector<std::vector<double>> profiles;    // radial factor per term
    double w_l2_norm = 0.0;          // ||w_xi||_{L^2(B_rho)}
    double xi_l2_norm = 0.0;         // ||xi||_{L^2}, unit-sphere normalized
    double c_measured = 0.0;         // w_l2_norm / xi_l2_norm, 0 for xi = 0
    double max_mode_residual = 0.0;  // worst interior residual of the mode ODE
};

// Mode-sum solution of the shifted eigenvalue problem with boundary data
// |u'_rho| xi. The residual of each radial factor is measured on the interior
// of the grid with fourth-order stencils and reported, not hidden.
CapField solve_w_xi(int n, double rho, const BoundaryPerturbation& xi,
                    std::size_t n_grid = 512);

} // namespace speclab
