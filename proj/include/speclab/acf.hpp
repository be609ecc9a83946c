#pragma once

#include <functional>
#include <string>
#include <vector>

namespace speclab::acf {

// A nonnegative scalar field sampled in polar coordinates on the unit ball.
// n = 2: theta is a uniform full-circle grid on [0, 2pi), periodic.
// n >= 3: axisymmetric; theta holds the polar angle on [0, pi], inclusive.
// Values are row-major with radius as the slow index.
struct PolarField {
    int n = 2;
    std::vector<double> r;      // ascending radii in (0, 1]
    std::vector<double> theta;  // angular nodes, see above
    std::vector<double> u;      // size r.size() * theta.size()

    int n_r() const { return static_cast<int>(r.size()); }
    int n_theta() const { return static_cast<int>(theta.size()); }
    double value(int i, int j) const { return u[static_cast<std::size_t>(i) * theta.size() + j]; }
    double& value(int i, int j) { return u[static_cast<std::size_t>(i) * theta.size() + j]; }
    double max_value() const;
    // Positivity threshold: sampled fields carry rounding noise, so the
    // support is detected as {u > eps_pos} rather than {u > 0}.
    double eps_pos() const { return 1e-12 * max_value(); }
};

struct AdmissiblePair {
    PolarField u1, u2;
    int n = 2;
};

// Throws DomainError on grid mismatch, negative/non-finite samples,
// support overlap, or isolated positive samples.
void validate_pair(const AdmissiblePair& pair);

// Logarithmically spaced radii ending exactly at 1 (default span 2^-10..1).
std::vector<double> log_radial_grid(int n_r, double r_min = 1.0 / 1024.0);
std::vector<double> full_circle_grid(int n_theta);        // [0, 2pi), periodic
std::vector<double> polar_angle_grid(int n_phi);          // [0, pi], inclusive

PolarField sample_field(int n, std::vector<double> r, std::vector<double> theta,
                        const std::function<double(double, double)>& f);

// ---- built-in corpus -------------------------------------------------------

struct CorpusEntry {
    std::string name;
    // True when both fields are subharmonic on their supports, the premise of
    // the monotonicity statement; drift pairs are deliberately outside it.
    bool subharmonic = true;
    AdmissiblePair pair;
};

std::vector<std::string> corpus_names();
CorpusEntry corpus_pair(const std::string& name, int n_theta = 512, int n_r = 256);

// ---- CSV ingestion ---------------------------------------------------------

// Header `r,theta,u1,u2` (n=2) or `r,phi,u1,u2` (axisymmetric; ambient
// dimension taken from n_axisym). Row-major over the grid. Malformed rows
// raise IngestionError carrying the 1-based line number.
AdmissiblePair load_pair_csv(const std::string& path, int n_axisym = 3);
void save_pair_csv(const AdmissiblePair& pair, const std::string& path);

// ---- support decompositions ------------------------------------------------

struct Arc {
    double start = 0.0;   // angle in [0, 2pi)
    double length = 0.0;  // in (0, 2pi]
};

struct ArcDecomposition {
    double r = 0.0;
    bool empty = true;          // no positive samples on the circle
    std::vector<Arc> arcs;      // maximal positivity arcs
    double theta_longest = 0.0; // length of the longest arc
    double theta_start = 0.0;   // its start angle
    double lambda = 0.0;        // pi^2 / (r^2 theta_longest^2)
};

// n = 2 only. Endpoints are located by linear extension of the first/last
// positive samples, clamped to the adjacent zero node.
ArcDecomposition arc_decomposition(const PolarField& field, double r);

struct CapSlice {
    double r = 0.0;
    bool empty = true;
    bool north = true;        // support touches phi = 0 (else phi = pi)
    double cap_radius = 0.0;  // polar radius of the positivity cap
    double lambda = 0.0;      // first Dirichlet eigenvalue of the cap in the slice sphere of radius r
};

// Axisymmetric slices (n >= 3). Throws UnsupportedInput when the positivity
// set is not a single polar cap.
CapSlice cap_slice(const PolarField& field, double r);

// ---- the functional and its deficits ----------------------------------------

// Product of normalized Dirichlet energies at the grid radius nearest r;
// weight |x|^{2-n} for n >= 3.
double acf_J(const AdmissiblePair& pair, double r);

struct DeficitTerms {
    double r = 0.0;
    bool skipped = false;  // a slice had empty positivity set
    double dA = 0.0, dB = 0.0, dC = 0.0;
    double dA_field[2] = {0.0, 0.0};
    double dB_field[2] = {0.0, 0.0};
    double alpha[2] = {0.0, 0.0};  // characteristic constants of the slices
    // Lower-bound certificates (right-hand sides of the three estimates).
    double certA = 0.0;      // eigengap * projection residual
    double certB = 0.0;      // equals dB by construction
    double certC = 0.0;      // n=2 closed form; n>=3 square function with c = 1
    double certC_weak = 0.0; // n=2 secondary bound through sqrt(lambda)
    double certC_ratio = 0.0;  // dC / square function (measured constant, n>=3)
};

DeficitTerms deficit_terms_2d(const AdmissiblePair& pair, double r);
// n in {3,4}; positivity sets on slices must be polar caps.
DeficitTerms deficit_terms_nd_axisym(const AdmissiblePair& pair, double r);

struct AcfRow {
    double r = 0.0;
    double J = 0.0;
    double logJp_fd = 0.0;        // central difference of log J on the radial grid
    double logJp_boundary = 0.0;  // boundary-integral form, cross-validation route
    DeficitTerms d;
};

struct AcfTable {
    int n = 2;
    std::vector<AcfRow> rows;  // one per grid radius
};

AcfTable acf_deficit_table(const AdmissiblePair& pair);

// ---- homogeneity and energy control ----------------------------------------

struct HomogeneityReport {
    double value[2] = {0.0, 0.0};  // int_{B_1 \ B_rho} (r u(1,.) - u(r,.))^2 per field
    double log_quotient = 0.0;     // log(J(1)/J(rho))
    double w12_norm_sq[2] = {0.0, 0.0};
    double ratio[2] = {0.0, 0.0};  // value / (log_quotient * w12)
    bool applicable = false;       // log quotient positive beyond noise
};

double one_homogeneity_error(const PolarField& field, double rho);
HomogeneityReport one_homogeneity_report(const AdmissiblePair& pair, double rho);

struct GradientEnergyRatio {
    double ratio[2] = {0.0, 0.0};  // int |grad u|^2 / ((J(1)/J(1/2)) int u^2)
    double j_quotient = 0.0;
};

GradientEnergyRatio gradient_energy_ratio(const AdmissiblePair& pair);

// ---- characteristic constants ----------------------------------------------

// Positive root of alpha^2 + (n-2) alpha - r^2 lambda = 0.
double characteristic_constant(int n, double lambda, double r);

// Characteristic constant of the polar cap holding volume fraction t of the
// unit sphere S^{n-1}; n >= 3. t is clamped away from {0, 1}.
double alpha_hat(int n, double t);
// delta_hat(h) = alpha_hat(1/2 + h) + alpha_hat(1/2 - h) - 2.
double delta_hat(int n, double h);

struct AlphaHatProfile {
    int n = 3;
    std::vector<double> t;      // clamped abscissae
    std::vector<double> alpha;  // alpha_hat(t)
    bool clamped = false;
    double c_est = 0.0;  // second difference of alpha_hat at t = 1/2
};

AlphaHatProfile alpha_hat_profile(int n, const std::vector<double>& t_grid);

// ---- stability fit -----------------------------------------------------------

struct StabilityFit {
    double beta[2] = {0.0, 0.0};
    std::vector<double> nu;   // unit vector in R^n
    double nu_angle = 0.0;    // n=2: direction angle; n>=3: polar angle (0 or pi)
    double L2_error = 0.0;    // int_{B_1 \ B_rho} of both squared differences
    double log_quotient = 0.0;
    double l2_norm_sq[2] = {0.0, 0.0};  // ||u_i||_{L^2(B_1)}^2
    double bound_base = 0.0;  // log_quotient * (sum of the L2 norms squared)
    double ratio = 0.0;       // L2_error / bound_base when applicable
    bool applicable = false;
    bool fallback = false;    // large-quotient branch taken
};

StabilityFit stability_fit(const AdmissiblePair& pair, double rho);

// ---- sine misalignment -------------------------------------------------------

struct SineMisalignment {
    double shift_integral = 0.0;  // int (sin(theta+that)^+ - sin(theta)^+)^2
    double eigen_integral = 0.0;  // int (first-arc sine at sqrt(lambda) - sin^+)^2
    double shift_ratio = 0.0;     // shift_integral / that^2
    double eigen_ratio = 0.0;     // eigen_integral / (1 - sqrt(lambda))^2
};

// Pre: theta_hat in [0, 2pi), |1 - sqrt(lambda)| <= 1/2.
SineMisalignment sine_misalignment(double theta_hat, double lambda);

// ---- dyadic blowup scales ----------------------------------------------------

struct BlowupScale {
    int k = 0;
    double scale = 0.0;  // grid radius used for 2^-k
    double beta[2] = {0.0, 0.0};
    double nu_angle = 0.0;
    double increment_sq = 0.0;  // |beta^k - beta^{k-1}|^2 + |nu_k - nu_{k-1}|^2
    double omega = 0.0;         // J(scale/2) - J(0+ proxy)
};

struct BlowupReport {
    std::vector<BlowupScale> scales;
    int k_max_effective = 0;
    bool truncated = false;   // requested k_max beyond the grid resolution
    double j0_proxy = 0.0;    // J at the smallest resolved radius
    double increment_rate = 0.0;  // fitted per-dyadic decay factor of sqrt(increment_sq)
    double omega_rate = 0.0;      // fitted per-dyadic decay factor of sqrt(omega)
};

BlowupReport blowup_scale_fit(const AdmissiblePair& pair, int k_max);

}  // namespace speclab::acf
