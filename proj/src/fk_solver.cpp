#include "speclab/fk.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "fk_detail.hpp"
#include "speclab/errors.hpp"
#include "speclab/fourier.hpp"

namespace speclab {

namespace {

// Signals sigma >= lambda_1 so the caller can shrink the shift and retry;
// never escapes perturbed_eigenvalue.
struct IndefiniteShift {};

// Discrete quadratic forms of the pulled-back problem on the constrained space
// V: pole row constant, Dirichlet row zero, Nyquist column removed (an even
// angular grid cannot penalize the Nyquist mode through the zeroed spectral
// derivative, and leaving it massless-but-stiffnessless would fabricate a
// spurious eigenvalue branch at the radial ground level).
class PolarOperator {
  public:
    explicit PolarOperator(const MappedCoefficients& mc)
        : mc_(mc), K_(mc.n_r), N_(mc.n_theta), dt_(mc.rho / static_cast<double>(mc.n_r)),
          dth_(2.0 * M_PI / static_cast<double>(mc.n_theta)), ft_(mc.n_theta),
          dv_((K_ + 1) * N_), tth_((K_ + 1) * N_), modes_(N_ / 2 + 1) {}

    std::size_t size() const { return (K_ + 1) * N_; }
    std::size_t rows() const { return K_ + 1; }
    double cell_weight() const { return dt_ * dth_; }

    void constrain(std::vector<double>& v) {
        double pole = 0.0;
        for (std::size_t j = 0; j < N_; ++j) pole += v[j];
        pole /= static_cast<double>(N_);
        for (std::size_t j = 0; j < N_; ++j) v[j] = pole;
        for (std::size_t j = 0; j < N_; ++j) v[K_ * N_ + j] = 0.0;
        if (N_ % 2 == 0)
            for (std::size_t k = 1; k < K_; ++k) {
                ft_.forward(&v[k * N_], modes_.data());
                modes_[N_ / 2] = 0.0;
                ft_.inverse(modes_.data(), &v[k * N_]);
            }
    }

    // out = K v (stiffness), v assumed constrained; out comes out constrained.
    void apply_stiffness(const std::vector<double>& v, std::vector<double>& out) {
        std::fill(out.begin(), out.end(), 0.0);
        std::fill(tth_.begin(), tth_.end(), 0.0);
        for (std::size_t k = 0; k <= K_; ++k)
            ft_.derivative(&v[k * N_], &dv_[k * N_]);
        const double w = cell_weight();
        for (std::size_t k = 0; k < K_; ++k) {
            const double* e_tt = &mc_.e_tt[k * N_];
            const double* e_tth = &mc_.e_tth[k * N_];
            const double* e_thth = &mc_.e_thth[k * N_];
            for (std::size_t j = 0; j < N_; ++j) {
                const double vt = (v[(k + 1) * N_ + j] - v[k * N_ + j]) / dt_;
                const double vth = 0.5 * (dv_[k * N_ + j] + dv_[(k + 1) * N_ + j]);
                const double flux_t = e_tt[j] * vt + e_tth[j] * vth;
                const double flux_th = e_tth[j] * vt + e_thth[j] * vth;
                out[(k + 1) * N_ + j] += w * flux_t / dt_;
                out[k * N_ + j] -= w * flux_t / dt_;
                tth_[k * N_ + j] += 0.5 * w * flux_th;
                tth_[(k + 1) * N_ + j] += 0.5 * w * flux_th;
            }
        }
        // adjoint of the spectral derivative is its negative
        for (std::size_t k = 0; k <= K_; ++k) {
            ft_.derivative(&tth_[k * N_], &dv_[k * N_]);
            for (std::size_t j = 0; j < N_; ++j) out[k * N_ + j] -= dv_[k * N_ + j];
        }
        constrain(out);
    }

    // out = M v (diagonal mass, trapezoid in t; pole and Dirichlet rows carry
    // no mass). The pointwise product leaves the constrained space whenever
    // the mass field depends on theta, so the output is projected back.
    void apply_mass(const std::vector<double>& v, std::vector<double>& out) {
        std::fill(out.begin(), out.end(), 0.0);
        const double w = cell_weight();
        for (std::size_t k = 1; k < K_; ++k)
            for (std::size_t j = 0; j < N_; ++j)
                out[k * N_ + j] = w * mc_.mass[k * N_ + j] * v[k * N_ + j];
        constrain(out);
    }

    const MappedCoefficients& mc() const { return mc_; }
    std::size_t n_r() const { return K_; }
    std::size_t n_theta() const { return N_; }
    double dt() const { return dt_; }

  private:
    const MappedCoefficients& mc_;
    std::size_t K_, N_;
    double dt_, dth_;
    FourierTransform ft_;
    std::vector<double> dv_, tth_;
    std::vector<std::complex<double>> modes_;
};

// Exact inverse of the unperturbed (xi = 0) shifted operator, decomposed per
// angular mode into symmetric tridiagonal solves. For xi = 0 the CG solve
// therefore converges in a single iteration; for small xi it stays a few.
class ModePreconditioner {
  public:
    ModePreconditioner(const SpaceForm& space, double rho, std::size_t K,
                       std::size_t N, double sigma)
        : K_(K), N_(N), ft_(N), modes_(N / 2 + 1),
          row_modes_(K + 1, std::vector<std::complex<double>>(N / 2 + 1)) {
        const double dt = rho / static_cast<double>(K);
        const double dth = 2.0 * M_PI / static_cast<double>(N);
        const double w = dt * dth;
        const std::size_t q_max = N % 2 == 0 ? N / 2 - 1 : (N - 1) / 2;
        diag_.resize(q_max + 1);
        lower_.resize(q_max + 1);
        for (std::size_t q = 0; q <= q_max; ++q) {
            const std::size_t lo = q == 0 ? 0 : 1; // pole slot lives in q = 0 only
            const std::size_t dim = K - lo;
            std::vector<double> diag(dim, 0.0), off(dim > 0 ? dim - 1 : 0, 0.0);
            for (std::size_t k = 0; k < K; ++k) {
                const double snm = space.sn((k + 0.5) * dt);
                const double a = snm / (dt * dt);
                const double b = static_cast<double>(q) * q / (4.0 * snm);
                if (k >= lo) diag[k - lo] += w * (a + b);
                if (k + 1 <= K - 1) diag[k + 1 - lo] += w * (a + b);
                if (k >= lo && k + 1 <= K - 1) off[k - lo] += w * (b - a);
            }
            for (std::size_t k = 1; k <= K - 1; ++k)
                diag[k - lo] -= sigma * w * space.sn(k * dt);
            // LDL^T of the symmetric tridiagonal; a nonpositive pivot means the
            // shift is not below the spectrum.
            std::vector<double> d(dim), l(dim > 0 ? dim - 1 : 0);
            for (std::size_t k = 0; k < dim; ++k) {
                double pivot = diag[k];
                if (k > 0) pivot -= l[k - 1] * l[k - 1] * d[k - 1];
                if (!(pivot > 0.0)) throw IndefiniteShift{};
                d[k] = pivot;
                if (k + 1 < dim) l[k] = off[k] / pivot;
            }
            diag_[q] = std::move(d);
            lower_[q] = std::move(l);
        }
    }

    void apply(const std::vector<double>& r, std::vector<double>& z) {
        for (std::size_t k = 1; k < K_; ++k)
            ft_.forward(&r[k * N_], row_modes_[k].data());
        const std::size_t q_max = diag_.size() - 1;
        // q = 0 carries the pole unknown in its first slot.
        {
            std::vector<std::complex<double>> rhs(K_);
            rhs[0] = r[0];
            for (std::size_t k = 1; k < K_; ++k) rhs[k] = row_modes_[k][0];
            solve_tridiag(0, rhs);
            pole_ = rhs[0].real();
            for (std::size_t k = 1; k < K_; ++k) row_modes_[k][0] = rhs[k];
        }
        for (std::size_t q = 1; q <= q_max; ++q) {
            std::vector<std::complex<double>> rhs(K_ - 1);
            for (std::size_t k = 1; k < K_; ++k) rhs[k - 1] = row_modes_[k][q];
            solve_tridiag(q, rhs);
            for (std::size_t k = 1; k < K_; ++k) row_modes_[k][q] = rhs[k - 1];
        }
        z.assign((K_ + 1) * N_, 0.0);
        for (std::size_t j = 0; j < N_; ++j) z[j] = pole_;
        for (std::size_t k = 1; k < K_; ++k) {
            if (N_ % 2 == 0) row_modes_[k][N_ / 2] = 0.0;
            ft_.inverse(row_modes_[k].data(), &z[k * N_]);
        }
    }

  private:
    void solve_tridiag(std::size_t q, std::vector<std::complex<double>>& rhs) const {
        const auto& d = diag_[q];
        const auto& l = lower_[q];
        const std::size_t n = d.size();
        for (std::size_t k = 1; k < n; ++k) rhs[k] -= l[k - 1] * rhs[k - 1];
        for (std::size_t k = 0; k < n; ++k) rhs[k] /= d[k];
        for (std::size_t k = n - 1; k-- > 0;) rhs[k] -= l[k] * rhs[k + 1];
    }

    std::size_t K_, N_;
    FourierTransform ft_;
    std::vector<std::complex<double>> modes_;
    std::vector<std::vector<std::complex<double>>> row_modes_;
    std::vector<std::vector<double>> diag_, lower_;
    double pole_ = 0.0;
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void axpy(double a, const std::vector<double>& x, std::vector<double>& y) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

// Preconditioned CG for (K - sigma M) y = b on the constrained space.
void shifted_solve(PolarOperator& op, ModePreconditioner& prec, double sigma,
                   const std::vector<double>& b, std::vector<double>& y) {
    const std::size_t n = op.size();
    std::vector<double> r(n), z(n), p(n), kp(n), mp(n);
    // zero start: the previous iterate is a poor seed once b is renormalized
    std::fill(y.begin(), y.end(), 0.0);
    r = b;
    const double bnorm = std::sqrt(dot(b, b));
    if (bnorm == 0.0) return;
    prec.apply(r, z);
    p = z;
    double rz = dot(r, z);
    for (int it = 0; it < 400; ++it) {
        op.apply_stiffness(p, kp);
        op.apply_mass(p, mp);
        axpy(-sigma, mp, kp); // kp = (K - sigma M) p
        const double pap = dot(p, kp);
        if (!(pap > 0.0)) throw IndefiniteShift{};
        const double alpha = rz / pap;
        axpy(alpha, p, y);
        axpy(-alpha, kp, r);
        if (std::sqrt(dot(r, r)) <= 1e-13 * bnorm) return;
        prec.apply(r, z);
        const double rz_new = dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    throw NumericError("perturbed_eigenvalue: CG stalled (relative residual " +
                       std::to_string(std::sqrt(dot(r, r)) / bnorm) + ")");
}

struct EigenOut {
    double lambda = 0.0;
    std::vector<double> u;
    int iterations = 0;
    double residual = 0.0;
};

// Shift-invert power iteration on the pencil (K, M) with Rayleigh-quotient
// stopping at 1e-10.
EigenOut smallest_eigenpair(PolarOperator& op, const SpaceForm& space, double rho,
                            double sigma, const std::vector<double>& start) {
    const std::size_t n = op.size();
    for (int attempt = 0; attempt < 7; ++attempt) {
        try {
            ModePreconditioner prec(space, rho, op.n_r(), op.n_theta(), sigma);
            EigenOut out;
            std::vector<double> x = start, y(n), kx(n), mx(n);
            op.constrain(x);
            op.apply_mass(x, mx);
            double m2 = dot(mx, x);
            if (!(m2 > 0.0))
                throw NumericError("perturbed_eigenvalue: start vector has no mass");
            for (std::size_t i = 0; i < n; ++i) x[i] /= std::sqrt(m2);

            double lambda_prev = 0.0;
            bool have_prev = false;
            for (int it = 1; it <= 100; ++it) {
                op.apply_mass(x, mx);
                shifted_solve(op, prec, sigma, mx, y);
                op.apply_mass(y, mx);
                m2 = dot(mx, y);
                if (!(m2 > 0.0))
                    throw NumericError("perturbed_eigenvalue: iterate lost its mass");
                const double inv = 1.0 / std::sqrt(m2);
                for (std::size_t i = 0; i < n; ++i) x[i] = y[i] * inv;
                op.apply_stiffness(x, kx);
                const double lambda = dot(kx, x);
                out.iterations = it;
                const double change = std::abs(lambda - lambda_prev);
                if (have_prev && change <= 1e-10 * std::max(1.0, std::abs(lambda))) {
                    out.lambda = lambda;
                    break;
                }
                lambda_prev = lambda;
                have_prev = true;
                out.lambda = lambda;
                if (it == 100)
                    throw NumericError(
                        "perturbed_eigenvalue: power iteration did not converge "
                        "(last Rayleigh change " +
                        std::to_string(change) + ")");
            }
            op.apply_stiffness(x, kx);
            op.apply_mass(x, mx);
            double num = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double r = kx[i] - out.lambda * mx[i];
                num += r * r;
            }
            out.residual = std::sqrt(num) /
                           (std::abs(out.lambda) * std::sqrt(dot(mx, mx)) + 1e-300);
            out.u = std::move(x);
            return out;
        } catch (const IndefiniteShift&) {
            sigma *= 0.5; // deterministic fallback; reached only for eigenvalues
                          // far below the unperturbed cap level
        }
    }
    throw NumericError("perturbed_eigenvalue: no positive definite shift found");
}

EigenOut solve_on_grid(const SpaceForm& space, double rho,
                       const BoundaryPerturbation& xi, std::size_t K, std::size_t N,
                       double sigma, const fk_detail::RadialInterp& prof,
                       MappedCoefficients* keep_mc) {
    const MappedCoefficients mc = build_map_coefficients(space, rho, xi, K, N);
    PolarOperator op(mc);
    std::vector<double> start((K + 1) * N);
    for (std::size_t k = 0; k <= K; ++k)
        for (std::size_t j = 0; j < N; ++j)
            start[k * N + j] = prof(mc.s_nodes[k * N + j]);
    EigenOut out = smallest_eigenpair(op, space, rho, sigma, start);
    if (keep_mc) *keep_mc = mc;
    return out;
}

} // namespace

PerturbedEigenResult perturbed_eigenvalue(const SpaceForm& space, double rho,
                                          const BoundaryPerturbation& xi,
                                          std::size_t n_r, std::size_t n_theta) {
    fk_detail::validate_xi(space, rho, xi);
    rho = space.clamp_radius(rho);
    if (n_r < 16 || n_r % 4 != 0)
        throw DomainError("perturbed_eigenvalue: n_r must be a multiple of 4, >= 16");
    if (n_theta < 16 || n_theta % 4 != 0)
        throw DomainError("perturbed_eigenvalue: n_theta must be a multiple of 4, >= 16");

    const EigenSolution cap = cap_first_eigenvalue(space, rho);
    const double sigma = 0.9 * cap.lambda;
    const fk_detail::RadialInterp prof = fk_detail::cap_interp(space, rho, cap.lambda, 2048);
    const BoundaryPerturbation none{};

    PerturbedEigenResult res;
    res.space = space;
    res.rho = rho;
    res.xi = xi;
    res.xi.rho = rho;
    res.n_r = n_r;
    res.n_theta = n_theta;
    res.lambda_rho = cap.lambda;

    MappedCoefficients mc;
    const EigenOut fine = solve_on_grid(space, rho, xi, n_r, n_theta, sigma, prof, &mc);
    const EigenOut fine0 = solve_on_grid(space, rho, none, n_r, n_theta, sigma, prof, nullptr);
    const EigenOut coarse =
        solve_on_grid(space, rho, xi, n_r / 2, n_theta / 2, sigma, prof, nullptr);

    res.lambda_omega = fine.lambda;
    res.lambda_rho_grid = fine0.lambda;
    res.deficit = fine.lambda - fine0.lambda;
    res.error_estimate = std::abs(fine.lambda - coarse.lambda) / 3.0;
    res.solver_tol = res.error_estimate + 1e-10 * std::max(1.0, std::abs(fine.lambda));
    res.iterations = fine.iterations;
    res.residual = fine.residual;

    res.u_hat = fine.u;
    res.t_nodes = mc.t_nodes;
    res.theta = mc.theta;
    res.s_nodes = mc.s_nodes;

    // The ground state of the pulled-back pencil is signed; fix the sign by
    // the weighted mean and verify nonnegativity (collocation roundoff only).
    double mean = 0.0;
    for (std::size_t i = 0; i < res.u_hat.size(); ++i)
        mean += mc.mass[i] * res.u_hat[i];
    if (mean < 0.0)
        for (double& v : res.u_hat) v = -v;
    double max_u = 0.0, min_u = 0.0;
    for (double v : res.u_hat) {
        max_u = std::max(max_u, v);
        min_u = std::min(min_u, v);
    }
    if (min_u < -1e-6 * max_u)
        throw InvariantViolation("perturbed_eigenvalue: ground state changes sign");

    return res;
}

} // namespace speclab
