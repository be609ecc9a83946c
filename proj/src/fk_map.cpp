#include "speclab/fk.hpp"

#include <cmath>

#include "fk_detail.hpp"
#include "speclab/errors.hpp"

namespace speclab {

namespace {

int max_degree(const BoundaryPerturbation& xi) {
    int k = 0;
    for (const auto& t : xi.terms) k = std::max(k, t.degree);
    return k;
}

} // namespace

MappedCoefficients build_map_coefficients(const SpaceForm& space, double rho,
                                          const BoundaryPerturbation& xi,
                                          std::size_t n_r, std::size_t n_theta) {
    fk_detail::validate_xi(space, rho, xi);
    rho = space.clamp_radius(rho);
    if (n_r < 8 || n_r % 2 != 0)
        throw DomainError("build_map_coefficients: n_r must be even and >= 8");
    if (n_theta < 8 || n_theta % 2 != 0)
        throw DomainError("build_map_coefficients: n_theta must be even and >= 8");
    if (n_theta <= 4 * static_cast<std::size_t>(std::max(max_degree(xi), 1)))
        throw DomainError("build_map_coefficients: angular grid under-resolves xi");

    MappedCoefficients mc;
    mc.space = space;
    mc.rho = rho;
    mc.n_r = n_r;
    mc.n_theta = n_theta;
    mc.smallness = xi_smallness_proxy(space, rho, xi);
    if (mc.smallness > 0.1)
        throw PerturbationTooLarge(
            "build_map_coefficients: xi exceeds the smallness gate (proxy > 0.1)");

    // One harmonic extension on the doubled grid serves both the solver nodes
    // (even indices) and the flux midpoints (odd indices).
    const HarmonicExtension ext = harmonic_extension(space, rho, xi, 2 * n_r);

    const std::size_t K = n_r, N = n_theta;
    const double dt = rho / static_cast<double>(K);
    mc.t_nodes.resize(K + 1);
    for (std::size_t k = 0; k <= K; ++k) mc.t_nodes[k] = k * dt;
    mc.t_mid.resize(K);
    for (std::size_t k = 0; k < K; ++k) mc.t_mid[k] = (k + 0.5) * dt;
    mc.theta.resize(N);
    for (std::size_t j = 0; j < N; ++j) mc.theta[j] = 2.0 * M_PI * j / N;

    auto degenerate = [](const char* what) {
        throw PerturbationTooLarge(std::string("build_map_coefficients: ") + what);
    };

    mc.e_tt.resize(K * N);
    mc.e_tth.resize(K * N);
    mc.e_thth.resize(K * N);
    mc.abar_tt.resize(K * N);
    mc.abar_tth.resize(K * N);
    mc.abar_thth.resize(K * N);
    mc.h_mid.resize(K * N);
    mc.h_t_mid.resize(K * N);
    mc.h_theta_mid.resize(K * N);
    for (std::size_t k = 0; k < K; ++k) {
        const double t = mc.t_mid[k];
        const double snt = space.sn(t);
        const std::size_t ei = 2 * k + 1; // midpoint index on the doubled grid
        for (std::size_t j = 0; j < N; ++j) {
            const double theta = mc.theta[j];
            const double h = ext.value(ei, theta);
            const double ht = ext.d_t(ei, theta);
            const double hth = ext.d_theta(ei, theta);
            const double s = (1.0 + h) * t;
            const double s_t = 1.0 + h + t * ht;
            const double s_th = t * hth;
            if (!(1.0 + h > 0.0)) degenerate("1 + h vanishes");
            if (!(s_t > 0.0)) degenerate("the map folds (s_t <= 0)");
            if (space.kind == Space::Sphere && s >= M_PI)
                degenerate("the map reaches the antipode");
            const double sns = space.sn(s);
            const std::size_t q = k * N + j;
            mc.e_tt[q] = sns / s_t + s_th * s_th / (s_t * sns);
            mc.e_tth[q] = -s_th / sns;
            mc.e_thth[q] = s_t / sns;
            mc.abar_tt[q] = mc.e_tt[q] / snt;
            mc.abar_tth[q] = mc.e_tth[q];
            mc.abar_thth[q] = mc.e_thth[q] * snt;
            mc.h_mid[q] = h;
            mc.h_t_mid[q] = ht;
            mc.h_theta_mid[q] = hth;
        }
    }

    mc.mass.resize((K + 1) * N);
    mc.m_hat.resize((K + 1) * N);
    mc.s_nodes.resize((K + 1) * N);
    for (std::size_t k = 0; k <= K; ++k) {
        const double t = mc.t_nodes[k];
        const std::size_t ei = 2 * k;
        for (std::size_t j = 0; j < N; ++j) {
            const double theta = mc.theta[j];
            const double h = ext.value(ei, theta);
            const double ht = ext.d_t(ei, theta);
            const double s = (1.0 + h) * t;
            const double s_t = 1.0 + h + t * ht;
            if (!(1.0 + h > 0.0)) degenerate("1 + h vanishes");
            if (!(s_t > 0.0)) degenerate("the map folds (s_t <= 0)");
            if (space.kind == Space::Sphere && s >= M_PI)
                degenerate("the map reaches the antipode");
            const std::size_t q = k * N + j;
            mc.s_nodes[q] = s;
            if (k == 0) {
                // sn(s)/sn(t) -> s_t as t -> 0, and s_t(0) = 1 + h(0).
                mc.mass[q] = 0.0;
                mc.m_hat[q] = (1.0 + h) * (1.0 + h);
            } else {
                mc.mass[q] = space.sn(s) * s_t;
                mc.m_hat[q] = mc.mass[q] / space.sn(t);
            }
        }
    }
    return mc;
}

} // namespace speclab
