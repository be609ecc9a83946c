#include "speclab/fk.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "fk_detail.hpp"
#include "json.hpp"
#include "speclab/errors.hpp"

namespace speclab {

namespace {

// Linear interpolation of one u_hat column over its physical radii s_col
// (strictly increasing: the map gate guarantees s_t > 0). Zero beyond the
// boundary node.
double column_value(const std::vector<double>& s_col, const std::vector<double>& u_col,
                    double s) {
    if (s <= s_col.front()) return u_col.front();
    if (s >= s_col.back()) return 0.0;
    const auto it = std::upper_bound(s_col.begin(), s_col.end(), s);
    const std::size_t i = static_cast<std::size_t>(it - s_col.begin()) - 1;
    const double f = (s - s_col[i]) / (s_col[i + 1] - s_col[i]);
    return u_col[i] * (1.0 - f) + u_col[i + 1] * f;
}

} // namespace

EigenfunctionDistance eigenfunction_distance(const PerturbedEigenResult& result) {
    const SpaceForm& space = result.space;
    const std::size_t K = result.n_r;
    const std::size_t N = result.n_theta;
    if (result.u_hat.size() != (K + 1) * N)
        throw DomainError("eigenfunction_distance: result grid is inconsistent");
    const double rho = result.rho;
    const double dt = rho / static_cast<double>(K);
    const double dth = 2.0 * M_PI / static_cast<double>(N);

    const fk_detail::RadialInterp u_b =
        fk_detail::cap_interp(space, rho, result.lambda_rho, 4096);
    const std::vector<double> u_b_nodes =
        radial_eigenfunction(space, rho, result.lambda_rho, result.t_nodes);

    EigenfunctionDistance out;
    std::vector<double> s_col(K + 1), u_col(K + 1);
    std::vector<double> breaks;
    breaks.reserve(K + 3);
    for (std::size_t j = 0; j < N; ++j) {
        for (std::size_t k = 0; k <= K; ++k) {
            s_col[k] = result.s_nodes[k * N + j];
            u_col[k] = result.u_hat[k * N + j];
        }

        // |u_Omega - u_B|^2 over the union of the supports: integrate between
        // consecutive breakpoints (map nodes plus the cap boundary, where the
        // integrand has kinks), trapezoid on subdivided intervals.
        breaks.assign(s_col.begin(), s_col.end());
        if (rho < breaks.back())
            breaks.insert(std::upper_bound(breaks.begin(), breaks.end(), rho), rho);
        else if (rho > breaks.back())
            breaks.push_back(rho);
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
            const double a = breaks[i], b = breaks[i + 1];
            if (!(b > a)) continue;
            constexpr int sub = 8;
            const double hs = (b - a) / sub;
            double cell = 0.0;
            for (int p = 0; p <= sub; ++p) {
                const double s = a + p * hs;
                const double d = column_value(s_col, u_col, s) - u_b(s);
                const double f = d * d * space.sn(s);
                cell += (p == 0 || p == sub) ? 0.5 * f : f;
            }
            acc += cell * hs;
        }
        out.distance += acc * dth;

        // Reference-grid quantities: u_hat read as a function on B_rho.
        for (std::size_t k = 0; k <= K; ++k) {
            const double w = (k == 0 || k == K ? 0.5 : 1.0) * dt * dth;
            const double snt = space.sn(result.t_nodes[k]);
            const double u_omega_t = column_value(s_col, u_col, result.t_nodes[k]);
            const double d = u_omega_t - u_col[k];
            out.pullback_error += w * snt * d * d;
            out.alpha += w * snt * u_col[k] * u_b_nodes[k];
        }
    }
    return out;
}

DeficitReport fk_deficit_report(const SpaceForm& space, double rho,
                                const BoundaryPerturbation& xi_raw,
                                std::size_t n_r, std::size_t n_theta) {
    fk_detail::check_planar(space);
    const double rho_c = space.clamp_radius(rho);

    DeficitReport rep;
    rep.space = space;
    rep.rho = rho_c;
    rep.xi_raw = xi_raw;
    rep.xi_raw.rho = rho_c;

    const ProjectedPerturbation proj = project_constraints(space, rho_c, xi_raw);
    rep.xi = proj.xi;
    rep.correction_deg0 = proj.correction_deg0;
    rep.correction_deg1 = proj.correction_deg1;

    rep.eigen = perturbed_eigenvalue(space, rho_c, rep.xi, n_r, n_theta);
    // Among domains of the cap's volume the cap minimizes, so the projected
    // deficit may only dip below zero by solver error.
    if (rep.eigen.deficit < -rep.eigen.solver_tol)
        throw InvariantViolation(
            "fk_deficit_report: volume-projected deficit fell below -solver_tol");

    rep.sym_diff = symmetric_difference(space, rho_c, rep.xi);
    const EigenfunctionDistance efd = eigenfunction_distance(rep.eigen);
    rep.efn_dist = efd.distance;
    rep.pullback_error = efd.pullback_error;
    rep.alpha = efd.alpha;
    rep.h_half_norm = harmonic_extension(space, rho_c, rep.xi).seminorm;

    if (space.kind == Space::Sphere) {
        // The dtn quadratic form rejects mean modes; the projected remnant of
        // degree 0 is second order and carries no eta anyway.
        BoundaryPerturbation sv_xi;
        sv_xi.rho = rho_c;
        for (const auto& term : rep.xi.terms)
            if (term.degree >= 1) sv_xi.terms.push_back(term);
        rep.sv_prediction = second_variation(2, rho_c, sv_xi).value;
    } else {
        rep.sv_prediction = std::numeric_limits<double>::quiet_NaN();
    }

    const double denom = rep.sym_diff * rep.sym_diff + rep.efn_dist;
    rep.c_est = denom > 0.0 ? rep.eigen.deficit / denom
                            : std::numeric_limits<double>::quiet_NaN();
    return rep;
}

std::string fk_report_json(const DeficitReport& report) {
    nlohmann::ordered_json j;
    j["space"] = space_name(report.space.kind);
    j["n"] = 2;
    j["rho"] = report.rho;
    j["xi_modes"] = nlohmann::ordered_json::array();
    for (const auto& term : report.xi.terms)
        j["xi_modes"].push_back({{"degree", term.degree},
                                 {"index", term.index},
                                 {"coeff", term.coeff}});
    j["lambda_omega"] = report.eigen.lambda_omega;
    j["deficit"] = report.eigen.deficit;
    j["sym_diff"] = report.sym_diff;
    j["efn_dist"] = report.efn_dist;
    j["h_half_norm"] = report.h_half_norm;
    if (std::isnan(report.sv_prediction))
        j["sv_prediction"] = nullptr;
    else
        j["sv_prediction"] = report.sv_prediction;
    if (std::isnan(report.c_est))
        j["c_est"] = nullptr;
    else
        j["c_est"] = report.c_est;
    j["grid"] = {{"n_r", report.eigen.n_r}, {"n_theta", report.eigen.n_theta}};
    j["convention"] = "coefficients against boundary-orthonormal harmonics; "
                      "calibrated eta; prediction = 2 sum eta a^2";
    return j.dump(2);
}

} // namespace speclab
