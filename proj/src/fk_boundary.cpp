#include "speclab/fk.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "fk_detail.hpp"
#include "speclab/errors.hpp"

namespace speclab {

namespace fk_detail {

void validate_xi(const SpaceForm& space, double rho, const BoundaryPerturbation& xi) {
    check_planar(space);
    if (xi.rho > 0.0 && std::abs(xi.rho - rho) > 1e-12 * std::max(1.0, rho))
        throw DomainError("perturbed-domain: perturbation radius disagrees with rho");
    std::set<std::pair<int, int>> seen;
    for (const auto& t : xi.terms) {
        if (t.degree < 0) throw DomainError("perturbed-domain: negative harmonic degree");
        const int degeneracy = t.degree == 0 ? 1 : 2;
        if (t.index < 0 || t.index >= degeneracy)
            throw DomainError("perturbed-domain: harmonic index outside the eigenspace");
        if (!seen.emplace(t.degree, t.index).second)
            throw DomainError("perturbed-domain: duplicate perturbation mode");
        if (!std::isfinite(t.coeff))
            throw DomainError("perturbed-domain: non-finite coefficient");
    }
}

std::vector<double> fd_derivative(const std::vector<double>& f, double dt) {
    const std::size_t n = f.size();
    if (n < 5) throw DomainError("fd_derivative: need at least five nodes");
    std::vector<double> d(n);
    const double s = 1.0 / (12.0 * dt);
    d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) * s;
    d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) * s;
    for (std::size_t i = 2; i + 2 < n; ++i)
        d[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) * s;
    d[n - 2] = (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] -
                f[n - 5]) *
               s;
    d[n - 1] = (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] +
                3.0 * f[n - 5]) *
               s;
    return d;
}

double boundary_radius(const SpaceForm& space, double rho,
                       const BoundaryPerturbation& xi, double theta) {
    const double r = (1.0 + xi_value(space, rho, xi, theta)) * rho;
    if (!(r > 0.0))
        throw PerturbationTooLarge("perturbed-domain: boundary radius vanishes");
    if (space.kind == Space::Sphere && r >= M_PI)
        throw PerturbationTooLarge(
            "perturbed-domain: boundary radius reaches the antipode");
    return r;
}

RadialInterp cap_interp(const SpaceForm& space, double rho, double lambda,
                        std::size_t n_fine) {
    RadialInterp prof;
    prof.rho = rho;
    prof.dt = rho / static_cast<double>(n_fine);
    std::vector<double> nodes(n_fine + 1);
    for (std::size_t i = 0; i <= n_fine; ++i) nodes[i] = i * prof.dt;
    nodes.back() = rho;
    prof.values = radial_eigenfunction(space, rho, lambda, nodes);
    return prof;
}

} // namespace fk_detail

using fk_detail::check_planar;
using fk_detail::validate_xi;

double xi_value(const SpaceForm& space, double rho, const BoundaryPerturbation& xi,
                double theta, int deriv) {
    validate_xi(space, rho, xi);
    if (deriv < 0 || deriv > 2)
        throw DomainError("xi_value: derivative order must be 0, 1, or 2");
    const double s0 = fk_detail::scale_mean(space, rho);
    const double s1 = fk_detail::scale_wave(space, rho);
    double out = 0.0;
    for (const auto& term : xi.terms) {
        if (term.degree == 0) {
            if (deriv == 0) out += term.coeff * s0;
            continue;
        }
        const double k = term.degree;
        const double arg = k * theta;
        // d/dtheta cycles cos -> -k sin -> -k^2 cos (and sin likewise).
        double angle = 0.0;
        switch (deriv) {
        case 0: angle = term.index == 0 ? std::cos(arg) : std::sin(arg); break;
        case 1: angle = k * (term.index == 0 ? -std::sin(arg) : std::cos(arg)); break;
        case 2: angle = -k * k * (term.index == 0 ? std::cos(arg) : std::sin(arg)); break;
        }
        out += term.coeff * s1 * angle;
    }
    return out;
}

double xi_smallness_proxy(const SpaceForm& space, double rho,
                          const BoundaryPerturbation& xi) {
    validate_xi(space, rho, xi);
    constexpr std::size_t n = 4096;
    const double dth = 2.0 * M_PI / n;
    std::vector<double> v(n);
    for (std::size_t j = 0; j < n; ++j)
        v[j] = xi_value(space, rho, xi, j * dth);
    double proxy = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double vp = v[(j + 1) % n];
        const double vm = v[(j + n - 1) % n];
        const double d1 = (vp - vm) / (2.0 * dth);
        const double d2 = (vp - 2.0 * v[j] + vm) / (dth * dth);
        proxy = std::max({proxy, std::abs(v[j]), std::abs(d1), std::abs(d2)});
    }
    return proxy;
}

// ---------------------------------------------------------------------------
// Harmonic extension

double HarmonicExtension::value(std::size_t i, double theta) const {
    double out = 0.0;
    const double s0 = fk_detail::scale_mean(space, rho);
    const double s1 = fk_detail::scale_wave(space, rho);
    for (const auto& term : xi.terms) {
        const double g = profiles.at(term.degree)[i];
        if (term.degree == 0) {
            out += term.coeff * s0 * g;
            continue;
        }
        const double arg = term.degree * theta;
        out += term.coeff * s1 * g * (term.index == 0 ? std::cos(arg) : std::sin(arg));
    }
    return out;
}

double HarmonicExtension::d_t(std::size_t i, double theta) const {
    double out = 0.0;
    const double s0 = fk_detail::scale_mean(space, rho);
    const double s1 = fk_detail::scale_wave(space, rho);
    for (const auto& term : xi.terms) {
        const double gp = slopes.at(term.degree)[i];
        if (term.degree == 0) {
            out += term.coeff * s0 * gp;
            continue;
        }
        const double arg = term.degree * theta;
        out += term.coeff * s1 * gp * (term.index == 0 ? std::cos(arg) : std::sin(arg));
    }
    return out;
}

double HarmonicExtension::d_theta(std::size_t i, double theta) const {
    double out = 0.0;
    const double s1 = fk_detail::scale_wave(space, rho);
    for (const auto& term : xi.terms) {
        if (term.degree == 0) continue;
        const double k = term.degree;
        const double arg = k * theta;
        const double g = profiles.at(term.degree)[i];
        out += term.coeff * s1 * g * k *
               (term.index == 0 ? -std::sin(arg) : std::cos(arg));
    }
    return out;
}

HarmonicExtension harmonic_extension(const SpaceForm& space, double rho,
                                     const BoundaryPerturbation& xi,
                                     std::size_t n_grid) {
    validate_xi(space, rho, xi);
    rho = space.clamp_radius(rho);
    if (n_grid < 8) throw DomainError("harmonic_extension: grid too coarse");

    HarmonicExtension ext;
    ext.space = space;
    ext.rho = rho;
    ext.xi = xi;
    ext.xi.rho = rho;
    const RadialGrid grid = RadialGrid::uniform(rho, n_grid);
    ext.nodes = grid.nodes;
    const double dt = rho / static_cast<double>(n_grid);

    std::map<int, double> energy;
    for (const auto& term : xi.terms) {
        if (ext.profiles.count(term.degree)) continue;
        if (term.degree == 0) {
            // The extension of a constant is the constant itself: zero energy.
            ext.profiles[0] = std::vector<double>(ext.nodes.size(), 1.0);
            ext.slopes[0] = std::vector<double>(ext.nodes.size(), 0.0);
            energy[0] = 0.0;
            continue;
        }
        const double mu = static_cast<double>(term.degree) * term.degree;
        auto sol = angular_radial_solution(space, rho, mu, 0.0, 1.0, n_grid);
        energy[term.degree] = sol.energy;
        ext.slopes[term.degree] = fk_detail::fd_derivative(sol.profile, dt);
        ext.profiles[term.degree] = std::move(sol.profile);
    }
    // In the boundary-orthonormal basis the seminorm is the plain coefficient-
    // weighted sum of the per-mode Dirichlet energies.
    for (const auto& term : xi.terms)
        ext.seminorm += term.coeff * term.coeff * energy.at(term.degree);
    return ext;
}

// ---------------------------------------------------------------------------
// Coarea quantities

double symmetric_difference(const SpaceForm& space, double rho,
                            const BoundaryPerturbation& xi) {
    validate_xi(space, rho, xi);
    rho = space.clamp_radius(rho);
    constexpr std::size_t n = 4096;
    const double dth = 2.0 * M_PI / n;
    const double f_rho = fk_detail::sn_primitive(space, rho);
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double r = fk_detail::boundary_radius(space, rho, xi, j * dth);
        acc += std::abs(fk_detail::sn_primitive(space, r) - f_rho);
    }
    return acc * dth;
}

SetCenter set_center(const SpaceForm& space, double rho,
                     const BoundaryPerturbation& xi) {
    validate_xi(space, rho, xi);
    if (space.kind != Space::Sphere)
        throw UnsupportedInput("set_center: the normalized ambient mean is specific "
                               "to the sphere");
    rho = space.clamp_radius(rho);
    constexpr std::size_t n = 4096;
    const double dth = 2.0 * M_PI / n;
    SetCenter out;
    double volume = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double theta = j * dth;
        const double r = fk_detail::boundary_radius(space, rho, xi, theta);
        // Ambient moments by coarea: int_0^r sin^2 for the equatorial pair,
        // int_0^r sin cos = sin^2(r)/2 for the polar axis.
        const double g = fk_detail::sn2_primitive(space, r);
        const double sr = std::sin(r);
        out.y[0] += std::cos(theta) * g * dth;
        out.y[1] += std::sin(theta) * g * dth;
        out.y[2] += 0.5 * sr * sr * dth;
        volume += fk_detail::sn_primitive(space, r) * dth;
    }
    out.y_norm = std::sqrt(out.y[0] * out.y[0] + out.y[1] * out.y[1] +
                           out.y[2] * out.y[2]);
    if (out.y_norm <= 1e-11 * std::max(volume, 1e-30))
        throw DomainError("set_center: the ambient mean vanishes, center undefined");
    for (int i = 0; i < 3; ++i) out.center[i] = out.y[i] / out.y_norm;
    return out;
}

// ---------------------------------------------------------------------------
// Constraint projection

namespace {

// Residuals of the volume and first-moment constraints for xi + b-corrections,
// and their 3x3 Jacobian in (b0, b1cos, b1sin), by periodic trapezoid rule.
struct ConstraintQuad {
    const SpaceForm& space;
    double rho;
    std::size_t n = 2048;

    void eval(const BoundaryPerturbation& xi, double r_resid[3], double jac[3][3]) const {
        const double dth = 2.0 * M_PI / n;
        const double s0 = fk_detail::scale_mean(space, rho);
        const double s1 = fk_detail::scale_wave(space, rho);
        const double f_rho = fk_detail::sn_primitive(space, rho);
        for (int i = 0; i < 3; ++i) {
            r_resid[i] = 0.0;
            for (int k = 0; k < 3; ++k) jac[i][k] = 0.0;
        }
        for (std::size_t j = 0; j < n; ++j) {
            const double theta = j * dth;
            const double r = fk_detail::boundary_radius(space, rho, xi, theta);
            const double sn_r = space.sn(r);
            const double basis[3] = {s0, s1 * std::cos(theta), s1 * std::sin(theta)};
            const double rows[3] = {1.0, std::cos(theta), std::sin(theta)};
            const double integrand[3] = {fk_detail::sn_primitive(space, r) - f_rho,
                                         fk_detail::sn2_primitive(space, r),
                                         fk_detail::sn2_primitive(space, r)};
            const double drow[3] = {sn_r, sn_r * sn_r, sn_r * sn_r};
            for (int i = 0; i < 3; ++i) {
                r_resid[i] += rows[i] * integrand[i] * dth;
                for (int k = 0; k < 3; ++k)
                    jac[i][k] += rows[i] * drow[i] * rho * basis[k] * dth;
            }
        }
    }
};

void solve3(const double a[3][3], const double b[3], double x[3]) {
    double m[3][4];
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) m[i][j] = a[i][j];
        m[i][3] = b[i];
    }
    for (int c = 0; c < 3; ++c) {
        int p = c;
        for (int r = c + 1; r < 3; ++r)
            if (std::abs(m[r][c]) > std::abs(m[p][c])) p = r;
        if (std::abs(m[p][c]) < 1e-300)
            throw PerturbationTooLarge("project_constraints: singular Jacobian");
        if (p != c)
            for (int j = c; j < 4; ++j) std::swap(m[p][j], m[c][j]);
        for (int r = 0; r < 3; ++r) {
            if (r == c) continue;
            const double f = m[r][c] / m[c][c];
            for (int j = c; j < 4; ++j) m[r][j] -= f * m[c][j];
        }
    }
    for (int i = 0; i < 3; ++i) x[i] = m[i][3] / m[i][i];
}

// Adds b to the (degree, index) coefficient, appending the term if absent.
void bump_coefficient(BoundaryPerturbation& xi, int degree, int index, double b) {
    for (auto& t : xi.terms)
        if (t.degree == degree && t.index == index) {
            t.coeff += b;
            return;
        }
    xi.terms.push_back({degree, index, b});
}

} // namespace

ProjectedPerturbation project_constraints(const SpaceForm& space, double rho,
                                          const BoundaryPerturbation& xi_raw) {
    validate_xi(space, rho, xi_raw);
    const double rho_c = space.clamp_radius(rho);

    ProjectedPerturbation out;
    out.xi = xi_raw;
    out.xi.rho = rho_c;
    const ConstraintQuad quad{space, rho_c};
    double b[3] = {0.0, 0.0, 0.0};

    // The first Newton step from b = 0 is exactly the linearized correction
    // (volume and center to first order); later steps remove the higher-order
    // remainder, so the final corrections stay quadratic in xi_raw.
    double resid[3], jac[3][3];
    const double vol_scale = std::max(2.0 * M_PI * fk_detail::sn_primitive(space, rho_c), 1e-12);
    for (int it = 1; it <= 30; ++it) {
        BoundaryPerturbation trial = xi_raw;
        trial.rho = rho_c;
        bump_coefficient(trial, 0, 0, b[0]);
        bump_coefficient(trial, 1, 0, b[1]);
        bump_coefficient(trial, 1, 1, b[2]);
        quad.eval(trial, resid, jac);
        const double rn = std::max({std::abs(resid[0]), std::abs(resid[1]),
                                    std::abs(resid[2])});
        if (rn <= 1e-13 * vol_scale) {
            out.xi = trial;
            out.correction_deg0 = std::abs(b[0]);
            out.correction_deg1 = std::hypot(b[1], b[2]);
            out.iterations = it - 1;
            return out;
        }
        double step[3];
        solve3(jac, resid, step);
        for (int i = 0; i < 3; ++i) b[i] -= step[i];
        if (std::abs(b[0]) + std::hypot(b[1], b[2]) > 0.5)
            throw PerturbationTooLarge(
                "project_constraints: corrections left the smallness regime");
    }
    throw PerturbationTooLarge("project_constraints: Newton did not converge");
}

// ---------------------------------------------------------------------------
// Translated cap

namespace {

// Boundary of the cap of radius rho centered at geodesic distance delta along
// the theta = 0 meridian, seen as a radial graph about the original pole.
// Closed forms from the geodesic law of cosines in each curvature sign.
double translated_boundary(const SpaceForm& space, double rho, double delta,
                           double theta) {
    const double c = std::cos(theta);
    switch (space.kind) {
    case Space::Euclidean: {
        const double s2 = rho * rho - delta * delta * (1.0 - c * c);
        return delta * c + std::sqrt(std::max(s2, 0.0));
    }
    case Space::Sphere: {
        // cos(rho) = cos(delta) cos(s) + sin(delta) sin(s) cos(theta):
        // amplitude-phase form a cos s + b sin s with R = hypot(a, b).
        const double a = std::cos(delta), b = std::sin(delta) * c;
        const double R = std::hypot(a, b);
        const double ratio = std::clamp(std::cos(rho) / R, -1.0, 1.0);
        return std::atan2(b, a) + std::acos(ratio);
    }
    case Space::Hyperbolic: {
        // cosh(rho) = cosh(delta) cosh(s) - sinh(delta) sinh(s) cos(theta).
        const double a = std::cosh(delta), b = -std::sinh(delta) * c;
        const double R = std::sqrt(a * a - b * b);
        return std::acosh(std::max(std::cosh(rho) / R, 1.0)) - std::atanh(b / a);
    }
    }
    return rho;
}

} // namespace

BoundaryPerturbation translated_cap_perturbation(const SpaceForm& space, double rho,
                                                 double delta, int k_max,
                                                 std::size_t n_quad) {
    check_planar(space);
    rho = space.clamp_radius(rho);
    if (delta < 0.0) throw DomainError("translated_cap_perturbation: delta < 0");
    if (delta >= rho)
        throw DomainError("translated_cap_perturbation: the pole must stay interior");
    if (space.kind == Space::Sphere && rho + delta >= M_PI - 1e-8)
        throw DomainError("translated_cap_perturbation: cap reaches the antipode");
    if (k_max < 0) throw DomainError("translated_cap_perturbation: k_max < 0");
    if (n_quad < 64) throw DomainError("translated_cap_perturbation: quadrature too coarse");

    const double dth = 2.0 * M_PI / n_quad;
    std::vector<double> xi_fun(n_quad);
    for (std::size_t j = 0; j < n_quad; ++j)
        xi_fun[j] = translated_boundary(space, rho, delta, j * dth) / rho - 1.0;

    // Project on the boundary-orthonormal basis: a = int xi Y sn(rho) dtheta.
    const double sn_rho = space.sn(rho);
    BoundaryPerturbation xi;
    xi.rho = rho;
    double a0 = 0.0;
    for (std::size_t j = 0; j < n_quad; ++j) a0 += xi_fun[j];
    a0 *= dth * sn_rho * fk_detail::scale_mean(space, rho);
    xi.terms.push_back({0, 0, a0});
    for (int k = 1; k <= k_max; ++k) {
        double ac = 0.0, as = 0.0;
        for (std::size_t j = 0; j < n_quad; ++j) {
            const double arg = k * j * dth;
            ac += xi_fun[j] * std::cos(arg);
            as += xi_fun[j] * std::sin(arg);
        }
        const double w = dth * sn_rho * fk_detail::scale_wave(space, rho);
        xi.terms.push_back({k, 0, ac * w});
        if (std::abs(as * w) > 1e-14 * std::max(1.0, std::abs(ac * w)))
            xi.terms.push_back({k, 1, as * w});
    }
    return xi;
}

} // namespace speclab
