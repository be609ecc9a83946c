#include <algorithm>
#include <cmath>
#include <functional>

#include "acf_detail.hpp"
#include "speclab/errors.hpp"
#include "speclab/quad.hpp"
#include "speclab/spaceform.hpp"

namespace speclab::acf {

namespace {

constexpr double kPi = 3.14159265358979323846;

// ||(x . nu)^+||_{L^2(S^{n-1})}^2 = |S^{n-2}| int_0^{pi/2} cos^2 sin^{n-2},
// with |S^0| = 2 covering the circle case.
double half_cosine_norm_sq(int n) {
    const double beta = std::tgamma(1.5) * std::tgamma(0.5 * (n - 1)) /
                        (2.0 * std::tgamma(0.5 * (n + 2)));
    const double area = n == 2 ? 2.0 : unit_sphere_area(n - 1);
    return area * beta;
}

double wrap_angle(double a) {
    a = std::fmod(a, 2.0 * kPi);
    if (a < 0.0) a += 2.0 * kPi;
    return a;
}

double pos(double x) { return x > 0.0 ? x : 0.0; }

// Least-squares slope of ln(sqrt(v)) against ln(s) over positive samples,
// reported as the per-dyadic decay factor 2^{-slope}.
double dyadic_rate(const std::vector<double>& s, const std::vector<double>& v) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int m = 0;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (!(v[k] > 0.0)) continue;
        const double x = std::log(s[k]);
        const double y = 0.5 * std::log(v[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    if (m < 2) return 0.0;
    const double denom = m * sxx - sx * sx;
    if (!(std::abs(denom) > 0.0)) return 0.0;
    const double slope = (m * sxy - sx * sy) / denom;
    return std::pow(2.0, -slope);
}

}  // namespace

StabilityFit stability_fit(const AdmissiblePair& pair, double rho) {
    validate_pair(pair);
    if (std::abs(pair.u1.r.back() - 1.0) > 1e-12)
        throw DomainError("stability_fit: the radial grid must end at r = 1");
    const int i0 = detail::nearest_radius_index(pair.u1, rho);
    const int last = pair.u1.n_r() - 1;
    const int nt = pair.u1.n_theta();
    if (i0 >= last) throw DomainError("stability_fit: rho must lie inside the grid");

    const detail::FieldRings r1 = detail::compute_rings(pair.u1);
    const detail::FieldRings r2 = detail::compute_rings(pair.u2);
    const PolarField* fields[2] = {&pair.u1, &pair.u2};

    const double J1 = r1.Ew[last] * r2.Ew[last];
    const double rr = pair.u1.r[i0];
    const double Jr = r1.Ew[i0] * r2.Ew[i0] / (rr * rr * rr * rr);
    if (!(J1 > 0.0) || !(Jr > 0.0))
        throw DomainError("stability_fit: a field is degenerate on the ball");

    StabilityFit fit;
    fit.log_quotient = std::log(J1 / Jr);
    fit.l2_norm_sq[0] = r1.M2[last];
    fit.l2_norm_sq[1] = r2.M2[last];
    fit.applicable = fit.log_quotient > 1e-9;
    fit.bound_base = fit.log_quotient * (fit.l2_norm_sq[0] + fit.l2_norm_sq[1]);
    fit.nu.assign(pair.n, 0.0);

    if (fit.log_quotient >= 1.0) {
        // Far-from-monotone pairs carry no usable trace geometry; the trivial
        // competitor (norm amplitudes along e_1) still satisfies the bound.
        fit.fallback = true;
        fit.beta[0] = std::sqrt(fit.l2_norm_sq[0]);
        fit.beta[1] = std::sqrt(fit.l2_norm_sq[1]);
        fit.nu[0] = 1.0;
        fit.nu_angle = pair.n == 2 ? 0.0 : 0.5 * kPi;
    } else {
        fit.fallback = false;
        const double cnorm = 1.0 / std::sqrt(half_cosine_norm_sq(pair.n));
        if (pair.n == 2) {
            const ArcDecomposition dec1 = arc_decomposition(pair.u1, 1.0);
            const ArcDecomposition dec2 = arc_decomposition(pair.u2, 1.0);
            if (dec1.empty || dec2.empty)
                throw DomainError("stability_fit: a support misses the unit circle");
            const std::vector<double> Y1 = detail::arc_eigenfunction(pair.u1, dec1);
            const std::vector<double> Y2 = detail::arc_eigenfunction(pair.u2, dec2);
            std::vector<double> v(nt);
            for (int j = 0; j < nt; ++j) v[j] = pair.u1.value(last, j) * Y1[j];
            const double bhat1 = detail::ring_node_integral(pair.u1, last, v);
            for (int j = 0; j < nt; ++j) v[j] = pair.u2.value(last, j) * Y2[j];
            const double bhat2 = detail::ring_node_integral(pair.u2, last, v);
            fit.beta[0] = bhat1 * cnorm;
            fit.beta[1] = bhat2 * cnorm;
            const double c1 = dec1.theta_start + 0.5 * dec1.theta_longest;
            const double c2 = dec2.theta_start + 0.5 * dec2.theta_longest;
            const double a =
                std::atan2(std::sin(c1) + std::sin(c2 - kPi), std::cos(c1) + std::cos(c2 - kPi));
            fit.nu_angle = wrap_angle(a);
            fit.nu[0] = std::cos(fit.nu_angle);
            fit.nu[1] = std::sin(fit.nu_angle);
        } else {
            const CapSlice cap1 = cap_slice(pair.u1, 1.0);
            const CapSlice cap2 = cap_slice(pair.u2, 1.0);
            if (cap1.empty || cap2.empty)
                throw DomainError("stability_fit: a support misses the unit sphere");
            if (cap1.north == cap2.north)
                throw UnsupportedInput("stability_fit: caps share a pole");
            const std::vector<double> Y1 = detail::cap_eigenfunction(pair.u1, cap1);
            const std::vector<double> Y2 = detail::cap_eigenfunction(pair.u2, cap2);
            std::vector<double> v(nt);
            for (int j = 0; j < nt; ++j) v[j] = pair.u1.value(last, j) * Y1[j];
            const double bhat1 = detail::ring_node_integral(pair.u1, last, v);
            for (int j = 0; j < nt; ++j) v[j] = pair.u2.value(last, j) * Y2[j];
            const double bhat2 = detail::ring_node_integral(pair.u2, last, v);
            fit.beta[0] = bhat1 * cnorm;
            fit.beta[1] = bhat2 * cnorm;
            fit.nu_angle = cap1.north ? 0.0 : kPi;
            fit.nu[pair.n - 1] = cap1.north ? 1.0 : -1.0;
        }
    }

    // L2 distance to the two-plane competitor over the annulus, with the
    // second field matched against the negative part.
    std::vector<double> ring(pair.u1.n_r(), 0.0), v(nt);
    for (int i = i0; i <= last; ++i) {
        const double r = pair.u1.r[i];
        for (int fi = 0; fi < 2; ++fi) {
            const double sgn = fi == 0 ? 1.0 : -1.0;
            const PolarField& f = *fields[fi];
            for (int j = 0; j < nt; ++j) {
                double m;
                if (fit.fallback && pair.n >= 3) {
                    // Axisymmetric grids cannot resolve (x . e1)^+ pointwise;
                    // expand the square and use the azimuthal orbit averages
                    // of (x . e1)^+ and its square.
                    const double u = f.value(i, j);
                    const double sphi = std::sin(f.theta[j]);
                    v[j] = u * u - 2.0 * fit.beta[fi] * u * r * sphi / kPi +
                           fit.beta[fi] * fit.beta[fi] * r * r * sphi * sphi * 0.25;
                    continue;
                }
                if (pair.n == 2)
                    m = fit.beta[fi] * r * pos(sgn * std::cos(f.theta[j] - fit.nu_angle));
                else
                    m = fit.beta[fi] * r * pos(sgn * fit.nu[pair.n - 1] * std::cos(f.theta[j]));
                const double d = f.value(i, j) - m;
                v[j] = d * d;
            }
            ring[i] += detail::ring_node_integral(f, i, v);
        }
    }
    fit.L2_error = detail::radial_integral(pair.u1.r, ring, i0, last);
    if (fit.applicable && fit.bound_base > 0.0) fit.ratio = fit.L2_error / fit.bound_base;
    return fit;
}

SineMisalignment sine_misalignment(double theta_hat, double lambda) {
    if (!(theta_hat >= 0.0) || theta_hat >= 2.0 * kPi)
        throw DomainError("sine_misalignment: theta_hat must lie in [0, 2pi)");
    if (!(lambda > 0.0)) throw DomainError("sine_misalignment: lambda must be positive");
    const double a = std::sqrt(lambda);
    if (std::abs(1.0 - a) > 0.5)
        throw DomainError("sine_misalignment: sqrt(lambda) must lie within 1/2 of 1");

    const auto half_sine = [](double t) {
        t = std::fmod(t, 2.0 * kPi);
        if (t < 0.0) t += 2.0 * kPi;
        return t < kPi ? std::sin(t) : 0.0;
    };
    const double arc = std::min(kPi / a, 2.0 * kPi);
    const auto eigen_sine = [a, arc](double t) { return t > 0.0 && t < arc ? std::sin(a * t) : 0.0; };

    const auto integrate_pieces = [](const std::function<double(double)>& f,
                                     std::vector<double> cuts) {
        std::sort(cuts.begin(), cuts.end());
        double s = 0.0;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
            if (cuts[i + 1] > cuts[i] + 1e-15) s += integrate(f, cuts[i], cuts[i + 1]);
        return s;
    };

    SineMisalignment out;
    out.shift_integral = integrate_pieces(
        [&](double t) {
            const double d = half_sine(t) - half_sine(t - theta_hat);
            return d * d;
        },
        {0.0, kPi, theta_hat, wrap_angle(theta_hat + kPi), 2.0 * kPi});
    out.eigen_integral = integrate_pieces(
        [&](double t) {
            const double d = half_sine(t) - eigen_sine(t);
            return d * d;
        },
        {0.0, kPi, arc, 2.0 * kPi});

    // Ratios with their analytic limits at the aligned configuration.
    out.shift_ratio = theta_hat > 0.0 ? out.shift_integral / (theta_hat * theta_hat)
                                      : 0.5 * kPi;
    const double q = 1.0 - a;
    out.eigen_ratio = std::abs(q) > 0.0 ? out.eigen_integral / (q * q)
                                        : kPi * kPi * kPi / 6.0 + 0.25 * kPi;
    return out;
}

BlowupReport blowup_scale_fit(const AdmissiblePair& pair, int k_max) {
    validate_pair(pair);
    if (k_max < 1) throw DomainError("blowup_scale_fit: k_max >= 1");
    if (std::abs(pair.u1.r.back() - 1.0) > 1e-12)
        throw DomainError("blowup_scale_fit: the radial grid must end at r = 1");
    const detail::FieldRings r1 = detail::compute_rings(pair.u1);
    const detail::FieldRings r2 = detail::compute_rings(pair.u2);
    const int nr = pair.u1.n_r();
    const int nt = pair.u1.n_theta();
    const auto& rs = pair.u1.r;

    const auto J_at = [&](int i) {
        const double r = rs[i];
        return r1.Ew[i] * r2.Ew[i] / (r * r * r * r);
    };

    BlowupReport rep;
    rep.j0_proxy = J_at(0);

    std::vector<double> prev_nu;
    double prev_beta[2] = {0.0, 0.0};
    for (int k = 1; k <= k_max; ++k) {
        const double target = std::pow(2.0, -k);
        int ik = -1;
        for (int i = nr - 1; i >= 0; --i) {
            if (rs[i] <= target * (1.0 + 1e-12)) {
                ik = i;
                break;
            }
        }
        if (ik < 23) {  // need at least 24 radial nodes inside the scale
            rep.truncated = true;
            break;
        }
        if (0.5 * rs[ik] < rs[0] * (1.0 - 1e-12)) {
            // omega needs J at half the scale; below the grid floor the level
            // is unresolved.
            rep.truncated = true;
            break;
        }
        if (!(r1.Ew[ik] > 0.0) || !(r2.Ew[ik] > 0.0)) {
            rep.truncated = true;
            break;
        }
        const double sk = rs[ik];

        // Rescale to the unit ball with the 1-homogeneous normalization; exact
        // homogeneous profiles stay fixed points of this map.
        std::vector<double> rsub(rs.begin(), rs.begin() + ik + 1);
        for (double& r : rsub) r /= sk;
        rsub.back() = 1.0;
        AdmissiblePair sub;
        sub.n = pair.n;
        const PolarField* fields[2] = {&pair.u1, &pair.u2};
        PolarField* subs[2] = {&sub.u1, &sub.u2};
        for (int fi = 0; fi < 2; ++fi) {
            subs[fi]->n = pair.n;
            subs[fi]->r = rsub;
            subs[fi]->theta = pair.u1.theta;
            subs[fi]->u.assign(fields[fi]->u.begin(),
                               fields[fi]->u.begin() + static_cast<std::size_t>(ik + 1) * nt);
            for (double& x : subs[fi]->u) x /= sk;
        }
        const StabilityFit fit = stability_fit(sub, 0.5);

        BlowupScale sc;
        sc.k = k;
        sc.scale = sk;
        sc.beta[0] = fit.beta[0];
        sc.beta[1] = fit.beta[1];
        sc.nu_angle = fit.nu_angle;
        const int ihalf = detail::nearest_radius_index(pair.u1, 0.5 * sk);
        sc.omega = J_at(ihalf) - rep.j0_proxy;
        if (!prev_nu.empty()) {
            double inc = (fit.beta[0] - prev_beta[0]) * (fit.beta[0] - prev_beta[0]) +
                         (fit.beta[1] - prev_beta[1]) * (fit.beta[1] - prev_beta[1]);
            for (int d = 0; d < pair.n; ++d)
                inc += (fit.nu[d] - prev_nu[d]) * (fit.nu[d] - prev_nu[d]);
            sc.increment_sq = inc;
        }
        prev_nu = fit.nu;
        prev_beta[0] = fit.beta[0];
        prev_beta[1] = fit.beta[1];
        rep.scales.push_back(sc);
        rep.k_max_effective = k;
    }

    std::vector<double> s_inc, v_inc, s_om, v_om;
    for (const BlowupScale& sc : rep.scales) {
        if (sc.k >= 2) {
            s_inc.push_back(sc.scale);
            v_inc.push_back(sc.increment_sq);
        }
        s_om.push_back(sc.scale);
        v_om.push_back(sc.omega);
    }
    rep.increment_rate = dyadic_rate(s_inc, v_inc);
    rep.omega_rate = dyadic_rate(s_om, v_om);
    return rep;
}

}  // namespace speclab::acf
