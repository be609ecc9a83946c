#include "acf_detail.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "speclab/errors.hpp"
#include "speclab/numfmt.hpp"
#include "speclab/radial_spectral.hpp"
#include "speclab/spaceform.hpp"

namespace speclab::acf {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_dimension(int n) {
    if (n < 2 || n > 4) throw DomainError("ambient dimension must be 2, 3, or 4");
}

// Uniform angular spacing; theta grids are validated once per entry call.
double angular_step(const PolarField& f) {
    if (f.n == 2) return 2.0 * kPi / f.n_theta();
    return kPi / (f.n_theta() - 1);
}

void validate_field(const PolarField& f, const char* tag) {
    check_dimension(f.n);
    const std::string who(tag);
    if (f.n_r() < 4) throw DomainError(who + ": need at least 4 radial nodes");
    if (f.n_theta() < 8) throw DomainError(who + ": need at least 8 angular nodes");
    if (f.u.size() != static_cast<std::size_t>(f.n_r()) * f.n_theta())
        throw DomainError(who + ": value array does not match the grid");
    double prev = 0.0;
    for (double r : f.r) {
        if (!(r > prev) || !(r <= 1.0 + 1e-12))
            throw DomainError(who + ": radii must ascend within (0, 1]");
        prev = r;
    }
    const double h = angular_step(f);
    for (int j = 0; j < f.n_theta(); ++j) {
        if (std::abs(f.theta[j] - j * h) > 1e-9)
            throw DomainError(who + ": angular grid must be uniform from 0");
    }
    for (double v : f.u) {
        if (!std::isfinite(v)) throw DomainError(who + ": non-finite sample");
        if (v < 0.0) throw DomainError(who + ": negative sample");
    }
}

bool positive_at(const PolarField& f, double eps, int i, int j) {
    return f.value(i, j) > eps;
}

// Three-point second-order derivative at x1 from samples at x0 < x1 < x2.
double deriv3_mid(double x0, double x1, double x2, double f0, double f1, double f2) {
    const double a = x1 - x0, b = x2 - x1;
    return (f2 * a * a - f0 * b * b + f1 * (b * b - a * a)) / (a * b * (a + b));
}

// One-sided second-order derivative at x0 from x0 < x1 < x2.
double deriv3_left(double x0, double x1, double x2, double f0, double f1, double f2) {
    const double a = x1 - x0, b = x2 - x0;
    return (-f0 * (a + b) / (a * b)) + f1 * b / (a * (b - a)) - f2 * a / (b * (b - a));
}

// Angular width of the positive part of a boundary cell, estimated by linear
// extension from the last positive node (value u_end, inner neighbor u_in).
// Clamped to (0, h]; a zero that falls exactly on a node yields h, so aligned
// supports are left untouched.
double positive_width(double u_end, double u_in, double h) {
    const double slope = (u_in - u_end) / h;
    if (!(slope > 0.0)) return h;
    return std::min(h, u_end / slope);
}

}  // namespace

double PolarField::max_value() const {
    double m = 0.0;
    for (double v : u) m = std::max(m, v);
    return m;
}

void validate_pair(const AdmissiblePair& pair) {
    check_dimension(pair.n);
    if (pair.u1.n != pair.n || pair.u2.n != pair.n)
        throw DomainError("pair: field dimensions disagree with the pair");
    validate_field(pair.u1, "u1");
    validate_field(pair.u2, "u2");
    if (pair.u1.r != pair.u2.r || pair.u1.theta != pair.u2.theta)
        throw DomainError("pair: fields must share one grid");
    const double e1 = pair.u1.eps_pos(), e2 = pair.u2.eps_pos();
    const int nr = pair.u1.n_r(), nt = pair.u1.n_theta();
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nt; ++j)
            if (positive_at(pair.u1, e1, i, j) && positive_at(pair.u2, e2, i, j))
                throw DomainError("pair: supports overlap at r=" + fmt_g17(pair.u1.r[i]) +
                                  ", angle=" + fmt_g17(pair.u1.theta[j]));
    // Isolated positive samples contradict the continuity invariant.
    for (const PolarField* f : {&pair.u1, &pair.u2}) {
        const double eps = f->eps_pos();
        if (f->max_value() == 0.0) continue;
        for (int i = 0; i < nr; ++i) {
            for (int j = 0; j < nt; ++j) {
                if (!positive_at(*f, eps, i, j)) continue;
                bool neighbor = false;
                if (i > 0 && positive_at(*f, eps, i - 1, j)) neighbor = true;
                if (i + 1 < nr && positive_at(*f, eps, i + 1, j)) neighbor = true;
                if (f->n == 2) {
                    if (positive_at(*f, eps, i, (j + 1) % nt)) neighbor = true;
                    if (positive_at(*f, eps, i, (j + nt - 1) % nt)) neighbor = true;
                } else {
                    if (j + 1 < nt && positive_at(*f, eps, i, j + 1)) neighbor = true;
                    if (j > 0 && positive_at(*f, eps, i, j - 1)) neighbor = true;
                }
                if (!neighbor)
                    throw DomainError("field: isolated positive sample at r=" +
                                      fmt_g17(f->r[i]) + ", angle=" + fmt_g17(f->theta[j]));
            }
        }
    }
}

std::vector<double> log_radial_grid(int n_r, double r_min) {
    if (n_r < 4) throw DomainError("log_radial_grid: need at least 4 nodes");
    if (!(r_min > 0.0 && r_min < 1.0)) throw DomainError("log_radial_grid: r_min in (0,1)");
    std::vector<double> r(n_r);
    const double l0 = std::log(r_min);
    for (int i = 0; i < n_r; ++i) r[i] = std::exp(l0 * (1.0 - double(i) / (n_r - 1)));
    r.back() = 1.0;
    return r;
}

std::vector<double> full_circle_grid(int n_theta) {
    if (n_theta < 8) throw DomainError("full_circle_grid: need at least 8 nodes");
    std::vector<double> t(n_theta);
    for (int j = 0; j < n_theta; ++j) t[j] = 2.0 * kPi * j / n_theta;
    return t;
}

std::vector<double> polar_angle_grid(int n_phi) {
    if (n_phi < 8) throw DomainError("polar_angle_grid: need at least 8 nodes");
    std::vector<double> t(n_phi);
    for (int j = 0; j < n_phi; ++j) t[j] = kPi * j / (n_phi - 1);
    t.back() = kPi;
    return t;
}

PolarField sample_field(int n, std::vector<double> r, std::vector<double> theta,
                        const std::function<double(double, double)>& f) {
    PolarField out;
    out.n = n;
    out.r = std::move(r);
    out.theta = std::move(theta);
    out.u.resize(out.r.size() * out.theta.size());
    for (int i = 0; i < out.n_r(); ++i)
        for (int j = 0; j < out.n_theta(); ++j)
            out.value(i, j) = f(out.r[i], out.theta[j]);
    return out;
}

namespace detail {

std::vector<double> radial_derivative(const PolarField& f) {
    const int nr = f.n_r(), nt = f.n_theta();
    const double eps = f.eps_pos();
    std::vector<double> d(static_cast<std::size_t>(nr) * nt, 0.0);
    for (int j = 0; j < nt; ++j) {
        for (int i = 0; i < nr; ++i) {
            if (!positive_at(f, eps, i, j)) continue;  // vanishes identically off the support
            const bool below = i > 0 && positive_at(f, eps, i - 1, j);
            const bool above = i + 1 < nr && positive_at(f, eps, i + 1, j);
            double v;
            if (below && above) {
                v = deriv3_mid(f.r[i - 1], f.r[i], f.r[i + 1], f.value(i - 1, j),
                               f.value(i, j), f.value(i + 1, j));
            } else if (above) {
                // Free boundary (or grid end) just below: take the one-sided
                // stencil into the support.
                if (i + 2 < nr && positive_at(f, eps, i + 2, j))
                    v = deriv3_left(f.r[i], f.r[i + 1], f.r[i + 2], f.value(i, j),
                                    f.value(i + 1, j), f.value(i + 2, j));
                else
                    v = (f.value(i + 1, j) - f.value(i, j)) / (f.r[i + 1] - f.r[i]);
            } else if (below) {
                if (i >= 2 && positive_at(f, eps, i - 2, j))
                    v = deriv3_left(f.r[i], f.r[i - 1], f.r[i - 2], f.value(i, j),
                                    f.value(i - 1, j), f.value(i - 2, j));
                else
                    v = (f.value(i, j) - f.value(i - 1, j)) / (f.r[i] - f.r[i - 1]);
            } else {
                v = 0.0;  // isolated in r; validate_pair rejects these on pairs
            }
            d[static_cast<std::size_t>(i) * nt + j] = v;
        }
    }
    return d;
}

double cell_weight(const PolarField& f, double r, int j) {
    const double h = angular_step(f);
    if (f.n == 2) return h * r;
    const double mid = f.theta[j] + 0.5 * h;
    return h * std::pow(r, f.n - 1) * unit_sphere_area(f.n - 1) *
           std::pow(std::sin(mid), f.n - 2);
}

double ring_integral(const PolarField& f, int i, const std::vector<double>& node_values) {
    const int nt = f.n_theta();
    const int cells = f.n == 2 ? nt : nt - 1;
    double s = 0.0;
    for (int j = 0; j < cells; ++j) {
        const int jn = f.n == 2 ? (j + 1) % nt : j + 1;
        s += cell_weight(f, f.r[i], j) * 0.5 * (node_values[j] + node_values[jn]);
    }
    return s;
}

double ring_node_integral(const PolarField& f, int i, const std::vector<double>& node_values) {
    const int nt = f.n_theta();
    const double h = angular_step(f);
    const double r = f.r[i];
    double s = 0.0;
    if (f.n == 2) {
        for (int j = 0; j < nt; ++j) s += node_values[j];
        return s * h * r;
    }
    for (int j = 0; j < nt; ++j) {
        const double w = (j == 0 || j == nt - 1) ? 0.5 : 1.0;
        s += w * node_values[j] * std::pow(std::sin(f.theta[j]), f.n - 2);
    }
    return s * h * unit_sphere_area(f.n - 1) * std::pow(r, f.n - 1);
}

double radial_integral(const std::vector<double>& r, const std::vector<double>& ring,
                       int i0, int i1) {
    // Map to uniform log-radius samples g = ring * r (dr = r dlnr) and run
    // composite Simpson, with one trapezoid cell when the count forces it.
    const int m = i1 - i0;
    if (m <= 0) return 0.0;
    std::vector<double> x(m + 1), g(m + 1);
    for (int i = 0; i <= m; ++i) {
        x[i] = std::log(r[i0 + i]);
        g[i] = ring[i0 + i] * r[i0 + i];
    }
    double s = 0.0;
    int i = 0;
    for (; i + 2 <= m; i += 2) {
        const double h1 = x[i + 1] - x[i], h2 = x[i + 2] - x[i + 1];
        // Nonuniform Simpson cell (exact for quadratics on any spacing).
        const double c0 = (h1 + h2) * (2.0 * h1 - h2) / (6.0 * h1);
        const double c1 = (h1 + h2) * (h1 + h2) * (h1 + h2) / (6.0 * h1 * h2);
        const double c2 = (h1 + h2) * (2.0 * h2 - h1) / (6.0 * h2);
        s += c0 * g[i] + c1 * g[i + 1] + c2 * g[i + 2];
    }
    if (i + 1 <= m) s += 0.5 * (x[i + 1] - x[i]) * (g[i] + g[i + 1]);
    return s;
}

int nearest_radius_index(const PolarField& f, double r) {
    if (!(r > 0.0) || r > 1.0 + 1e-9) throw DomainError("radius outside (0, 1]");
    if (r < f.r.front() * (1.0 - 1e-9) || r > f.r.back() * (1.0 + 1e-9))
        throw DomainError("radius outside the grid range");
    const auto it = std::lower_bound(f.r.begin(), f.r.end(), r);
    if (it == f.r.begin()) return 0;
    if (it == f.r.end()) return f.n_r() - 1;
    const int hi = static_cast<int>(it - f.r.begin());
    return (r - f.r[hi - 1] <= f.r[hi] - r) ? hi - 1 : hi;
}

FieldRings compute_rings(const PolarField& f) {
    const int nr = f.n_r(), nt = f.n_theta();
    FieldRings out;
    out.eps = f.eps_pos();
    out.dr = radial_derivative(f);
    out.ring_grad_w.assign(nr, 0.0);
    out.ring_tau_w.assign(nr, 0.0);
    out.ring_rad_w.assign(nr, 0.0);
    out.ring_grad.assign(nr, 0.0);
    out.ring_u2.assign(nr, 0.0);
    const double h = angular_step(f);
    const int cells = f.n == 2 ? nt : nt - 1;
    for (int i = 0; i < nr; ++i) {
        const double r = f.r[i];
        const double wgt = std::pow(r, 2 - f.n);  // = 1 for n = 2
        double tau = 0.0, rad = 0.0, u2 = 0.0;
        for (int j = 0; j < cells; ++j) {
            const int jn = f.n == 2 ? (j + 1) % nt : j + 1;
            const double w = cell_weight(f, r, j);
            // Midpoint tangential derivative stays sharp across support kinks.
            const double dth = (f.value(i, jn) - f.value(i, j)) / h;
            const double dtau = dth / r;
            const double drm = 0.5 * (out.dr[static_cast<std::size_t>(i) * nt + j] +
                                      out.dr[static_cast<std::size_t>(i) * nt + jn]);
            const double um = 0.5 * (f.value(i, j) + f.value(i, jn));
            // A free boundary inside the cell concentrates the true tangential
            // energy on the positive width d: the slope there is u_end/d, so
            // the energy is u_end^2/d per unit radius while the centered
            // difference charges u_end^2/h. Rescaling by h/d keeps the ring
            // second order for supports that do not align with the grid.
            double factor = 1.0;
            const bool pj = f.value(i, j) > out.eps;
            const bool pn = f.value(i, jn) > out.eps;
            if (pj != pn) {
                const int end = pj ? j : jn;
                int in = pj ? j - 1 : jn + 1;
                if (f.n == 2) in = (in + nt) % nt;
                if (in >= 0 && in < nt) {
                    const double d =
                        positive_width(f.value(i, end), f.value(i, in), h);
                    factor = h / d;
                }
            }
            tau += w * dtau * dtau * factor;
            rad += w * drm * drm;
            u2 += w * um * um;
        }
        out.ring_tau_w[i] = wgt * tau;
        out.ring_rad_w[i] = wgt * rad;
        out.ring_grad_w[i] = wgt * (tau + rad);
        out.ring_grad[i] = tau + rad;
        out.ring_u2[i] = u2;
    }
    // Cumulative volume integrals: trapezoid between nodes plus an inner-disk
    // closure assuming a power-law ring near 0 (exact for homogeneous fields).
    auto cumulative = [&](const std::vector<double>& ring) {
        std::vector<double> E(nr, 0.0);
        double beta = 1.0;
        if (ring[0] > 0.0 && ring[1] > 0.0) {
            const double p = std::log(ring[1] / ring[0]) / std::log(f.r[1] / f.r[0]);
            beta = 0.5 * (p + 1.0);
            if (!(beta > 0.2 && beta < 10.0)) beta = 1.0;
        }
        E[0] = ring[0] * f.r[0] / (2.0 * beta);
        for (int i = 1; i < nr; ++i)
            E[i] = E[i - 1] + 0.5 * (f.r[i] - f.r[i - 1]) * (ring[i] + ring[i - 1]);
        return E;
    };
    out.Ew = cumulative(out.ring_grad_w);
    out.Eunw = cumulative(out.ring_grad);
    out.M2 = cumulative(out.ring_u2);
    return out;
}

}  // namespace detail

// ---- corpus -----------------------------------------------------------------

namespace {

AdmissiblePair pair_from(int n, int n_theta, int n_r,
                         const std::function<double(double, double)>& f1,
                         const std::function<double(double, double)>& f2) {
    auto r = log_radial_grid(n_r);
    auto th = n == 2 ? full_circle_grid(n_theta) : polar_angle_grid(n_theta);
    AdmissiblePair pair;
    pair.n = n;
    pair.u1 = sample_field(n, r, th, f1);
    pair.u2 = sample_field(n, std::move(r), std::move(th), f2);
    validate_pair(pair);
    return pair;
}

double pos(double x) { return x > 0.0 ? x : 0.0; }

// Complementary rotating half-plane pair; positive part of a sine whose phase
// drifts with log r.
AdmissiblePair drift_pair(double eps_rate, int n_theta, int n_r) {
    auto phase = [eps_rate](double r, double theta) { return theta - eps_rate * std::log(r); };
    return pair_from(2, n_theta, n_r,
                     [&](double r, double t) { return r * pos(std::sin(phase(r, t))); },
                     [&](double r, double t) { return r * pos(-std::sin(phase(r, t))); });
}

// Cap cone pair on S^2 slices: u_i = r^{alpha_i} psi_i(phi) with psi the first
// cap eigenfunction; cap radii rho and pi - rho around opposite poles.
AdmissiblePair cap_cone_pair(double rho_north, int n_theta, int n_r) {
    const SpaceForm slice(Space::Sphere, 2);
    const double rho_south = kPi - rho_north;
    const auto e1 = cap_first_eigenvalue(slice, rho_north);
    const auto e2 = cap_first_eigenvalue(slice, rho_south);
    const double a1 = characteristic_constant(3, e1.lambda, 1.0);
    const double a2 = characteristic_constant(3, e2.lambda, 1.0);
    auto th = polar_angle_grid(n_theta);
    std::vector<double> nodes1, nodes2;
    for (double t : th) {
        if (t <= rho_north) nodes1.push_back(t);
        if (kPi - t <= rho_south) nodes2.push_back(kPi - t);
    }
    std::sort(nodes2.begin(), nodes2.end());
    if (nodes1.back() < rho_north) nodes1.push_back(rho_north);
    if (nodes2.back() < rho_south) nodes2.push_back(rho_south);
    const auto p1 = radial_eigenfunction(slice, rho_north, e1.lambda, nodes1);
    const auto p2 = radial_eigenfunction(slice, rho_south, e2.lambda, nodes2);
    auto sample = [](const std::vector<double>& nodes, const std::vector<double>& prof,
                     double phi) {
        if (phi >= nodes.back()) return 0.0;
        const auto it = std::upper_bound(nodes.begin(), nodes.end(), phi);
        const int k = std::max<int>(1, static_cast<int>(it - nodes.begin()));
        const double t = (phi - nodes[k - 1]) / (nodes[k] - nodes[k - 1]);
        return prof[k - 1] * (1.0 - t) + prof[k] * t;
    };
    return pair_from(3, n_theta, n_r,
                     [&](double r, double phi) {
                         return phi < rho_north ? std::pow(r, a1) * sample(nodes1, p1, phi) : 0.0;
                     },
                     [&](double r, double phi) {
                         const double q = kPi - phi;
                         return q < rho_south ? std::pow(r, a2) * sample(nodes2, p2, q) : 0.0;
                     });
}

}  // namespace

std::vector<std::string> corpus_names() {
    return {"half-plane",      "half-plane-rot-0.3", "half-plane-rot-1.1",
            "half-plane-scaled", "wedge-unequal",    "homog-perturbed",
            "drift-0.05",      "drift-0.02",         "half-space-3d",
            "cap-pair-3d"};
}

CorpusEntry corpus_pair(const std::string& name, int n_theta, int n_r) {
    CorpusEntry e;
    e.name = name;
    if (name == "half-plane") {
        e.pair = pair_from(2, n_theta, n_r,
                           [](double r, double t) { return r * pos(std::sin(t)); },
                           [](double r, double t) { return r * pos(-std::sin(t)); });
    } else if (name == "half-plane-rot-0.3" || name == "half-plane-rot-1.1") {
        const double a = name.back() == '3' ? 0.3 : 1.1;
        e.pair = pair_from(2, n_theta, n_r,
                           [a](double r, double t) { return r * pos(std::sin(t - a)); },
                           [a](double r, double t) { return r * pos(-std::sin(t - a)); });
    } else if (name == "half-plane-scaled") {
        e.pair = pair_from(2, n_theta, n_r,
                           [](double r, double t) { return 2.0 * r * pos(std::sin(t)); },
                           [](double r, double t) { return 0.5 * r * pos(-std::sin(t)); });
    } else if (name == "wedge-unequal") {
        // Openings pi/a1 and 2pi - pi/a1 with harmonic homogeneous fields.
        const double a1 = 0.8;
        const double w1 = kPi / a1;
        const double a2 = kPi / (2.0 * kPi - w1);
        e.pair = pair_from(2, n_theta, n_r,
                           [=](double r, double t) {
                               return t < w1 ? std::pow(r, a1) * pos(std::sin(a1 * t)) : 0.0;
                           },
                           [=](double r, double t) {
                               return t > w1 ? std::pow(r, a2) * pos(std::sin(a2 * (t - w1)))
                                             : 0.0;
                           });
    } else if (name == "homog-perturbed") {
        // Radial modulation 1 + c sqrt(r): subharmonic for c > 0, omega ~ r^{1/2}.
        const double c = 0.5;
        e.pair = pair_from(2, n_theta, n_r,
                           [c](double r, double t) {
                               return r * (1.0 + c * std::sqrt(r)) * pos(std::sin(t));
                           },
                           [c](double r, double t) {
                               return r * (1.0 + c * std::sqrt(r)) * pos(-std::sin(t));
                           });
    } else if (name == "drift-0.05") {
        e.subharmonic = false;
        e.pair = drift_pair(0.05, n_theta, n_r);
    } else if (name == "drift-0.02") {
        e.subharmonic = false;
        e.pair = drift_pair(0.02, n_theta, n_r);
    } else if (name == "half-space-3d") {
        e.pair = pair_from(3, n_theta, n_r,
                           [](double r, double p) { return r * pos(std::cos(p)); },
                           [](double r, double p) { return r * pos(-std::cos(p)); });
    } else if (name == "cap-pair-3d") {
        e.pair = cap_cone_pair(kPi / 2.0 - 0.2, n_theta, n_r);
    } else {
        throw DomainError("unknown corpus pair: " + name);
    }
    return e;
}

// ---- CSV --------------------------------------------------------------------

void save_pair_csv(const AdmissiblePair& pair, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot open for writing: " + path);
    out << (pair.n == 2 ? "r,theta,u1,u2\n" : "r,phi,u1,u2\n");
    for (int i = 0; i < pair.u1.n_r(); ++i)
        for (int j = 0; j < pair.u1.n_theta(); ++j)
            out << fmt_g17(pair.u1.r[i]) << ',' << fmt_g17(pair.u1.theta[j]) << ','
                << fmt_g17(pair.u1.value(i, j)) << ',' << fmt_g17(pair.u2.value(i, j))
                << '\n';
    if (!out) throw DomainError("write failed: " + path);
}

AdmissiblePair load_pair_csv(const std::string& path, int n_axisym) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open: " + path);
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) throw IngestionError("empty file", 1);
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    int n;
    if (line == "r,theta,u1,u2") {
        n = 2;
    } else if (line == "r,phi,u1,u2") {
        check_dimension(n_axisym);
        if (n_axisym < 3) throw DomainError("axisymmetric ingestion needs n >= 3");
        n = n_axisym;
    } else {
        throw IngestionError("unrecognized header", 1);
    }

    std::vector<double> radii, thetas;
    std::vector<double> v1, v2;
    std::size_t in_block = 0;  // angular index within the current radius block
    bool first_block = true;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        double vals[4];
        std::size_t pos_ = 0;
        for (int k = 0; k < 4; ++k) {
            const std::size_t next = line.find(',', pos_);
            const std::string tok = line.substr(pos_, next == std::string::npos
                                                          ? std::string::npos
                                                          : next - pos_);
            try {
                std::size_t used = 0;
                vals[k] = std::stod(tok, &used);
                if (used != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                throw IngestionError("malformed number '" + tok + "'", lineno);
            }
            if (k < 3) {
                if (next == std::string::npos) throw IngestionError("expected 4 fields", lineno);
                pos_ = next + 1;
            } else if (next != std::string::npos) {
                throw IngestionError("expected 4 fields", lineno);
            }
        }
        if (!std::isfinite(vals[2]) || !std::isfinite(vals[3]) || vals[2] < 0.0 ||
            vals[3] < 0.0)
            throw IngestionError("field samples must be finite and nonnegative", lineno);
        const bool new_block = radii.empty() || vals[0] != radii.back();
        if (new_block) {
            if (!radii.empty()) {
                if (first_block) first_block = false;
                if (in_block != thetas.size())
                    throw IngestionError("incomplete angular block", lineno);
            }
            if (!radii.empty() && vals[0] <= radii.back())
                throw IngestionError("radii must strictly ascend between blocks", lineno);
            radii.push_back(vals[0]);
            in_block = 0;
        }
        if (first_block) {
            thetas.push_back(vals[1]);
        } else {
            if (in_block >= thetas.size())
                throw IngestionError("angular block longer than the first", lineno);
            if (std::abs(vals[1] - thetas[in_block]) > 1e-12)
                throw IngestionError("angular grid differs from the first block", lineno);
        }
        ++in_block;
        v1.push_back(vals[2]);
        v2.push_back(vals[3]);
    }
    if (radii.empty()) throw IngestionError("no data rows", lineno);
    if (in_block != thetas.size()) throw IngestionError("incomplete angular block", lineno);

    AdmissiblePair pair;
    pair.n = n;
    for (PolarField* f : {&pair.u1, &pair.u2}) {
        f->n = n;
        f->r = radii;
        f->theta = thetas;
    }
    pair.u1.u = std::move(v1);
    pair.u2.u = std::move(v2);
    validate_pair(pair);
    return pair;
}

}  // namespace speclab::acf
