#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <mutex>

#include "acf_detail.hpp"
#include "speclab/errors.hpp"
#include "speclab/parallel.hpp"
#include "speclab/radial_spectral.hpp"
#include "speclab/spaceform.hpp"

namespace speclab::acf {

namespace {

constexpr double kPi = 3.14159265358979323846;

double angular_step(const PolarField& f) {
    if (f.n == 2) return 2.0 * kPi / f.n_theta();
    return kPi / (f.n_theta() - 1);
}

struct Run {
    int first = 0;   // index of the first positive node
    int count = 0;   // number of positive nodes
};

// Maximal runs of positive samples at radius index i; periodic for n = 2.
std::vector<Run> positive_runs(const PolarField& f, int i, bool periodic) {
    const int nt = f.n_theta();
    const double eps = f.eps_pos();
    std::vector<char> p(nt);
    int npos = 0;
    for (int j = 0; j < nt; ++j) {
        p[j] = f.value(i, j) > eps;
        npos += p[j];
    }
    std::vector<Run> runs;
    if (npos == 0) return runs;
    if (npos == nt) {
        runs.push_back({0, nt});
        return runs;
    }
    int start = -1;
    if (periodic) {
        // Begin the scan right after a zero node so wrapped runs stay whole.
        int z = 0;
        while (p[z]) ++z;
        for (int s = 0; s < nt; ++s) {
            const int j = (z + 1 + s) % nt;
            if (p[j] && start < 0) start = j;
            if (!p[j] && start >= 0) {
                // The scan ends on the zero node z, so every run closes here.
                runs.push_back({start, (j - start + nt) % nt});
                start = -1;
            }
        }
    } else {
        for (int j = 0; j < nt; ++j) {
            if (p[j] && start < 0) start = j;
            if (!p[j] && start >= 0) {
                runs.push_back({start, j - start});
                start = -1;
            }
        }
        if (start >= 0) runs.push_back({start, nt - start});
    }
    return runs;
}

// Linear extension of the boundary sample toward the free boundary, clamped to
// the adjacent zero cell.
double end_extension(double u_end, double u_inner, double h) {
    const double slope = (u_inner - u_end) / h;
    if (!(slope > 0.0)) return h;
    return std::min(h, u_end / slope);
}

struct CapEigenData {
    double lambda1 = 0.0;  // unit slice sphere
    double lambda2 = 0.0;
};

// Cap eigenvalues are reused across radii of cone-like fields; cache per
// (slice dimension, radius bits).
CapEigenData cap_eigen_cached(int slice_dim, double cap_radius) {
    static std::map<std::pair<int, unsigned long long>, CapEigenData> cache;
    static std::mutex mu;
    unsigned long long bits;
    static_assert(sizeof(bits) == sizeof(cap_radius));
    std::memcpy(&bits, &cap_radius, sizeof(bits));
    const auto key = std::make_pair(slice_dim, bits);
    {
        std::lock_guard<std::mutex> lock(mu);
        const auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    const SpaceForm slice(Space::Sphere, slice_dim);
    CapEigenData data;
    data.lambda1 = cap_first_eigenvalue(slice, cap_radius).lambda;
    data.lambda2 = cap_second_eigenvalue(slice, cap_radius);
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(key, data);
    return data;
}

// Everything deficit evaluation needs about one slice of one field.
struct SliceData {
    bool empty = true;
    double theta = 0.0;    // arc length (n=2) or cap polar radius (n>=3)
    double lambda = 0.0;   // first eigenvalue on the slice of radius r
    double lambda2 = 0.0;  // second eigenvalue, for the eigengap certificate
    double alpha = 0.0;    // characteristic constant
    std::vector<double> Y; // first eigenfunction at the nodes, L2(dB_r) = 1
};

SliceData slice_data_2d(const PolarField& f, int i, double theta_override) {
    SliceData s;
    ArcDecomposition dec = arc_decomposition(f, f.r[i]);
    if (dec.empty) return s;
    s.empty = false;
    const double r = f.r[i];
    if (theta_override > 0.0) {
        dec.theta_longest = theta_override;
        dec.lambda = kPi * kPi / (r * r * theta_override * theta_override);
    }
    s.theta = dec.theta_longest;
    s.lambda = dec.lambda;
    s.alpha = kPi / dec.theta_longest;
    s.lambda2 = detail::arc_second_eigenvalue(dec);
    s.Y = detail::arc_eigenfunction(f, dec);
    return s;
}

SliceData slice_data_nd(const PolarField& f, int i) {
    SliceData s;
    const CapSlice cap = cap_slice(f, f.r[i]);
    if (cap.empty) return s;
    s.empty = false;
    const double r = f.r[i];
    s.theta = cap.cap_radius;
    const CapEigenData eig = cap_eigen_cached(f.n - 1, cap.cap_radius);
    s.lambda = eig.lambda1 / (r * r);
    s.lambda2 = eig.lambda2 / (r * r);
    s.alpha = characteristic_constant(f.n, s.lambda, r);
    s.Y = detail::cap_eigenfunction(f, cap);
    return s;
}

// Core deficit evaluation at radius index i from precomputed rings and slices.
DeficitTerms deficits_at(const AdmissiblePair& pair, const detail::FieldRings* rings[2],
                         const SliceData slices[2], int i) {
    const PolarField* fields[2] = {&pair.u1, &pair.u2};
    const double r = pair.u1.r[i];
    DeficitTerms out;
    out.r = r;
    if (slices[0].empty || slices[1].empty) {
        out.skipped = true;
        return out;
    }
    const double wgt = std::pow(r, 2 - pair.n);
    const int nt = pair.u1.n_theta();
    const int cells = pair.n == 2 ? nt : nt - 1;
    for (int fi = 0; fi < 2; ++fi) {
        const PolarField& f = *fields[fi];
        const detail::FieldRings& R = *rings[fi];
        const SliceData& s = slices[fi];
        const double E = R.Ew[i];
        if (!(E > 0.0)) {
            out.skipped = true;
            return out;
        }
        out.alpha[fi] = s.alpha;
        const double c = s.alpha / r;  // = sqrt(lambda) for n = 2
        double ring_u2 = 0.0, ring_b = 0.0, ring_res = 0.0, beta_hat = 0.0;
        for (int j = 0; j < cells; ++j) {
            const int jn = pair.n == 2 ? (j + 1) % nt : j + 1;
            const double w = detail::cell_weight(f, r, j);
            const double um = 0.5 * (f.value(i, j) + f.value(i, jn));
            const double drm = 0.5 * (R.dr[static_cast<std::size_t>(i) * nt + j] +
                                      R.dr[static_cast<std::size_t>(i) * nt + jn]);
            const double ym = 0.5 * (s.Y[j] + s.Y[jn]);
            ring_u2 += w * um * um;
            const double g = c * um - drm;
            ring_b += w * g * g;
            beta_hat += w * um * ym;
        }
        for (int j = 0; j < cells; ++j) {
            const int jn = pair.n == 2 ? (j + 1) % nt : j + 1;
            const double w = detail::cell_weight(f, r, j);
            const double em = 0.5 * (f.value(i, j) - beta_hat * s.Y[j] +
                                     f.value(i, jn) - beta_hat * s.Y[jn]);
            ring_res += w * em * em;
        }
        out.dA_field[fi] = (R.ring_tau_w[i] - s.lambda * wgt * ring_u2) / E;
        out.dB_field[fi] = wgt * ring_b / E;
        out.dA += out.dA_field[fi];
        out.dB += out.dB_field[fi];
        out.certA += wgt * (s.lambda2 - s.lambda) * ring_res / E;
        if (pair.n == 2) {
            const double th = s.theta;
            out.certC += (2.0 / r) * (kPi - th) * (kPi - th) / (th * (2.0 * kPi - th));
            const double sq = std::sqrt(s.lambda);
            out.certC_weak += (1.0 / sq) * (sq - 1.0 / r) * (sq - 1.0 / r);
        }
    }
    out.dC = (2.0 / r) * (out.alpha[0] + out.alpha[1] - 2.0);
    out.certB = out.dB;
    if (pair.n >= 3) {
        double square = 0.0;
        for (int fi = 0; fi < 2; ++fi) {
            const double a = out.alpha[fi];
            square += (a - 1.0) * (a - 1.0) / (r * std::max(a, 2.0));
        }
        out.certC = square;  // unit-constant square function; c(n) is measured
        out.certC_ratio = square > 1e-300 ? out.dC / square : 0.0;
    } else {
        out.certC_ratio = out.certC > 1e-300 ? out.dC / out.certC : 0.0;
    }

    // In-function guards for the certified lower bounds. The slack covers the
    // O(h^2 (1 + 1/r)) consistency error of the staggered quadratures.
    const double h = angular_step(pair.u1);
    const double tol = 4.0 * h * h * (1.0 + 1.0 / r) + 1e-12;
    if (out.dA < out.certA - tol * (1.0 + std::abs(out.certA)))
        throw InvariantViolation("deficit: eigengap certificate exceeded dA at r=" +
                                 std::to_string(r));
    if (pair.n == 2) {
        if (out.dC < out.certC - 1e-9 * (1.0 + std::abs(out.certC)))
            throw InvariantViolation("deficit: dC certificate arithmetic violated");
        if (out.certC < out.certC_weak - 1e-9 * (1.0 + std::abs(out.certC)))
            throw InvariantViolation("deficit: dC secondary bound violated");
    }
    return out;
}

DeficitTerms deficit_terms_common(const AdmissiblePair& pair, double r) {
    validate_pair(pair);
    const detail::FieldRings r1 = detail::compute_rings(pair.u1);
    const detail::FieldRings r2 = detail::compute_rings(pair.u2);
    const detail::FieldRings* rings[2] = {&r1, &r2};
    const int i = detail::nearest_radius_index(pair.u1, r);
    SliceData slices[2];
    if (pair.n == 2) {
        // Disjointness projection: interpolated endpoints can overshoot the
        // complementary-arc identity by O(h^2); rescale so theta1+theta2 <= 2pi.
        SliceData a = slice_data_2d(pair.u1, i, 0.0);
        SliceData b = slice_data_2d(pair.u2, i, 0.0);
        if (!a.empty && !b.empty && a.theta + b.theta > 2.0 * kPi) {
            const double scale = 2.0 * kPi / (a.theta + b.theta);
            a = slice_data_2d(pair.u1, i, a.theta * scale);
            b = slice_data_2d(pair.u2, i, b.theta * scale);
        }
        slices[0] = std::move(a);
        slices[1] = std::move(b);
    } else {
        slices[0] = slice_data_nd(pair.u1, i);
        slices[1] = slice_data_nd(pair.u2, i);
    }
    return deficits_at(pair, rings, slices, i);
}

}  // namespace

// ---- support decompositions --------------------------------------------------

ArcDecomposition arc_decomposition(const PolarField& field, double r) {
    if (field.n != 2) throw DomainError("arc_decomposition: n = 2 only");
    const int i = detail::nearest_radius_index(field, r);
    const int nt = field.n_theta();
    const double h = angular_step(field);
    ArcDecomposition out;
    out.r = field.r[i];
    const auto runs = positive_runs(field, i, true);
    if (runs.empty()) return out;
    out.empty = false;
    if (runs.size() == 1 && runs[0].count == nt) {
        out.arcs.push_back({0.0, 2.0 * kPi});
    } else {
        for (const Run& run : runs) {
            Arc arc;
            if (run.count == 1) {
                arc.start = field.theta[run.first] - 0.5 * h;
                arc.length = h;
            } else {
                const int last = (run.first + run.count - 1) % nt;
                const int second = (run.first + 1) % nt;
                const int second_last = (last + nt - 1) % nt;
                const double extl =
                    end_extension(field.value(i, run.first), field.value(i, second), h);
                const double extr =
                    end_extension(field.value(i, last), field.value(i, second_last), h);
                arc.start = field.theta[run.first] - extl;
                arc.length = (run.count - 1) * h + extl + extr;
            }
            if (arc.start < 0.0) arc.start += 2.0 * kPi;
            arc.length = std::min(arc.length, 2.0 * kPi);
            out.arcs.push_back(arc);
        }
    }
    for (const Arc& a : out.arcs) {
        if (a.length > out.theta_longest) {
            out.theta_longest = a.length;
            out.theta_start = a.start;
        }
    }
    out.lambda = kPi * kPi / (out.r * out.r * out.theta_longest * out.theta_longest);
    return out;
}

CapSlice cap_slice(const PolarField& field, double r) {
    if (field.n < 3) throw DomainError("cap_slice: n >= 3 only");
    const int i = detail::nearest_radius_index(field, r);
    const int nt = field.n_theta();
    const double h = angular_step(field);
    CapSlice out;
    out.r = field.r[i];
    const auto runs = positive_runs(field, i, false);
    if (runs.empty()) return out;
    if (runs.size() > 1)
        throw UnsupportedInput("cap_slice: positivity set is not a single polar cap");
    const Run& run = runs[0];
    const bool north = run.first == 0;
    const bool south = run.first + run.count == nt;
    if (north && south)
        throw UnsupportedInput("cap_slice: positivity set covers the whole slice sphere");
    if (!north && !south)
        throw UnsupportedInput("cap_slice: positivity cap does not contain a pole");
    out.empty = false;
    out.north = north;
    if (north) {
        const int last = run.first + run.count - 1;
        double ext = h;
        if (run.count >= 2)
            ext = end_extension(field.value(i, last), field.value(i, last - 1), h);
        out.cap_radius = std::min(field.theta[last] + ext, kPi);
    } else {
        double ext = h;
        if (run.count >= 2)
            ext = end_extension(field.value(i, run.first), field.value(i, run.first + 1), h);
        out.cap_radius = std::min(kPi - (field.theta[run.first] - ext), kPi);
    }
    out.lambda = cap_eigen_cached(field.n - 1, out.cap_radius).lambda1 / (out.r * out.r);
    return out;
}

namespace detail {

std::vector<double> arc_eigenfunction(const PolarField& f, const ArcDecomposition& dec) {
    const int nt = f.n_theta();
    std::vector<double> Y(nt, 0.0);
    const double th = dec.theta_longest, s0 = dec.theta_start, r = dec.r;
    const double norm = std::sqrt(2.0 / (r * th));
    for (int j = 0; j < nt; ++j) {
        double d = f.theta[j] - s0;
        d -= 2.0 * kPi * std::floor(d / (2.0 * kPi));
        if (d > 0.0 && d < th) Y[j] = norm * std::sin(kPi * d / th);
    }
    return Y;
}

std::vector<double> cap_eigenfunction(const PolarField& f, const CapSlice& slice) {
    const int nt = f.n_theta();
    const double rho = slice.cap_radius;
    const SpaceForm sp(Space::Sphere, f.n - 1);
    const CapEigenData eig = cap_eigen_cached(f.n - 1, rho);
    std::vector<double> nodes;
    std::vector<int> node_of;
    for (int j = 0; j < nt; ++j) {
        const double phi = slice.north ? f.theta[j] : kPi - f.theta[j];
        if (phi < rho) {
            nodes.push_back(phi);
            node_of.push_back(j);
        }
    }
    if (!slice.north) {
        std::reverse(nodes.begin(), nodes.end());
        std::reverse(node_of.begin(), node_of.end());
    }
    nodes.push_back(rho);
    const auto prof = radial_eigenfunction(sp, rho, eig.lambda1, nodes);
    std::vector<double> Y(nt, 0.0);
    // Unit L2 norm on the unit slice cap; rescale to the slice of radius r.
    const double scale = std::pow(slice.r, -(f.n - 1) / 2.0);
    for (std::size_t k = 0; k < node_of.size(); ++k) Y[node_of[k]] = prof[k] * scale;
    return Y;
}

double arc_second_eigenvalue(const ArcDecomposition& dec) {
    double second_first = 0.0;
    for (const Arc& a : dec.arcs) {
        if (a.length == dec.theta_longest) continue;
        second_first = std::max(second_first, a.length);
    }
    double l2 = 4.0 * dec.lambda;
    if (second_first > 0.0)
        l2 = std::min(l2, kPi * kPi / (dec.r * dec.r * second_first * second_first));
    return l2;
}

}  // namespace detail

// ---- the functional -----------------------------------------------------------

double acf_J(const AdmissiblePair& pair, double r) {
    validate_pair(pair);
    const int i = detail::nearest_radius_index(pair.u1, r);
    const auto r1 = detail::compute_rings(pair.u1);
    const auto r2 = detail::compute_rings(pair.u2);
    const double rr = pair.u1.r[i];
    return r1.Ew[i] * r2.Ew[i] / (rr * rr * rr * rr);
}

DeficitTerms deficit_terms_2d(const AdmissiblePair& pair, double r) {
    if (pair.n != 2) throw DomainError("deficit_terms_2d: n = 2 only");
    return deficit_terms_common(pair, r);
}

DeficitTerms deficit_terms_nd_axisym(const AdmissiblePair& pair, double r) {
    if (pair.n < 3 || pair.n > 4)
        throw DomainError("deficit_terms_nd_axisym: n must be 3 or 4");
    return deficit_terms_common(pair, r);
}

AcfTable acf_deficit_table(const AdmissiblePair& pair) {
    validate_pair(pair);
    const detail::FieldRings r1 = detail::compute_rings(pair.u1);
    const detail::FieldRings r2 = detail::compute_rings(pair.u2);
    const detail::FieldRings* rings[2] = {&r1, &r2};
    const int nr = pair.u1.n_r();
    AcfTable table;
    table.n = pair.n;
    table.rows.assign(nr, AcfRow{});
    std::vector<double> logJ(nr, 0.0);
    bool degenerate = false;
    for (int i = 0; i < nr; ++i) {
        const double r = pair.u1.r[i];
        const double J = r1.Ew[i] * r2.Ew[i] / (r * r * r * r);
        table.rows[i].r = r;
        table.rows[i].J = J;
        if (J > 0.0)
            logJ[i] = std::log(J);
        else
            degenerate = true;
    }
    parallel_for(static_cast<std::size_t>(nr), [&](std::size_t ii) {
        const int i = static_cast<int>(ii);
        AcfRow& row = table.rows[i];
        const double r = pair.u1.r[i];
        if (degenerate || !(row.J > 0.0)) {
            row.d.skipped = true;
            return;
        }
        row.logJp_boundary =
            r1.ring_grad_w[i] / r1.Ew[i] + r2.ring_grad_w[i] / r2.Ew[i] - 4.0 / r;
        const auto& rs = pair.u1.r;
        if (i == 0)
            row.logJp_fd = (logJ[1] - logJ[0]) / (rs[1] - rs[0]);
        else if (i == nr - 1)
            row.logJp_fd = (logJ[nr - 1] - logJ[nr - 2]) / (rs[nr - 1] - rs[nr - 2]);
        else {
            const double a = rs[i] - rs[i - 1], b = rs[i + 1] - rs[i];
            row.logJp_fd = (logJ[i + 1] * a * a - logJ[i - 1] * b * b +
                            logJ[i] * (b * b - a * a)) /
                           (a * b * (a + b));
        }
        SliceData slices[2];
        if (pair.n == 2) {
            SliceData a = slice_data_2d(pair.u1, i, 0.0);
            SliceData b = slice_data_2d(pair.u2, i, 0.0);
            if (!a.empty && !b.empty && a.theta + b.theta > 2.0 * kPi) {
                const double scale = 2.0 * kPi / (a.theta + b.theta);
                a = slice_data_2d(pair.u1, i, a.theta * scale);
                b = slice_data_2d(pair.u2, i, b.theta * scale);
            }
            slices[0] = std::move(a);
            slices[1] = std::move(b);
        } else {
            slices[0] = slice_data_nd(pair.u1, i);
            slices[1] = slice_data_nd(pair.u2, i);
        }
        row.d = deficits_at(pair, rings, slices, i);
    });
    return table;
}

// ---- homogeneity and energy control -------------------------------------------

double one_homogeneity_error(const PolarField& field, double rho) {
    const int i0 = detail::nearest_radius_index(field, rho);
    const int nr = field.n_r(), nt = field.n_theta();
    std::vector<double> ring(nr, 0.0), v(nt);
    for (int i = i0; i < nr; ++i) {
        for (int j = 0; j < nt; ++j) {
            const double d = field.r[i] * field.value(nr - 1, j) - field.value(i, j);
            v[j] = d * d;
        }
        ring[i] = detail::ring_node_integral(field, i, v);
    }
    return detail::radial_integral(field.r, ring, i0, nr - 1);
}

HomogeneityReport one_homogeneity_report(const AdmissiblePair& pair, double rho) {
    validate_pair(pair);
    HomogeneityReport rep;
    const auto r1 = detail::compute_rings(pair.u1);
    const auto r2 = detail::compute_rings(pair.u2);
    const int i0 = detail::nearest_radius_index(pair.u1, rho);
    const int last = pair.u1.n_r() - 1;
    const double J1 = r1.Ew[last] * r2.Ew[last];
    const double Jr = r1.Ew[i0] * r2.Ew[i0] /
                      std::pow(pair.u1.r[i0] / pair.u1.r[last], 4.0);
    if (!(J1 > 0.0) || !(Jr > 0.0)) throw DomainError("one_homogeneity: degenerate pair");
    rep.log_quotient = std::log(J1 / Jr);
    rep.applicable = rep.log_quotient > 1e-9;
    const detail::FieldRings* rings[2] = {&r1, &r2};
    const PolarField* fields[2] = {&pair.u1, &pair.u2};
    for (int fi = 0; fi < 2; ++fi) {
        rep.value[fi] = one_homogeneity_error(*fields[fi], rho);
        rep.w12_norm_sq[fi] = rings[fi]->Eunw.back() + rings[fi]->M2.back();
        if (rep.applicable)
            rep.ratio[fi] = rep.value[fi] / (rep.log_quotient * rep.w12_norm_sq[fi]);
    }
    return rep;
}

GradientEnergyRatio gradient_energy_ratio(const AdmissiblePair& pair) {
    validate_pair(pair);
    GradientEnergyRatio out;
    const auto r1 = detail::compute_rings(pair.u1);
    const auto r2 = detail::compute_rings(pair.u2);
    const int last = pair.u1.n_r() - 1;
    const int half = detail::nearest_radius_index(pair.u1, 0.5);
    const double rh = pair.u1.r[half];
    const double J1 = r1.Ew[last] * r2.Ew[last];
    const double Jh = r1.Ew[half] * r2.Ew[half] / (rh * rh * rh * rh);
    if (!(J1 > 0.0) || !(Jh > 0.0))
        throw DomainError("gradient_energy_ratio: a field vanishes identically");
    out.j_quotient = J1 / Jh;
    const detail::FieldRings* rings[2] = {&r1, &r2};
    for (int fi = 0; fi < 2; ++fi) {
        const double m2 = rings[fi]->M2.back();
        if (!(m2 > 0.0)) throw DomainError("gradient_energy_ratio: zero field");
        out.ratio[fi] = rings[fi]->Eunw.back() / (out.j_quotient * m2);
    }
    return out;
}

// ---- characteristic constants ---------------------------------------------------

double characteristic_constant(int n, double lambda, double r) {
    if (n < 2) throw DomainError("characteristic_constant: n >= 2");
    if (!(lambda >= 0.0)) throw DomainError("characteristic_constant: lambda >= 0");
    if (!(r > 0.0)) throw DomainError("characteristic_constant: r > 0");
    const double b = n - 2.0;
    return 0.5 * (-b + std::sqrt(b * b + 4.0 * r * r * lambda));
}

namespace {

double alpha_hat_clamped(int n, double t, bool* clamped) {
    if (n < 3) throw DomainError("alpha_hat: n >= 3 (caps of S^{n-1})");
    const double lo = 0.002, hi = 0.998;
    double tc = t;
    if (tc < lo) tc = lo;
    if (tc > hi) tc = hi;
    if (clamped && tc != t) *clamped = true;
    const SpaceForm slice(Space::Sphere, n - 1);
    const double vol = tc * unit_sphere_area(n);
    const double rho = radius_for_volume(slice, vol);
    const double lam = cap_first_eigenvalue(slice, rho).lambda;
    return characteristic_constant(n, lam, 1.0);
}

}  // namespace

double alpha_hat(int n, double t) { return alpha_hat_clamped(n, t, nullptr); }

double delta_hat(int n, double h) {
    return alpha_hat(n, 0.5 + h) + alpha_hat(n, 0.5 - h) - 2.0;
}

AlphaHatProfile alpha_hat_profile(int n, const std::vector<double>& t_grid) {
    AlphaHatProfile prof;
    prof.n = n;
    for (double t : t_grid) {
        bool cl = false;
        const double a = alpha_hat_clamped(n, t, &cl);
        prof.clamped = prof.clamped || cl;
        prof.t.push_back(std::clamp(t, 0.002, 0.998));
        prof.alpha.push_back(a);
    }
    const double d = 1e-3;
    prof.c_est = (alpha_hat(n, 0.5 + d) + alpha_hat(n, 0.5 - d) - 2.0) / (d * d);
    return prof;
}

}  // namespace speclab::acf
