#include "speclab/dtn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <shared_mutex>
#include <sstream>
#include <tuple>

#include "speclab/errors.hpp"
#include "speclab/numfmt.hpp"
#include "speclab/parallel.hpp"

namespace speclab {

namespace {

std::uint64_t double_bits(double x) {
    std::uint64_t b;
    std::memcpy(&b, &x, sizeof b);
    return b;
}

long long binom(int a, int b) {
    if (b < 0 || a < 0 || b > a) return 0;
    b = std::min(b, a - b);
    long long r = 1;
    for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return r;
}

void check_sphere_dim(int n) {
    if (n < 2) throw DomainError("dtn: sphere dimension must be >= 2");
}

struct CapInfo {
    double lambda = 0.0;
    double u_slope = 0.0; // |u'_rho|
    double H = 0.0;
};

// lambda_rho and |u'_rho| are shared by every mode at the same cap; computing
// them once per (n, rho) keeps all eta values mutually consistent.
CapInfo cap_info(int n, double rho) {
    struct Key {
        int n;
        std::uint64_t rho;
        bool operator<(const Key& o) const { return std::tie(n, rho) < std::tie(o.n, o.rho); }
    };
    static std::map<Key, CapInfo> cache;
    static std::shared_mutex mtx;
    const Key key{n, double_bits(rho)};
    {
        std::shared_lock lk(mtx);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    SpaceForm space{Space::Sphere, n};
    auto sol = cap_first_eigenvalue(space, rho, 64);
    CapInfo info{sol.lambda, -sol.boundary_slope, mean_curvature(space, rho)};
    std::unique_lock lk(mtx);
    return cache.emplace(key, info).first->second;
}

struct EtaPair {
    double g_prime_rho = 0.0;
    double calibrated = 0.0;
    double as_written = 0.0;
};

EtaPair eta_from_slope(double rho, const CapInfo& info, double gp) {
    EtaPair p;
    p.g_prime_rho = gp;
    p.as_written = gp + 0.5 * info.H * info.u_slope * info.u_slope;
    p.calibrated =
        0.5 * rho * rho * (info.u_slope * gp + info.H * info.u_slope * info.u_slope);
    return p;
}

// ---------------------------------------------------------------------------
// eta cache: in-memory map keyed by (n, degree, convention, rho bit pattern),
// optionally mirrored to $SPECLAB_CACHE_DIR/eta_cache.csv. Concurrent readers
// take the shared lock; insertion and the CSV append happen under the unique
// lock, so values are independent of insertion order (first write wins).

struct EtaKey {
    int n;
    int k;
    int conv;
    std::uint64_t rho;
    bool operator<(const EtaKey& o) const {
        return std::tie(n, k, conv, rho) < std::tie(o.n, o.k, o.conv, o.rho);
    }
};

struct EtaCache {
    std::map<EtaKey, double> values;
    std::set<std::string> loaded_files;
    std::shared_mutex mtx;

    static EtaCache& instance() {
        static EtaCache c;
        return c;
    }

    static std::string file_path() {
        const char* dir = std::getenv("SPECLAB_CACHE_DIR");
        if (!dir || !*dir) return {};
        return std::string(dir) + "/eta_cache.csv";
    }

    // Merge the CSV into the map; existing keys keep their value. Must run
    // under the unique lock.
    void load_file_locked(const std::string& path) {
        if (loaded_files.count(path)) return;
        loaded_files.insert(path);
        std::ifstream in(path);
        if (!in) return;
        std::string line;
        std::getline(in, line); // header
        while (std::getline(in, line)) {
            std::istringstream ss(line);
            std::string field;
            std::vector<std::string> f;
            while (std::getline(ss, field, ',')) f.push_back(field);
            if (f.size() != 7) continue;
            try {
                EtaKey key{std::stoi(f[0]), std::stoi(f[2]),
                           f[6] == "as-written" ? 1 : 0,
                           double_bits(std::stod(f[1]))};
                values.emplace(key, std::stod(f[5]));
            } catch (const std::exception&) {
                continue; // malformed row: the cache is an optimization only
            }
        }
    }

    void append_rows_locked(const std::string& path, int n, double rho, int k,
                            double mu, double gp, const EtaPair& p) {
        const bool fresh = !std::filesystem::exists(path);
        std::ofstream out(path, std::ios::app);
        if (!out) return;
        if (fresh) out << "n,rho,degree,mu,g_prime_rho,eta,convention\n";
        for (int conv = 0; conv < 2; ++conv)
            out << n << ',' << fmt_g17(rho) << ',' << k << ',' << fmt_g17(mu) << ','
                << fmt_g17(gp) << ','
                << fmt_g17(conv ? p.as_written : p.calibrated) << ','
                << (conv ? "as-written" : "calibrated") << '\n';
    }

    bool lookup(const EtaKey& key, double* out) {
        std::shared_lock lk(mtx);
        auto it = values.find(key);
        if (it == values.end()) return false;
        *out = it->second;
        return true;
    }

    // Returns the stored value for `key` after merging the file and the fresh
    // computation (an earlier insertion wins, keeping results order-free).
    double store(int n, double rho, int k, double mu, const EtaPair& p,
                 EtaConvention conv) {
        const std::string path = file_path();
        std::unique_lock lk(mtx);
        if (!path.empty()) load_file_locked(path);
        const std::uint64_t rb = double_bits(rho);
        auto cal = values.emplace(EtaKey{n, k, 0, rb}, p.calibrated);
        auto raw = values.emplace(EtaKey{n, k, 1, rb}, p.as_written);
        if (!path.empty() && (cal.second || raw.second))
            append_rows_locked(path, n, rho, k, mu, p.g_prime_rho, p);
        return conv == EtaConvention::Calibrated ? cal.first->second
                                                 : raw.first->second;
    }
};

struct ModeSolution {
    ModeIndex index;
    AngularRadialSolution sol;
    EtaPair eta;
};

ModeSolution compute_mode(int n, double rho, int k, const CapInfo& info,
                          std::size_t n_grid) {
    ModeSolution m;
    m.index = ModeIndex::make(n, k);
    SpaceForm space{Space::Sphere, n};
    m.sol = angular_radial_solution(space, rho, m.index.mu, info.lambda,
                                    info.u_slope, n_grid);
    m.eta = eta_from_slope(rho, info, m.sol.slope_rho);
    return m;
}

void validate_perturbation(int n, const BoundaryPerturbation& xi, double rho) {
    if (xi.rho > 0.0 && std::abs(xi.rho - rho) > 1e-12 * std::max(1.0, rho))
        throw DomainError("dtn: perturbation radius disagrees with the cap radius");
    std::set<std::pair<int, int>> seen;
    for (const auto& t : xi.terms) {
        if (t.degree < 0) throw DomainError("dtn: negative harmonic degree");
        if (t.degree == 0 && t.coeff != 0.0)
            throw DomainError("dtn: mean-zero perturbations require a_0 = 0");
        const auto idx = ModeIndex::make(n, t.degree);
        if (t.index < 0 || t.index >= idx.degeneracy)
            throw DomainError("dtn: harmonic index outside the eigenspace");
        if (!seen.emplace(t.degree, t.index).second)
            throw DomainError("dtn: duplicate perturbation mode");
        if (!std::isfinite(t.coeff)) throw DomainError("dtn: non-finite coefficient");
    }
}

} // namespace

std::string convention_name(EtaConvention conv) {
    return conv == EtaConvention::Calibrated ? "calibrated" : "as-written";
}

EtaConvention parse_convention(const std::string& name) {
    if (name == "calibrated") return EtaConvention::Calibrated;
    if (name == "as-written") return EtaConvention::AsWritten;
    throw DomainError("unknown eta convention: " + name);
}

ModeIndex ModeIndex::make(int n, int k) {
    check_sphere_dim(n);
    if (k < 0) throw DomainError("dtn: harmonic degree must be >= 0");
    ModeIndex idx;
    idx.degree = k;
    idx.mu = double(k) * (k + n - 2);
    const int d = n - 1; // harmonics live on S^{n-1}
    idx.degeneracy = int(binom(k + d, d) - binom(k + d - 2, d));
    return idx;
}

double BoundaryPerturbation::l2_norm() const {
    double s = 0.0;
    for (const auto& t : terms) s += t.coeff * t.coeff;
    return std::sqrt(s);
}

double dtn_eigenvalue(int n, double rho, int k, EtaConvention conv) {
    check_sphere_dim(n);
    if (k == 0)
        throw DomainError("dtn: the degree-0 mode is excluded (no solvable "
                          "mean mode under the volume constraint)");
    if (k < 0) throw DomainError("dtn: harmonic degree must be >= 1");
    SpaceForm space{Space::Sphere, n};
    rho = space.clamp_radius(rho);

    auto& cache = EtaCache::instance();
    const EtaKey key{n, k, conv == EtaConvention::AsWritten ? 1 : 0,
                     double_bits(rho)};
    double hit;
    if (cache.lookup(key, &hit)) return hit;

    const CapInfo info = cap_info(n, rho);
    const ModeSolution m = compute_mode(n, rho, k, info, 16);
    return cache.store(n, rho, k, m.index.mu, m.eta, conv);
}

DtNSpectrum dtn_spectrum(int n, double rho, int k_max, EtaConvention conv,
                         std::size_t n_grid) {
    check_sphere_dim(n);
    if (k_max < 1) throw DomainError("dtn: k_max must be >= 1");
    SpaceForm space{Space::Sphere, n};
    rho = space.clamp_radius(rho);

    DtNSpectrum spec;
    spec.n = n;
    spec.rho = rho;
    spec.convention = conv;
    const CapInfo info = cap_info(n, rho);
    spec.lambda_rho = info.lambda;
    spec.u_slope = info.u_slope;
    spec.mean_curvature = info.H;
    spec.grid = RadialGrid::uniform(rho, n_grid);

    spec.modes.resize(std::size_t(k_max));
    auto& cache = EtaCache::instance();
    for (int k = 1; k <= k_max; ++k) {
        ModeSolution m = compute_mode(n, rho, k, info, n_grid);
        DtNMode& mode = spec.modes[std::size_t(k - 1)];
        mode.index = m.index;
        mode.g_profile = std::move(m.sol.profile);
        mode.g_prime_rho = m.sol.slope_rho;
        mode.eta = cache.store(n, rho, k, m.index.mu, m.eta, conv);
    }
    return spec;
}

GapScanReport spectral_gap_scan(int n, const std::vector<double>& rho_grid,
                                int k_max, EtaConvention conv) {
    check_sphere_dim(n);
    if (rho_grid.empty()) throw DomainError("dtn: empty rho grid");
    if (k_max < 2) throw DomainError("dtn: gap scan needs k_max >= 2");

    GapScanReport rep;
    rep.n = n;
    rep.k_max = k_max;
    rep.convention = conv;
    rep.rows.resize(rho_grid.size());

    parallel_for(rho_grid.size(), [&](std::size_t i) {
        const DtNSpectrum spec = dtn_spectrum(n, rho_grid[i], k_max, conv);
        GapScanRow& row = rep.rows[i];
        row.rho = spec.rho;
        row.eta.resize(std::size_t(k_max));
        for (int k = 1; k <= k_max; ++k)
            row.eta[std::size_t(k - 1)] = spec.modes[std::size_t(k - 1)].eta;

        const auto& g1 = spec.modes[0].g_profile;
        const auto& g2 = spec.modes[1].g_profile;
        row.h_at_zero = g1.front() - g2.front();
        row.h_at_rho = g1.back() - g2.back();
        row.h_min_interior = std::numeric_limits<double>::infinity();
        for (std::size_t j = 1; j + 1 < g1.size(); ++j)
            row.h_min_interior = std::min(row.h_min_interior, g1[j] - g2[j]);
        row.h_slope_rho = spec.modes[0].g_prime_rho - spec.modes[1].g_prime_rho;
    });

    rep.min_eta_deg2 = std::numeric_limits<double>::infinity();
    for (const auto& row : rep.rows)
        rep.min_eta_deg2 = std::min(rep.min_eta_deg2, row.eta[1]);
    return rep;
}

SecondVariation second_variation(int n, double rho, const BoundaryPerturbation& xi,
                                 EtaConvention conv) {
    check_sphere_dim(n);
    SpaceForm space{Space::Sphere, n};
    rho = space.clamp_radius(rho);
    validate_perturbation(n, xi, rho);

    std::map<int, double> a2_by_degree;
    for (const auto& t : xi.terms)
        if (t.degree >= 1) a2_by_degree[t.degree] += t.coeff * t.coeff;

    SecondVariation sv;
    sv.convention = conv;
    if (a2_by_degree.empty()) return sv;

    const CapInfo info = cap_info(n, rho);
    auto& cache = EtaCache::instance();
    for (const auto& [k, a2] : a2_by_degree) {
        const ModeSolution m = compute_mode(n, rho, k, info, 16);
        const double eta = cache.store(n, rho, k, m.index.mu, m.eta, conv);
        sv.mode_sum += eta * a2;
        // Dirichlet-form route: the energy integral of the mode replaces the
        // boundary flux |u'_rho| g'(rho); agreement is the normalization check
        sv.direct_quadrature +=
            a2 * rho * rho * (m.sol.energy + info.H * info.u_slope * info.u_slope);
    }
    sv.value = 2.0 * sv.mode_sum;

    if (conv == EtaConvention::Calibrated) {
        const double scale = std::max(std::abs(sv.value), std::abs(sv.direct_quadrature));
        if (std::abs(sv.value - sv.direct_quadrature) > 1e-8 * scale + 1e-12)
            throw InvariantViolation(
                "second variation: mode-sum and quadrature routes disagree");
    }
    return sv;
}

CapField solve_w_xi(int n, double rho, const BoundaryPerturbation& xi,
                    std::size_t n_grid) {
    check_sphere_dim(n);
    SpaceForm space{Space::Sphere, n};
    rho = space.clamp_radius(rho);
    validate_perturbation(n, xi, rho);
    if (n_grid < 16) throw DomainError("dtn: residual grid too coarse");

    CapField field;
    field.n = n;
    field.rho = rho;
    field.grid = RadialGrid::uniform(rho, n_grid);
    field.xi_l2_norm = xi.l2_norm();

    const CapInfo info = cap_info(n, rho);
    field.lambda_rho = info.lambda;
    field.u_slope = info.u_slope;

    std::map<int, ModeSolution> by_degree;
    for (const auto& t : xi.terms)
        if (t.degree >= 1 && !by_degree.count(t.degree))
            by_degree.emplace(t.degree, compute_mode(n, rho, t.degree, info, n_grid));

    // Interior residual of each radial factor under fourth-order stencils;
    // nodes too close to the pole are excluded because the mu/sn^2 term makes
    // the stencil itself ill-conditioned there, not the solution.
    const double h = rho / double(n_grid);
    for (auto& [k, m] : by_degree) {
        const auto& g = m.sol.profile;
        const double mu = m.index.mu;
        double worst = 0.0;
        for (std::size_t i = 2; i + 2 < g.size(); ++i) {
            const double phi = field.grid.nodes[i];
            if (phi < 0.2 * rho) continue;
            const double d2 =
                (-g[i - 2] + 16 * g[i - 1] - 30 * g[i] + 16 * g[i + 1] - g[i + 2]) /
                (12 * h * h);
            const double d1 =
                (g[i - 2] - 8 * g[i - 1] + 8 * g[i + 1] - g[i + 2]) / (12 * h);
            const double sn = space.sn(phi);
            const double res = d2 + (n - 1) * space.sn_prime(phi) / sn * d1 +
                               (info.lambda - mu / (sn * sn)) * g[i];
            worst = std::max(worst, std::abs(res));
        }
        field.max_mode_residual = std::max(field.max_mode_residual, worst);
    }

    double w2 = 0.0;
    for (const auto& t : xi.terms) {
        if (t.degree < 1) continue;
        const ModeSolution& m = by_degree.at(t.degree);
        field.terms.push_back(t);
        field.profiles.push_back(m.sol.profile);
        w2 += t.coeff * t.coeff * m.sol.l2_weight2;
    }
    field.w_l2_norm = std::sqrt(w2);
    field.c_measured =
        field.xi_l2_norm > 0.0 ? field.w_l2_norm / field.xi_l2_norm : 0.0;
    return field;
}

} // namespace speclab
