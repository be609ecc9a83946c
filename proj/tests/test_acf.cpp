#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "speclab/acf.hpp"
#include "speclab/errors.hpp"

using namespace speclab;
using namespace speclab::acf;
namespace nb = std::numbers;

// Reference values frozen from tools/oracles/acf_anchors.py: closed forms with
// independent scipy quadrature / DOP853 shooting cross-checks, computed before
// this module was implemented.
namespace oracle {
constexpr double half_plane_J = 2.4674011002723395;      // pi^2/4
constexpr double wedge_J_half = 2.050997299530779;       // (pi^2/4) 0.5^{4/15}
constexpr double wedge_dC_half = 0.5333333333333332;     // 8/15
constexpr double powerlaw_dB_r1 = 0.039344262295081964;  // 2.4/61
constexpr double mode2_dA_r1 = 0.22040816326530613;      // 0.135 pi / (0.6125 pi)
constexpr double onehomog_p11_rho05 = 0.00024640510144637143;
constexpr double cap3d_alpha_north = 1.2281934791425602;
constexpr double cap3d_alpha_south = 0.8217163113712418;
constexpr double cap3d_J_r1 = 2.284181510588138;
constexpr double cap3d_J_r05 = 2.1314832480621755;
constexpr double cap3d_dC_r05 = 0.19963916205520782;
constexpr double alphahat_quarter = 1.7772882701590862;
constexpr double alphahat_c_est = 4.909660064278398;
}  // namespace oracle

namespace {

AdmissiblePair make_pair_2d(int nt, int nr, const std::function<double(double, double)>& f1,
                            const std::function<double(double, double)>& f2) {
    const auto r = log_radial_grid(nr);
    const auto th = full_circle_grid(nt);
    AdmissiblePair p;
    p.n = 2;
    p.u1 = sample_field(2, r, th, f1);
    p.u2 = sample_field(2, r, th, f2);
    validate_pair(p);
    return p;
}

double pos(double x) { return x > 0.0 ? x : 0.0; }

// Discrete consistency tolerance of the staggered deficit quadratures.
double deficit_tol(int n_theta, int n, double r) {
    const double h = n == 2 ? 2.0 * nb::pi / n_theta : nb::pi / (n_theta - 1);
    return 2.0 * h * h * (1.0 + 1.0 / r);
}

}  // namespace

TEST_CASE("grid constructors meet their contracts") {
    const auto r = log_radial_grid(256);
    CHECK(r.size() == 256);
    CHECK(r.front() == doctest::Approx(1.0 / 1024.0).epsilon(1e-14));
    CHECK(r.back() == 1.0);
    for (std::size_t i = 1; i < r.size(); ++i) CHECK(r[i] > r[i - 1]);

    const auto th = full_circle_grid(512);
    CHECK(th.size() == 512);
    CHECK(th.front() == 0.0);
    CHECK(th[1] == doctest::Approx(2.0 * nb::pi / 512).epsilon(1e-15));

    const auto ph = polar_angle_grid(257);
    CHECK(ph.front() == 0.0);
    CHECK(ph.back() == nb::pi);
}

TEST_CASE("pair validation rejects malformed inputs") {
    const auto r = log_radial_grid(32);
    const auto th = full_circle_grid(64);

    AdmissiblePair overlap;
    overlap.n = 2;
    overlap.u1 = sample_field(2, r, th, [](double rr, double t) { return rr * pos(std::sin(t)); });
    overlap.u2 = overlap.u1;
    CHECK_THROWS_AS(validate_pair(overlap), DomainError);

    const auto pair_with = [&](std::vector<double> rr, std::vector<double> tt, bool clip) {
        AdmissiblePair p;
        p.n = 2;
        p.u1 = sample_field(2, rr, tt, [clip](double rad, double t) {
            const double v = rad * std::sin(t);
            return clip ? pos(v) : v;
        });
        p.u2 = sample_field(2, std::move(rr), std::move(tt),
                            [](double rad, double t) { return rad * pos(-std::sin(t)); });
        return p;
    };

    auto bad_r = r;
    std::swap(bad_r[3], bad_r[4]);
    CHECK_THROWS_AS(validate_pair(pair_with(bad_r, th, true)), DomainError);

    auto bad_th = th;
    bad_th[5] += 1e-3;
    CHECK_THROWS_AS(validate_pair(pair_with(r, bad_th, true)), DomainError);

    CHECK_THROWS_AS(validate_pair(pair_with(r, th, false)), DomainError);  // negative samples
}

TEST_CASE("csv round trip is lossless and errors carry line numbers") {
    const CorpusEntry e = corpus_pair("half-plane", 64, 32);
    const std::string path = "acf_roundtrip_test.csv";
    save_pair_csv(e.pair, path);
    const AdmissiblePair back = load_pair_csv(path);
    REQUIRE(back.u1.n_r() == e.pair.u1.n_r());
    REQUIRE(back.u1.n_theta() == e.pair.u1.n_theta());
    for (std::size_t k = 0; k < back.u1.u.size(); ++k) {
        CHECK(back.u1.u[k] == e.pair.u1.u[k]);
        CHECK(back.u2.u[k] == e.pair.u2.u[k]);
    }
    for (int i = 0; i < back.u1.n_r(); ++i) CHECK(back.u1.r[i] == e.pair.u1.r[i]);
    std::remove(path.c_str());

    {
        std::ofstream out(path);
        out << "r,theta,u1,u2\n0.5,0,0,junk\n";
    }
    try {
        load_pair_csv(path);
        FAIL("expected IngestionError");
    } catch (const IngestionError& err) {
        CHECK(err.line == 2);
    }
    {
        std::ofstream out(path);
        out << "radius,theta,u1,u2\n";
    }
    try {
        load_pair_csv(path);
        FAIL("expected IngestionError");
    } catch (const IngestionError& err) {
        CHECK(err.line == 1);
    }
    std::remove(path.c_str());

    const CorpusEntry e3 = corpus_pair("half-space-3d", 65, 32);
    save_pair_csv(e3.pair, path);
    const AdmissiblePair back3 = load_pair_csv(path, 3);
    CHECK(back3.n == 3);
    CHECK(back3.u1.u == e3.pair.u1.u);
    std::remove(path.c_str());
}

TEST_CASE("arc decomposition anchors") {
    const CorpusEntry hp = corpus_pair("half-plane");
    const ArcDecomposition dec = arc_decomposition(hp.pair.u1, 1.0);
    REQUIRE(!dec.empty);
    REQUIRE(dec.arcs.size() == 1);
    // Aligned half plane: endpoint interpolation clamps to one cell on each
    // side and recovers (0, pi) exactly.
    CHECK(dec.theta_longest == doctest::Approx(nb::pi).epsilon(1e-15));
    const double s = std::fmod(dec.theta_start, 2.0 * nb::pi);
    CHECK(std::min(s, 2.0 * nb::pi - s) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(dec.lambda == doctest::Approx(1.0).epsilon(1e-14));

    // All-positive slice: the full circle with lambda = 1/(4 r^2).
    const auto r = log_radial_grid(32);
    const auto th = full_circle_grid(64);
    const PolarField disk = sample_field(2, r, th, [](double rr, double) { return rr; });
    const ArcDecomposition full = arc_decomposition(disk, 1.0);
    REQUIRE(full.arcs.size() == 1);
    CHECK(full.arcs[0].length == 2.0 * nb::pi);
    CHECK(full.lambda == doctest::Approx(0.25).epsilon(1e-15));

    // Two equal lobes of sin(2 theta): both arcs found, length pi/2 each.
    const PolarField lobes = sample_field(
        2, log_radial_grid(32), full_circle_grid(512),
        [](double rr, double t) { return rr * pos(std::sin(2.0 * t)); });
    const ArcDecomposition two = arc_decomposition(lobes, 1.0);
    REQUIRE(two.arcs.size() == 2);
    CHECK(two.arcs[0].length == doctest::Approx(nb::pi / 2).epsilon(1e-4));
    CHECK(two.arcs[1].length == doctest::Approx(nb::pi / 2).epsilon(1e-4));
    CHECK(two.lambda == doctest::Approx(4.0).epsilon(1e-3));

    CHECK_THROWS_AS(arc_decomposition(corpus_pair("half-space-3d", 65, 32).pair.u1, 0.5),
                    DomainError);
}

TEST_CASE("cap slice anchors and rejection of non-caps") {
    const CorpusEntry hs = corpus_pair("half-space-3d", 257, 64);
    const CapSlice north = cap_slice(hs.pair.u1, 1.0);
    REQUIRE(!north.empty);
    CHECK(north.north);
    CHECK(north.cap_radius == doctest::Approx(nb::pi / 2).epsilon(1e-4));
    CHECK(north.lambda == doctest::Approx(2.0).epsilon(1e-3));  // hemisphere of S^2
    const CapSlice south = cap_slice(hs.pair.u2, 1.0);
    REQUIRE(!south.empty);
    CHECK(!south.north);
    CHECK(south.cap_radius == doctest::Approx(nb::pi / 2).epsilon(1e-4));

    const auto r = log_radial_grid(32);
    const auto ph = polar_angle_grid(65);
    const PolarField annulus = sample_field(
        3, r, ph, [](double rr, double p) { return rr * pos(std::sin(p) - 0.5); });
    CHECK_THROWS_AS(cap_slice(annulus, 0.5), UnsupportedInput);
    const PolarField whole = sample_field(3, r, ph, [](double rr, double) { return rr; });
    CHECK_THROWS_AS(cap_slice(whole, 0.5), UnsupportedInput);
    CHECK_THROWS_AS(cap_slice(corpus_pair("half-plane", 64, 32).pair.u1, 0.5), DomainError);
}

TEST_CASE("half-plane J matches pi^2/4 and improves under refinement") {
    const CorpusEntry coarse = corpus_pair("half-plane", 256, 128);
    const CorpusEntry fine = corpus_pair("half-plane", 512, 256);
    double worst_coarse = 0.0, worst_fine = 0.0;
    for (double r : {0.25, 0.5, 1.0}) {
        const double jc = acf_J(coarse.pair, r);
        const double jf = acf_J(fine.pair, r);
        worst_coarse = std::max(worst_coarse, std::abs(jc / oracle::half_plane_J - 1.0));
        worst_fine = std::max(worst_fine, std::abs(jf / oracle::half_plane_J - 1.0));
    }
    CHECK(worst_fine < 5e-3);   // criterion tolerance
    CHECK(worst_coarse < 5e-3);
    CHECK(worst_fine < 0.5 * worst_coarse);

    // Scaling the two phases by c and 1/c leaves J unchanged identically.
    const CorpusEntry scaled = corpus_pair("half-plane-scaled", 512, 256);
    CHECK(acf_J(scaled.pair, 0.7) == doctest::Approx(acf_J(fine.pair, 0.7)).epsilon(1e-12));

    // A vanishing phase kills the functional.
    const auto r = log_radial_grid(64);
    const auto th = full_circle_grid(128);
    AdmissiblePair degen;
    degen.n = 2;
    degen.u1 = sample_field(2, r, th, [](double rr, double t) { return rr * pos(std::sin(t)); });
    degen.u2 = sample_field(2, r, th, [](double, double) { return 0.0; });
    validate_pair(degen);
    CHECK(acf_J(degen, 0.5) == 0.0);
    CHECK_THROWS_AS(gradient_energy_ratio(degen), DomainError);

    CHECK_THROWS_AS(acf_J(fine.pair, 2.0), DomainError);
    CHECK_THROWS_AS(acf_J(fine.pair, 0.0), DomainError);
}

TEST_CASE("wedge pair: closed-form J, log-derivative, and dC") {
    const CorpusEntry wedge = corpus_pair("wedge-unequal");
    CHECK(acf_J(wedge.pair, 0.5) == doctest::Approx(oracle::wedge_J_half).epsilon(1e-2));
    const DeficitTerms d = deficit_terms_2d(wedge.pair, 0.5);
    CHECK(d.dC == doctest::Approx(oracle::wedge_dC_half).epsilon(1e-2));
    CHECK(d.alpha[0] == doctest::Approx(0.8).epsilon(1e-3));
    CHECK(d.alpha[1] == doctest::Approx(4.0 / 3.0).epsilon(1e-3));

    // Homogeneous harmonic pair: dA and dB vanish up to quadrature consistency.
    const double tol = deficit_tol(512, 2, 0.5);
    CHECK(std::abs(d.dA) < tol);
    CHECK(std::abs(d.dB) < tol);

    // log J' = 4/(15 r): both derivative routes see it.
    const AcfTable table = acf_deficit_table(wedge.pair);
    for (const AcfRow& row : table.rows) {
        if (row.r < 0.3 || row.r > 0.9) continue;
        const double expect = 4.0 / (15.0 * row.r);
        CHECK(row.logJp_boundary == doctest::Approx(expect).epsilon(2e-2));
        CHECK(row.logJp_fd == doctest::Approx(expect).epsilon(2e-2));
    }
}

TEST_CASE("power-law pair hits the frozen dB anchor") {
    const AdmissiblePair p = make_pair_2d(
        512, 256,
        [](double r, double t) { return std::pow(r, 1.2) * pos(std::sin(t)); },
        [](double r, double t) { return std::pow(r, 1.2) * pos(-std::sin(t)); });
    const DeficitTerms d = deficit_terms_2d(p, 1.0);
    CHECK(d.dB_field[0] == doctest::Approx(oracle::powerlaw_dB_r1).epsilon(1e-3));
    CHECK(d.dB_field[1] == doctest::Approx(oracle::powerlaw_dB_r1).epsilon(1e-3));
    CHECK(d.certB == d.dB);
}

TEST_CASE("mode-2 pair realizes the eigengap certificate with equality") {
    const AdmissiblePair p = make_pair_2d(
        512, 256,
        [](double r, double t) { return r * pos(std::sin(t) + 0.3 * std::sin(2.0 * t)); },
        [](double r, double t) { return r * pos(-std::sin(t)); });
    const DeficitTerms d = deficit_terms_2d(p, 1.0);
    CHECK(d.dA_field[0] == doctest::Approx(oracle::mode2_dA_r1).epsilon(2e-3));
    // The trace is a pure first+second mode, so the gap bound is saturated.
    CHECK(d.certA == doctest::Approx(d.dA).epsilon(2e-2));
    // dB vanishes for the exactly 1-homogeneous field.
    CHECK(std::abs(d.dB) < deficit_tol(512, 2, 1.0));
}

TEST_CASE("deficit inequality holds across the subharmonic corpus") {
    for (const std::string& name : corpus_names()) {
        const int nt = name.find("3d") != std::string::npos ? 257 : 512;
        const int nr = name.find("3d") != std::string::npos ? 160 : 256;
        const CorpusEntry e = corpus_pair(name, nt, nr);
        if (!e.subharmonic) continue;
        const AcfTable table = acf_deficit_table(e.pair);
        INFO("corpus entry ", name);
        double prevJ = 0.0;
        for (const AcfRow& row : table.rows) {
            if (row.r >= 0.05) CHECK(row.J >= prevJ * (1.0 - 1e-6));
            prevJ = row.J;
            if (row.d.skipped || row.r < 0.1) continue;
            const double tol = deficit_tol(nt, e.pair.n, row.r);
            const double sum = row.d.dA + row.d.dB + row.d.dC;
            CHECK(row.logJp_boundary - sum >= -tol);
            CHECK(row.d.dB >= 0.0);
            CHECK(row.d.certA <= row.d.dA + tol);
            if (e.pair.n == 2) {
                CHECK(row.d.dC >= row.d.certC - 1e-9 * (1.0 + std::abs(row.d.certC)));
                CHECK(row.d.certC >= row.d.certC_weak - 1e-9);
            }
        }
    }
}

TEST_CASE("refinement shrinks the half-plane inequality violation by 2x or more") {
    const auto violation = [](int nt, int nr) {
        const CorpusEntry e = corpus_pair("half-plane", nt, nr);
        const AcfTable table = acf_deficit_table(e.pair);
        double worst = 0.0;
        for (const AcfRow& row : table.rows) {
            if (row.d.skipped || row.r < 0.25) continue;
            worst = std::max(worst,
                             row.d.dA + row.d.dB + row.d.dC - row.logJp_boundary);
        }
        return worst;
    };
    const double coarse = violation(256, 128);
    const double fine = violation(512, 256);
    CHECK(fine > 0.0);  // the discrete bias is real
    CHECK(fine <= 0.5 * coarse);
}

TEST_CASE("drift pairs: constant J, certified identities, no subharmonic claim") {
    for (const std::string& name : {std::string("drift-0.05"), std::string("drift-0.02")}) {
        const CorpusEntry e = corpus_pair(name);
        CHECK(!e.subharmonic);
        const AcfTable table = acf_deficit_table(e.pair);
        double lo = 1e300, hi = 0.0;
        for (const AcfRow& row : table.rows) {
            if (row.r < 0.1) continue;
            lo = std::min(lo, row.J);
            hi = std::max(hi, row.J);
            if (!row.d.skipped) {
                CHECK(row.d.certB == row.d.dB);
                CHECK(row.d.dB >= 0.0);
            }
        }
        CHECK(hi / lo - 1.0 < 5e-3);
    }
}

TEST_CASE("fd and boundary log-derivatives cross-validate") {
    const CorpusEntry e = corpus_pair("half-plane-rot-0.3");
    const AcfTable table = acf_deficit_table(e.pair);
    for (const AcfRow& row : table.rows) {
        if (row.r < 0.3 || row.r > 0.95) continue;
        CHECK(std::abs(row.logJp_fd - row.logJp_boundary) < 5e-3);
        CHECK(std::abs(row.logJp_boundary) < 5e-3);  // exact pair is monotone-flat
    }
}

TEST_CASE("half-space pair in three dimensions is deficit-free") {
    const CorpusEntry e = corpus_pair("half-space-3d", 257, 160);
    for (double r : {0.3, 0.6, 1.0}) {
        CHECK(acf_J(e.pair, r) == doctest::Approx(nb::pi * nb::pi).epsilon(1e-2));
        const DeficitTerms d = deficit_terms_nd_axisym(e.pair, r);
        const double tol = deficit_tol(257, 3, r);
        CHECK(std::abs(d.dA) < tol);
        CHECK(std::abs(d.dB) < tol);
        CHECK(std::abs(d.dC) < tol);
        CHECK(d.alpha[0] == doctest::Approx(1.0).epsilon(1e-3));
        CHECK(d.alpha[1] == doctest::Approx(1.0).epsilon(1e-3));
    }
    CHECK_THROWS_AS(deficit_terms_nd_axisym(corpus_pair("half-plane", 64, 32).pair, 0.5),
                    DomainError);
    CHECK_THROWS_AS(deficit_terms_2d(e.pair, 0.5), DomainError);
}

TEST_CASE("spherical cone pair matches its closed-form anchors") {
    const CorpusEntry e = corpus_pair("cap-pair-3d", 257, 160);
    CHECK(acf_J(e.pair, 1.0) == doctest::Approx(oracle::cap3d_J_r1).epsilon(1e-2));
    CHECK(acf_J(e.pair, 0.5) == doctest::Approx(oracle::cap3d_J_r05).epsilon(1e-2));
    const DeficitTerms d = deficit_terms_nd_axisym(e.pair, 0.5);
    CHECK(d.alpha[0] == doctest::Approx(oracle::cap3d_alpha_north).epsilon(2e-3));
    CHECK(d.alpha[1] == doctest::Approx(oracle::cap3d_alpha_south).epsilon(2e-3));
    CHECK(d.dC == doctest::Approx(oracle::cap3d_dC_r05).epsilon(1e-2));
    // The square-function certificate stays bounded and stable across radii.
    // Both dC and the square function scale like 1/r, so the measured constant
    // is radius-free for a cone pair.
    const DeficitTerms d2 = deficit_terms_nd_axisym(e.pair, 0.7);
    CHECK(d.certC > 0.0);
    CHECK(d.certC_ratio > 0.1);
    CHECK(d.certC_ratio < 10.0);
    CHECK(d2.certC_ratio == doctest::Approx(d.certC_ratio).epsilon(5e-2));
}

TEST_CASE("one-homogeneity functional: exact kernel and frozen power-law value") {
    const CorpusEntry hp = corpus_pair("half-plane");
    CHECK(one_homogeneity_error(hp.pair.u1, 0.5) == 0.0);
    const HomogeneityReport flat = one_homogeneity_report(hp.pair, 0.5);
    CHECK(!flat.applicable);

    const auto r = log_radial_grid(256);
    const auto th = full_circle_grid(512);
    const PolarField f = sample_field(
        2, r, th, [](double rr, double t) { return std::pow(rr, 1.1) * pos(std::sin(t)); });
    // Closed form of the misfit integral, checked against the frozen oracle
    // value at rho = 1/2 and evaluated at the actual grid node used.
    const auto closed = [](double rho) {
        return (nb::pi / 2.0) * ((1.0 - std::pow(rho, 4.0)) / 4.0 -
                                 2.0 * (1.0 - std::pow(rho, 4.1)) / 4.1 +
                                 (1.0 - std::pow(rho, 4.2)) / 4.2);
    };
    CHECK(closed(0.5) == doctest::Approx(oracle::onehomog_p11_rho05).epsilon(1e-12));
    double rho_node = r[0];
    for (double rr : r)
        if (std::abs(rr - 0.5) < std::abs(rho_node - 0.5)) rho_node = rr;
    CHECK(one_homogeneity_error(f, 0.5) == doctest::Approx(closed(rho_node)).epsilon(1e-6));

    AdmissiblePair p;
    p.n = 2;
    p.u1 = f;
    p.u2 = sample_field(2, r, th, [](double rr, double t) {
        return std::pow(rr, 1.1) * pos(-std::sin(t));
    });
    validate_pair(p);
    const HomogeneityReport rep = one_homogeneity_report(p, 0.5);
    CHECK(rep.applicable);  // J ~ r^{0.4} genuinely grows
    CHECK(rep.log_quotient == doctest::Approx(0.4 * std::log(1.0 / rho_node)).epsilon(1e-3));
    CHECK(rep.ratio[0] > 0.0);
    CHECK(rep.ratio[0] < 1.0);  // far below the estimate's ceiling
}

TEST_CASE("gradient energy ratio anchors") {
    const CorpusEntry hp = corpus_pair("half-plane");
    const GradientEnergyRatio g = gradient_energy_ratio(hp.pair);
    CHECK(g.j_quotient == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(g.ratio[0] == doctest::Approx(4.0).epsilon(1e-3));
    CHECK(g.ratio[1] == doctest::Approx(4.0).epsilon(1e-3));

    const CorpusEntry sc = corpus_pair("half-plane-scaled");
    const GradientEnergyRatio gs = gradient_energy_ratio(sc.pair);
    CHECK(gs.ratio[0] == doctest::Approx(g.ratio[0]).epsilon(1e-12));
    CHECK(gs.ratio[1] == doctest::Approx(g.ratio[1]).epsilon(1e-12));

    for (const std::string& name : corpus_names()) {
        const int nt = name.find("3d") != std::string::npos ? 257 : 512;
        const CorpusEntry e = corpus_pair(name, nt, 160);
        const GradientEnergyRatio ge = gradient_energy_ratio(e.pair);
        INFO("corpus entry ", name);
        CHECK(ge.ratio[0] > 0.0);
        CHECK(ge.ratio[0] < 100.0);
        CHECK(ge.ratio[1] > 0.0);
        CHECK(ge.ratio[1] < 100.0);
    }
}

TEST_CASE("characteristic constant closed forms") {
    for (int n : {2, 3, 4}) CHECK(characteristic_constant(n, n - 1.0, 1.0) == 1.0);
    CHECK(characteristic_constant(3, 6.0, 1.0) == 2.0);
    CHECK(characteristic_constant(4, 0.0, 1.0) == 0.0);
    CHECK(characteristic_constant(2, 4.0, 0.5) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(characteristic_constant(1, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(characteristic_constant(3, -1.0, 1.0), DomainError);
    CHECK_THROWS_AS(characteristic_constant(3, 1.0, 0.0), DomainError);
}

TEST_CASE("alpha-hat profile: normalization, anchors, convexity bound") {
    CHECK(alpha_hat(3, 0.5) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(alpha_hat(3, 0.25) == doctest::Approx(oracle::alphahat_quarter).epsilon(1e-8));
    CHECK(alpha_hat(3, 0.3) > alpha_hat(3, 0.5));
    CHECK(alpha_hat(3, 0.5) > alpha_hat(3, 0.7));
    CHECK(std::abs(delta_hat(3, 0.0)) < 1e-8);  // zero up to the eigenvalue solver
    CHECK(delta_hat(3, 0.1) == doctest::Approx(delta_hat(3, -0.1)).epsilon(1e-12));
    CHECK_THROWS_AS(alpha_hat(2, 0.5), DomainError);

    std::vector<double> grid;
    for (int k = 0; k <= 20; ++k) grid.push_back(0.3 + 0.02 * k);
    const AlphaHatProfile prof = alpha_hat_profile(3, grid);
    CHECK(!prof.clamped);
    CHECK(prof.c_est == doctest::Approx(oracle::alphahat_c_est).epsilon(1e-3));
    for (double h : {0.05, 0.1, 0.15, 0.2})
        CHECK(delta_hat(3, h) >= prof.c_est * h * h * (1.0 - 1e-6));

    const AlphaHatProfile clamped = alpha_hat_profile(3, {0.0005, 0.5});
    CHECK(clamped.clamped);

    // Quadratic-vs-quartic separation: the second difference at 2h is at
    // least 4x the one at h (convexity of the profile).
    CHECK(delta_hat(3, 0.2) >= 4.0 * delta_hat(3, 0.1) * (1.0 - 1e-6));
}
