#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "speclab/errors.hpp"
#include "speclab/radial_spectral.hpp"
#include "speclab/spaceform.hpp"

using namespace speclab;
namespace nb = std::numbers;

// Reference values frozen from tools/oracles/{disk_fd,cap_shoot,dtn_eta}.py,
// all computed with independent methods (finite differences, scipy DOP853
// shooting, Bessel closed forms) before this module was written.
namespace oracle {
constexpr double disk_lambda1 = 5.783185962946783;        // j01^2
constexpr double disk_lambda2 = 14.681970642123895;       // j11^2 (2D FD confirms ordering)
constexpr double sphere2_pi3 = 4.9360418654042;
constexpr double sphere2_2pi3 = 0.9633227586754;
constexpr double hyper2_rho1 = 6.1130818197117;
constexpr double hyper2_rho05 = 23.4651815190616;
constexpr double hemi_slope = 0.690988298942671;          // sqrt(3/(2 pi))
constexpr double disk_g2_slope = 1.209693323080875;       // |u'| j01 J2'(j01)/J2(j01)
constexpr double disk_g3_slope = 3.008742727048658;
constexpr double disk_E2 = 1.641284718827859;             // quadrature energy = |u'| g'(1)
constexpr double disk_E3 = 4.082194525313816;
constexpr double disk_u_slope = 1.356777529901379;        // j01/sqrt(pi)
} // namespace oracle

TEST_CASE("series identity: lambda = m gives f(t) = t") {
    for (int m : {2, 3, 4, 5}) {
        for (double t : {-0.9, -0.3, 0.0, 0.4, 0.77, 1.0}) {
            CHECK(legendre_series_eval(m, double(m), t, 40)
                  == doctest::Approx(t).epsilon(1e-15));
            CHECK(legendre_series_value(m, double(m), t)
                  == doctest::Approx(t).epsilon(1e-15));
        }
    }
}

TEST_CASE("series basics: t=1 value, hemisphere zero, convergence region") {
    CHECK(legendre_series_eval(3, 7.7, 1.0, 25) == 1.0);
    CHECK(legendre_series_value(2, 2.0, 0.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK_THROWS_AS(legendre_series_eval(2, 1.0, -1.0 - 1e-9, 10), DomainError);
    CHECK_THROWS_AS(legendre_series_value(2, 1.0, -1.5), DomainError);
}

TEST_CASE("series coefficients decay geometrically") {
    auto s = legendre_series(3, 7.3, -0.5);
    REQUIRE(s.coeffs.size() > 10);
    // once k^2 + (m-1)k > lambda the ratio |a_{k+1}/a_k| is below 1/2 + o(1):
    // check |a_k| 2^k stays bounded over the computed range
    double bound = 0.0;
    for (std::size_t k = 4; k < s.coeffs.size(); ++k)
        bound = std::max(bound, std::abs(s.coeffs[k]) * std::pow(2.0, double(k)));
    CHECK(bound < 1e3);
    for (std::size_t k = 8; k + 1 < s.coeffs.size(); ++k)
        if (s.coeffs[k] != 0.0)
            CHECK(std::abs(s.coeffs[k + 1] / s.coeffs[k]) < 0.52);
}

TEST_CASE("series value is Lipschitz in lambda") {
    for (double t : {0.0, 0.3, 0.8}) {
        double base = legendre_series_value(2, 3.0, t);
        for (double dl : {1e-3, 1e-4}) {
            double shifted = legendre_series_value(2, 3.0 + dl, t);
            CHECK(std::abs(shifted - base) < 2.0 * dl);   // slope is O(1) here
        }
    }
}

TEST_CASE("hemisphere eigenvalues are exactly the dimension") {
    for (int m : {2, 3, 4}) {
        SpaceForm s(Space::Sphere, m);
        auto e = cap_first_eigenvalue(s, nb::pi / 2);
        CHECK(e.lambda == doctest::Approx(double(m)).epsilon(1e-8));
    }
}

TEST_CASE("disk eigenvalue matches the finite-difference oracle") {
    SpaceForm e2(Space::Euclidean, 2);
    auto e = cap_first_eigenvalue(e2, 1.0);
    CHECK(e.lambda == doctest::Approx(oracle::disk_lambda1).epsilon(1e-9));
}

TEST_CASE("cap eigenvalues match shooting oracle values") {
    SpaceForm s2(Space::Sphere, 2);
    CHECK(cap_first_eigenvalue(s2, nb::pi / 3).lambda
          == doctest::Approx(oracle::sphere2_pi3).epsilon(1e-8));
    CHECK(cap_first_eigenvalue(s2, 2 * nb::pi / 3).lambda
          == doctest::Approx(oracle::sphere2_2pi3).epsilon(1e-8));

    SpaceForm h2(Space::Hyperbolic, 2);
    CHECK(cap_first_eigenvalue(h2, 1.0).lambda
          == doctest::Approx(oracle::hyper2_rho1).epsilon(1e-8));
    CHECK(cap_first_eigenvalue(h2, 0.5).lambda
          == doctest::Approx(oracle::hyper2_rho05).epsilon(1e-8));
}

TEST_CASE("m=3 closed forms: conjugation to a constant-coefficient problem") {
    // S^3: lambda_1(B_rho) = pi^2/rho^2 - 1; H^3: pi^2/rho^2 + 1; R^3: pi^2/rho^2.
    SpaceForm s3(Space::Sphere, 3), h3(Space::Hyperbolic, 3), e3(Space::Euclidean, 3);
    for (double rho : {nb::pi / 3, 1.0, nb::pi / 2, 2 * nb::pi / 3}) {
        CHECK(cap_first_eigenvalue(s3, rho).lambda
              == doctest::Approx(nb::pi * nb::pi / (rho * rho) - 1.0).epsilon(1e-9));
    }
    for (double rho : {0.5, 1.0, 2.0}) {
        CHECK(cap_first_eigenvalue(h3, rho).lambda
              == doctest::Approx(nb::pi * nb::pi / (rho * rho) + 1.0).epsilon(1e-9));
        CHECK(cap_first_eigenvalue(e3, rho).lambda
              == doctest::Approx(nb::pi * nb::pi / (rho * rho)).epsilon(1e-9));
    }
}

TEST_CASE("series root-find and shooting agree on the sphere") {
    for (int m : {2, 3, 4}) {
        SpaceForm s(Space::Sphere, m);
        for (double rho : {nb::pi / 6, nb::pi / 3, nb::pi / 2, 2 * nb::pi / 3}) {
            double via_series = cap_first_eigenvalue(s, rho).lambda;
            double via_shoot = cap_first_eigenvalue_shooting(s, rho);
            CHECK(std::abs(via_series - via_shoot)
                  <= 1e-8 * std::max(1.0, std::abs(via_series)));
        }
    }
}

TEST_CASE("eigen solution profile invariants") {
    for (auto [kind, m, rho] : {std::tuple{Space::Sphere, 2, nb::pi / 2},
                                std::tuple{Space::Euclidean, 3, 1.0},
                                std::tuple{Space::Hyperbolic, 2, 1.5}}) {
        SpaceForm s(kind, m);
        auto e = cap_first_eigenvalue(s, rho);
        REQUIRE(e.profile.size() == e.grid.nodes.size());
        CHECK(e.grid.nodes.back() == doctest::Approx(rho));
        CHECK(e.profile.back() == doctest::Approx(0.0).epsilon(1e-10));
        for (std::size_t i = 0; i + 1 < e.profile.size(); ++i)
            CHECK(e.profile[i] > 0.0);
        CHECK(e.boundary_slope < 0.0);

        // L2 normalization over the cap (trapezoid on the stored grid)
        double norm2 = 0.0;
        for (std::size_t i = 1; i < e.profile.size(); ++i) {
            double a = e.grid.nodes[i - 1], b = e.grid.nodes[i];
            double fa = e.profile[i - 1] * e.profile[i - 1] * std::pow(s.sn(a), m - 1);
            double fb = e.profile[i] * e.profile[i] * std::pow(s.sn(b), m - 1);
            norm2 += 0.5 * (fa + fb) * (b - a);
        }
        norm2 *= unit_sphere_area(m);
        CHECK(norm2 == doctest::Approx(1.0).epsilon(1e-4));
    }
}

TEST_CASE("hemisphere boundary slope matches the closed form") {
    SpaceForm s2(Space::Sphere, 2);
    auto e = cap_first_eigenvalue(s2, nb::pi / 2);
    CHECK(e.boundary_slope == doctest::Approx(-oracle::hemi_slope).epsilon(1e-8));
}

TEST_CASE("disk boundary slope matches the Bessel closed form") {
    SpaceForm e2(Space::Euclidean, 2);
    auto e = cap_first_eigenvalue(e2, 1.0);
    CHECK(e.boundary_slope == doctest::Approx(-oracle::disk_u_slope).epsilon(1e-8));
}

TEST_CASE("angular radial solution: degree-1 slope identity") {
    // ghat_1'(rho) = -H |u'(rho)| because g_1 = -u' exactly
    for (auto [kind, m, rho] : {std::tuple{Space::Sphere, 2, nb::pi / 3},
                                std::tuple{Space::Sphere, 3, 1.2},
                                std::tuple{Space::Euclidean, 2, 1.0},
                                std::tuple{Space::Hyperbolic, 2, 0.8}}) {
        SpaceForm s(kind, m);
        auto e = cap_first_eigenvalue(s, rho);
        double up = -e.boundary_slope;
        auto g = angular_radial_solution(s, rho, double(m - 1), e.lambda, up);
        double H = mean_curvature(s, rho);
        CHECK(g.slope_rho == doctest::Approx(-H * up).epsilon(1e-7));
    }
}

TEST_CASE("angular radial solution matches disk Bessel values") {
    SpaceForm e2(Space::Euclidean, 2);
    auto e = cap_first_eigenvalue(e2, 1.0);
    double up = -e.boundary_slope;
    auto g2 = angular_radial_solution(e2, 1.0, 4.0, e.lambda, up);   // degree 2: mu = 4
    auto g3 = angular_radial_solution(e2, 1.0, 9.0, e.lambda, up);
    CHECK(g2.slope_rho == doctest::Approx(oracle::disk_g2_slope).epsilon(1e-7));
    CHECK(g3.slope_rho == doctest::Approx(oracle::disk_g3_slope).epsilon(1e-7));
    // energy quadrature equals the boundary flux |u'| g'(rho)
    CHECK(g2.energy == doctest::Approx(oracle::disk_E2).epsilon(1e-7));
    CHECK(g3.energy == doctest::Approx(oracle::disk_E3).epsilon(1e-7));
}

TEST_CASE("hemisphere mode slopes follow the (k^2-1)/k pattern") {
    SpaceForm s2(Space::Sphere, 2);
    auto e = cap_first_eigenvalue(s2, nb::pi / 2);
    double up = -e.boundary_slope;
    for (int k : {1, 2, 3}) {
        auto g = angular_radial_solution(s2, nb::pi / 2, double(k * k), e.lambda, up);
        CHECK(g.slope_rho
              == doctest::Approx(up * double(k * k - 1) / double(k)).epsilon(1e-7));
    }
}

TEST_CASE("angular radial solution guards") {
    SpaceForm s2(Space::Sphere, 2);
    CHECK_THROWS_AS(angular_radial_solution(s2, 1.0, 0.0, 2.0), DomainError);
    CHECK_THROWS_AS(angular_radial_solution(s2, 1.0, -1.0, 2.0), DomainError);
    // positivity on the open interval
    auto e = cap_first_eigenvalue(s2, nb::pi / 3);
    auto g = angular_radial_solution(s2, nb::pi / 3, 1.0, e.lambda);
    for (std::size_t i = 1; i < g.profile.size(); ++i)
        CHECK(g.profile[i] > 0.0);
}

TEST_CASE("torsion: Euclidean closed form and disk value") {
    SpaceForm e2(Space::Euclidean, 2);
    auto t = torsion_ball(e2, 1.0);
    CHECK(t.tor_value == doctest::Approx(-nb::pi / 16).epsilon(1e-10));

    SpaceForm e3(Space::Euclidean, 3);
    auto t3 = torsion_ball(e3, 2.0);
    for (std::size_t i = 0; i < t3.grid.nodes.size(); ++i) {
        double r = t3.grid.nodes[i];
        CHECK(t3.profile[i] == doctest::Approx((4.0 - r * r) / 6.0).epsilon(1e-9));
    }
}

TEST_CASE("torsion: hemisphere closed form") {
    // u(phi) = log(1 + cos phi), tor = -pi (2 log 2 - 1)
    SpaceForm s2(Space::Sphere, 2);
    auto t = torsion_ball(s2, nb::pi / 2);
    for (std::size_t i = 0; i < t.grid.nodes.size(); ++i)
        CHECK(t.profile[i]
              == doctest::Approx(std::log1p(std::cos(t.grid.nodes[i]))).epsilon(1e-9));
    CHECK(t.tor_value == doctest::Approx(-nb::pi * (2 * std::log(2.0) - 1.0)).epsilon(1e-9));
}

TEST_CASE("torsion is negative and monotone under inclusion") {
    for (Space kind : {Space::Sphere, Space::Euclidean, Space::Hyperbolic}) {
        SpaceForm s(kind, 3);
        double prev = 0.0;
        double hi = (kind == Space::Sphere) ? 2.4 : 2.5;
        for (double rho = 0.4; rho < hi; rho += 0.4) {
            double tor = torsion_ball(s, rho).tor_value;
            CHECK(tor < 0.0);
            CHECK(tor < prev);  // decreases (more negative) as the ball grows
            prev = tor;
        }
    }
}

TEST_CASE("lambda_1 is monotone decreasing under inclusion") {
    SpaceForm s(Space::Sphere, 2);
    double prev = cap_first_eigenvalue(s, 0.5).lambda;
    for (double rho : {1.0, 1.8, 2.6}) {
        double cur = cap_first_eigenvalue(s, rho).lambda;
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("second eigenvalue: disk and hemisphere anchors") {
    SpaceForm e2(Space::Euclidean, 2);
    CHECK(cap_second_eigenvalue(e2, 1.0)
          == doctest::Approx(oracle::disk_lambda2).epsilon(1e-8));
    SpaceForm s2(Space::Sphere, 2);
    CHECK(cap_second_eigenvalue(s2, nb::pi / 2) == doctest::Approx(6.0).epsilon(1e-8));
    // gap sanity
    for (double rho : {0.8, 1.4}) {
        CHECK(cap_second_eigenvalue(s2, rho) > cap_first_eigenvalue(s2, rho).lambda);
    }
}

TEST_CASE("kj curves: sign, monotonicity, endpoint, ratio stability") {
    for (auto [kind, R] : {std::pair{Space::Sphere, nb::pi / 3},
                           std::pair{Space::Euclidean, 1.0}}) {
        SpaceForm s(kind, 2);
        std::vector<double> grid;
        for (int i = 1; i <= 12; ++i) grid.push_back(R * i / 12.0);
        auto kj = kj_deficit_curves(s, R, grid);
        REQUIRE(kj.r.size() == grid.size());
        CHECK(kj.f.back() == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(kj.g.back() == doctest::Approx(0.0).epsilon(1e-9));
        for (std::size_t i = 0; i + 1 < kj.r.size(); ++i) {
            CHECK(kj.f[i] > kj.f[i + 1]);
            CHECK(kj.g[i] > kj.g[i + 1]);
            CHECK(kj.f[i] > 0.0);
            CHECK(kj.g[i] > 0.0);
        }
        CHECK(kj.c_est > 0.0);
        CHECK(std::isfinite(kj.c_est));

        std::vector<double> fine;
        for (int i = 1; i <= 24; ++i) fine.push_back(R * i / 24.0);
        auto kj2 = kj_deficit_curves(s, R, fine);
        CHECK(kj2.c_est == doctest::Approx(kj.c_est).epsilon(0.01));
    }
}

TEST_CASE("radial grid factory") {
    auto g = RadialGrid::uniform(2.0, 10);
    REQUIRE(g.nodes.size() == 11);
    CHECK(g.nodes.front() == 0.0);
    CHECK(g.nodes.back() == 2.0);
    for (std::size_t i = 1; i < g.nodes.size(); ++i)
        CHECK(g.nodes[i] > g.nodes[i - 1]);
}
