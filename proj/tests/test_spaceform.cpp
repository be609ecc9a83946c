#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "speclab/errors.hpp"
#include "speclab/spaceform.hpp"

using namespace speclab;
namespace nb = std::numbers;

TEST_CASE("space names parse and roundtrip") {
    CHECK(parse_space("sphere") == Space::Sphere);
    CHECK(parse_space("euclidean") == Space::Euclidean);
    CHECK(parse_space("hyperbolic") == Space::Hyperbolic);
    for (Space s : {Space::Sphere, Space::Euclidean, Space::Hyperbolic})
        CHECK(parse_space(space_name(s)) == s);
    CHECK_THROWS_AS(parse_space("torus"), DomainError);
}

TEST_CASE("unit sphere areas") {
    CHECK(unit_sphere_area(2) == doctest::Approx(2 * nb::pi).epsilon(1e-15));
    CHECK(unit_sphere_area(3) == doctest::Approx(4 * nb::pi).epsilon(1e-15));
    CHECK(unit_sphere_area(4) == doctest::Approx(2 * nb::pi * nb::pi).epsilon(1e-15));
}

TEST_CASE("cap volumes match closed forms") {
    SpaceForm s2(Space::Sphere, 2);
    CHECK(cap_volume(s2, nb::pi / 2) == doctest::Approx(2 * nb::pi).epsilon(1e-13));
    CHECK(cap_volume(s2, nb::pi / 3) == doctest::Approx(2 * nb::pi * 0.5).epsilon(1e-13));

    SpaceForm e2(Space::Euclidean, 2);
    CHECK(cap_volume(e2, 0.7) == doctest::Approx(nb::pi * 0.49).epsilon(1e-13));
    SpaceForm e3(Space::Euclidean, 3);
    CHECK(cap_volume(e3, 2.0) == doctest::Approx(4.0 / 3.0 * nb::pi * 8.0).epsilon(1e-13));

    SpaceForm h2(Space::Hyperbolic, 2);
    CHECK(cap_volume(h2, 1.0) == doctest::Approx(2 * nb::pi * (std::cosh(1.0) - 1.0)).epsilon(1e-12));

    // sphere m=3: V(rho) = 2 pi^2 * (rho - sin rho cos rho) / pi ... use quadrature identity
    // |S^2| int_0^rho sin^2 = 4 pi (rho/2 - sin(2 rho)/4)
    SpaceForm s3(Space::Sphere, 3);
    double rho = 1.1;
    CHECK(cap_volume(s3, rho)
          == doctest::Approx(4 * nb::pi * (rho / 2 - std::sin(2 * rho) / 4)).epsilon(1e-12));
}

TEST_CASE("euclidean volume scales like rho^m") {
    for (int m : {2, 3, 4, 5}) {
        SpaceForm e(Space::Euclidean, m);
        double v1 = cap_volume(e, 1.0);
        CHECK(cap_volume(e, 2.0) == doctest::Approx(std::pow(2.0, m) * v1).epsilon(1e-12));
    }
}

TEST_CASE("radius_for_volume inverts cap_volume") {
    std::mt19937_64 rng(20260815);
    for (int trial = 0; trial < 40; ++trial) {
        int m = 2 + int(rng() % 3);
        Space kind = std::array{Space::Sphere, Space::Euclidean, Space::Hyperbolic}[rng() % 3];
        SpaceForm s(kind, m);
        double hi = (kind == Space::Sphere) ? nb::pi - 0.05 : 3.0;
        std::uniform_real_distribution<double> U(0.05, hi);
        double rho = U(rng);
        double v = cap_volume(s, rho);
        CHECK(radius_for_volume(s, v) == doctest::Approx(rho).epsilon(1e-10));
    }
}

TEST_CASE("radius_for_volume rejects impossible volumes") {
    SpaceForm s2(Space::Sphere, 2);
    CHECK_THROWS_AS(radius_for_volume(s2, 5 * nb::pi), DomainError);  // > |S^2| = 4 pi
    CHECK_THROWS_AS(radius_for_volume(s2, -1.0), DomainError);
    SpaceForm e2(Space::Euclidean, 2);
    CHECK_THROWS_AS(radius_for_volume(e2, 0.0), DomainError);
}

TEST_CASE("boundary areas") {
    SpaceForm s2(Space::Sphere, 2);
    CHECK(boundary_area(s2, nb::pi / 2) == doctest::Approx(2 * nb::pi).epsilon(1e-13));
    CHECK(boundary_area(s2, nb::pi / 3) == doctest::Approx(2 * nb::pi * std::sin(nb::pi / 3)).epsilon(1e-13));
    SpaceForm e3(Space::Euclidean, 3);
    CHECK(boundary_area(e3, 2.0) == doctest::Approx(16 * nb::pi).epsilon(1e-13));
}

TEST_CASE("mean curvature: values, sign, monotonicity") {
    SpaceForm s2(Space::Sphere, 2);
    CHECK(mean_curvature(s2, nb::pi / 2) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(mean_curvature(s2, nb::pi / 3) == doctest::Approx(1.0 / std::tan(nb::pi / 3)).epsilon(1e-13));
    CHECK(mean_curvature(s2, 2 * nb::pi / 3) < 0.0);   // past the hemisphere

    SpaceForm e3(Space::Euclidean, 3);
    CHECK(mean_curvature(e3, 0.5) == doctest::Approx(4.0).epsilon(1e-14));  // (m-1)/rho

    SpaceForm h2(Space::Hyperbolic, 2);
    CHECK(mean_curvature(h2, 1.0) == doctest::Approx(std::cosh(1.0) / std::sinh(1.0)).epsilon(1e-13));

    // decreasing in rho on every space form
    for (Space kind : {Space::Sphere, Space::Euclidean, Space::Hyperbolic}) {
        SpaceForm s(kind, 3);
        double prev = mean_curvature(s, 0.2);
        double hi = (kind == Space::Sphere) ? 2.9 : 3.0;
        for (double rho = 0.4; rho < hi; rho += 0.2) {
            double cur = mean_curvature(s, rho);
            CHECK(cur < prev);
            prev = cur;
        }
    }
}

TEST_CASE("radius validation") {
    SpaceForm s2(Space::Sphere, 2);
    CHECK_THROWS_AS(s2.clamp_radius(-0.1), DomainError);
    CHECK_THROWS_AS(s2.clamp_radius(nb::pi + 0.1), DomainError);
    CHECK(s2.clamp_radius(1e-12) == doctest::Approx(1e-8));
    CHECK(s2.clamp_radius(1.0) == 1.0);
    CHECK(s2.max_radius() == doctest::Approx(nb::pi));

    SpaceForm e2(Space::Euclidean, 2);
    CHECK(std::isinf(e2.max_radius()));
    CHECK_THROWS_AS(e2.clamp_radius(0.0), DomainError);
}

TEST_CASE("sn and curvature are consistent") {
    SpaceForm s(Space::Sphere, 2), e(Space::Euclidean, 2), h(Space::Hyperbolic, 2);
    CHECK(s.curvature() == 1.0);
    CHECK(e.curvature() == 0.0);
    CHECK(h.curvature() == -1.0);
    for (double phi : {0.3, 0.9, 1.4}) {
        CHECK(s.sn(phi) == doctest::Approx(std::sin(phi)).epsilon(1e-15));
        CHECK(e.sn(phi) == doctest::Approx(phi).epsilon(1e-15));
        CHECK(h.sn(phi) == doctest::Approx(std::sinh(phi)).epsilon(1e-15));
        // sn'' = -K sn
        double d2 = (s.sn(phi + 1e-5) - 2 * s.sn(phi) + s.sn(phi - 1e-5)) / 1e-10;
        CHECK(d2 == doctest::Approx(-s.sn(phi)).epsilon(1e-4));
    }
}

TEST_CASE("cap volume is strictly increasing in the radius") {
    std::mt19937_64 rng(77);
    for (Space kind : {Space::Sphere, Space::Euclidean, Space::Hyperbolic}) {
        for (int m : {2, 3, 4}) {
            SpaceForm s(kind, m);
            double hi = (kind == Space::Sphere) ? nb::pi - 0.02 : 4.0;
            std::uniform_real_distribution<double> U(0.02, hi);
            for (int t = 0; t < 10; ++t) {
                double a = U(rng), b = U(rng);
                if (a > b) std::swap(a, b);
                if (b - a < 1e-6) continue;
                CHECK(cap_volume(s, a) < cap_volume(s, b));
            }
        }
    }
}

TEST_CASE("CapGeometry::make bundles consistent values") {
    SpaceForm s(Space::Sphere, 3);
    auto g = CapGeometry::make(s, 1.0);
    CHECK(g.radius == 1.0);
    CHECK(g.volume == doctest::Approx(cap_volume(s, 1.0)));
    CHECK(g.boundary_area == doctest::Approx(boundary_area(s, 1.0)));
    CHECK(g.mean_curvature == doctest::Approx(mean_curvature(s, 1.0)));
}
