#include "speclab/spaceform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "speclab/errors.hpp"
#include "speclab/quad.hpp"
#include "speclab/roots.hpp"

namespace speclab {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kRadiusEps = 1e-8;
} // namespace

Space parse_space(const std::string& name) {
    if (name == "sphere") return Space::Sphere;
    if (name == "euclidean") return Space::Euclidean;
    if (name == "hyperbolic") return Space::Hyperbolic;
    throw DomainError("unknown space form '" + name + "' (expected sphere|euclidean|hyperbolic)");
}

const char* space_name(Space kind) {
    switch (kind) {
        case Space::Sphere: return "sphere";
        case Space::Euclidean: return "euclidean";
        case Space::Hyperbolic: return "hyperbolic";
    }
    return "?";
}

SpaceForm::SpaceForm(Space k, int dim) : kind(k), m(dim) {
    if (dim < 1) throw DomainError("SpaceForm: dimension must be positive");
}

double SpaceForm::curvature() const {
    switch (kind) {
        case Space::Sphere: return 1.0;
        case Space::Euclidean: return 0.0;
        case Space::Hyperbolic: return -1.0;
    }
    return 0.0;
}

double SpaceForm::sn(double phi) const {
    switch (kind) {
        case Space::Sphere: return std::sin(phi);
        case Space::Euclidean: return phi;
        case Space::Hyperbolic: return std::sinh(phi);
    }
    return 0.0;
}

double SpaceForm::sn_prime(double phi) const {
    switch (kind) {
        case Space::Sphere: return std::cos(phi);
        case Space::Euclidean: return 1.0;
        case Space::Hyperbolic: return std::cosh(phi);
    }
    return 0.0;
}

double SpaceForm::max_radius() const {
    return kind == Space::Sphere ? kPi : std::numeric_limits<double>::infinity();
}

double SpaceForm::clamp_radius(double rho) const {
    if (!(rho > 0.0)) throw DomainError("radius must be positive");
    if (!(rho < max_radius())) throw DomainError("radius exceeds the diameter of the space form");
    if (kind == Space::Sphere) return std::clamp(rho, kRadiusEps, kPi - kRadiusEps);
    return std::max(rho, kRadiusEps);
}

double unit_sphere_area(int m) {
    if (m < 1) throw DomainError("unit_sphere_area: dimension must be positive");
    // |S^{m-1}| = 2 pi^{m/2} / Gamma(m/2)
    return 2.0 * std::pow(kPi, 0.5 * m) / std::tgamma(0.5 * m);
}

double cap_volume(const SpaceForm& space, double rho) {
    rho = space.clamp_radius(rho);
    const int m = space.m;
    // Closed forms where they are cheap and exact.
    if (space.kind == Space::Euclidean)
        return unit_sphere_area(m) * std::pow(rho, m) / m;
    if (space.kind == Space::Sphere && m == 2) return 2.0 * kPi * (1.0 - std::cos(rho));
    double integral = integrate([&](double phi) { return std::pow(space.sn(phi), m - 1); },
                                0.0, rho, 1e-12);
    return unit_sphere_area(m) * integral;
}

double radius_for_volume(const SpaceForm& space, double v) {
    if (!(v > 0.0)) throw DomainError("radius_for_volume: volume must be positive");
    if (space.kind == Space::Sphere) {
        double total = cap_volume(space, kPi - kRadiusEps);
        if (!(v < total))
            throw DomainError("radius_for_volume: volume exceeds the total volume of the sphere");
        return brent([&](double r) { return cap_volume(space, r) - v; },
                     kRadiusEps, kPi - kRadiusEps, 1e-13);
    }
    // Monotone and unbounded: expand the bracket geometrically.
    double hi = 1.0;
    while (cap_volume(space, hi) < v) {
        hi *= 2.0;
        if (hi > 1e8) throw DomainError("radius_for_volume: volume too large to bracket");
    }
    return brent([&](double r) { return cap_volume(space, r) - v; }, kRadiusEps / 2, hi, 1e-13);
}

double boundary_area(const SpaceForm& space, double rho) {
    rho = space.clamp_radius(rho);
    return unit_sphere_area(space.m) * std::pow(space.sn(rho), space.m - 1);
}

double mean_curvature(const SpaceForm& space, double rho) {
    rho = space.clamp_radius(rho);
    return (space.m - 1) * space.sn_prime(rho) / space.sn(rho);
}

CapGeometry CapGeometry::make(const SpaceForm& space, double rho) {
    rho = space.clamp_radius(rho);
    return CapGeometry{space, rho, cap_volume(space, rho),
                       speclab::boundary_area(space, rho),
                       speclab::mean_curvature(space, rho)};
}

} // namespace speclab
