#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "speclab/dtn.hpp"
#include "speclab/errors.hpp"
#include "speclab/spaceform.hpp"

// Internal helpers shared by the perturbed-domain translation units.

namespace speclab {
namespace fk_detail {

inline void check_planar(const SpaceForm& space) {
    if (space.m != 2)
        throw UnsupportedInput("perturbed-domain: only two-dimensional space forms "
                               "are supported");
}

// Basis scales of the L^2(boundary circle)-orthonormal harmonics.
inline double scale_mean(const SpaceForm& space, double rho) {
    return 1.0 / std::sqrt(2.0 * M_PI * space.sn(rho));
}
inline double scale_wave(const SpaceForm& space, double rho) {
    return 1.0 / std::sqrt(M_PI * space.sn(rho));
}

void validate_xi(const SpaceForm& space, double rho, const BoundaryPerturbation& xi);

// Primitives F(t) = int_0^t sn and G(t) = int_0^t sn^2 (closed forms).
inline double sn_primitive(const SpaceForm& space, double t) {
    switch (space.kind) {
    case Space::Sphere: return 1.0 - std::cos(t);
    case Space::Euclidean: return 0.5 * t * t;
    case Space::Hyperbolic: return std::cosh(t) - 1.0;
    }
    return 0.0;
}
inline double sn2_primitive(const SpaceForm& space, double t) {
    switch (space.kind) {
    case Space::Sphere: return 0.5 * (t - std::sin(t) * std::cos(t));
    case Space::Euclidean: return t * t * t / 3.0;
    case Space::Hyperbolic: return 0.5 * (std::sinh(t) * std::cosh(t) - t);
    }
    return 0.0;
}

// Fourth-order first derivative of samples on a uniform grid (>= 5 nodes).
std::vector<double> fd_derivative(const std::vector<double>& f, double dt);

// Linear interpolant of a radial profile sampled uniformly on [0, rho];
// evaluates to zero beyond rho.
struct RadialInterp {
    double rho = 0.0;
    double dt = 0.0;
    std::vector<double> values;

    double operator()(double s) const {
        if (s <= 0.0) return values.front();
        if (s >= rho) return 0.0;
        const double x = s / dt;
        const std::size_t i =
            std::min(static_cast<std::size_t>(x), values.size() - 2);
        const double f = x - static_cast<double>(i);
        return values[i] * (1.0 - f) + values[i + 1] * f;
    }
};

// Unit cap eigenfunction at spectral value lambda as a RadialInterp.
RadialInterp cap_interp(const SpaceForm& space, double rho, double lambda,
                        std::size_t n_fine);

// Perturbed boundary radius (1 + xi(theta)) rho, with validity checks.
double boundary_radius(const SpaceForm& space, double rho,
                       const BoundaryPerturbation& xi, double theta);

} // namespace fk_detail
} // namespace speclab
