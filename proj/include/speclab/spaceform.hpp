#pragma once

#include <string>

namespace speclab {

enum class Space { Sphere, Euclidean, Hyperbolic };

Space parse_space(const std::string& name); // "sphere" | "euclidean" | "hyperbolic"
const char* space_name(Space kind);

// A simply connected space form of dimension m (curvature +1, 0, -1).
struct SpaceForm {
    Space kind;
    int m;

    SpaceForm(Space k, int dim);

    double curvature() const; // +1, 0, -1

    // Metric factor of the geodesic polar metric dphi^2 + sn(phi)^2 dtheta^2:
    // sin, identity, sinh. sn(0)=0 and sn'(0)=1 for every kind.
    double sn(double phi) const;
    double sn_prime(double phi) const;

    // Largest admissible radius (pi on the sphere, unbounded otherwise).
    double max_radius() const;

    // Validates rho and nudges it into [eps, pi - eps] on the sphere (eps = 1e-8).
    // Throws DomainError when rho <= 0 or rho >= max_radius().
    double clamp_radius(double rho) const;
};

// (m-1)-measure of the unit sphere S^{m-1} in R^m.
double unit_sphere_area(int m);

double cap_volume(const SpaceForm& space, double rho);
double radius_for_volume(const SpaceForm& space, double v);
double boundary_area(const SpaceForm& space, double rho);

// Sum of principal curvatures of the geodesic sphere of radius rho,
// H = (m-1) sn'(rho)/sn(rho); positive for rho < pi/2 on the sphere.
double mean_curvature(const SpaceForm& space, double rho);

// Bundle of the scalar geometry of one cap B_rho.
struct CapGeometry {
    SpaceForm space;
    double radius;
    double volume;
    double boundary_area;
    double mean_curvature;

    static CapGeometry make(const SpaceForm& space, double rho);
};

} // namespace speclab
