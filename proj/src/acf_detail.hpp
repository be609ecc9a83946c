#pragma once

// Shared internals of the acf translation units. The staggered (midpoint)
// angular scheme used throughout keeps ring quadratures second order even
// across the support kinks; radial derivatives use positivity-aware stencils
// so the free boundary never gets smeared by a centered difference.

#include <vector>

#include "speclab/acf.hpp"

namespace speclab::acf::detail {

// Node radial derivatives du/dr, one value per sample. Nodes outside the
// support carry 0 (the field vanishes identically there). Stencils switch to
// one-sided second order at the domain ends and at free-boundary crossings.
std::vector<double> radial_derivative(const PolarField& f);

struct FieldRings {
    // Per-radius surface integrals over the slice circle/sphere:
    //   ring_grad_w = r^{2-n} int_{dB_r} |grad u|^2 ds   (the E_w' integrand)
    //   ring_tau_w  = r^{2-n} int (tangential part)      ring_rad_w analogous
    //   ring_grad / ring_u2 are unweighted (weight 1) versions.
    std::vector<double> ring_grad_w, ring_tau_w, ring_rad_w;
    std::vector<double> ring_grad, ring_u2;
    // Cumulative volume integrals up to each grid radius:
    //   Ew = int_{B_r} |grad u|^2 |x|^{2-n},  Eunw without the weight,
    //   M2 = int_{B_r} u^2.
    std::vector<double> Ew, Eunw, M2;
    std::vector<double> dr;  // node radial derivatives (row-major)
    double eps = 0.0;        // positivity threshold used
};

FieldRings compute_rings(const PolarField& f);

// Surface measure of the angular cell [theta_j, theta_{j+1}] midpoint on the
// slice at radius r, including the |S^{n-2}| factor for n >= 3.
double cell_weight(const PolarField& f, double r, int j);

// int_{dB_r} f ds with midpoint (staggered) values, f given at nodes.
double ring_integral(const PolarField& f, int i, const std::vector<double>& node_values);

// int_{dB_r} f ds with node-trapezoid weights (half weights at the polar
// endpoints for n >= 3); second order and exact for the discrete sine sums the
// stability layer relies on.
double ring_node_integral(const PolarField& f, int i, const std::vector<double>& node_values);

// Composite Simpson in log r of per-node ring values between grid indices
// [i0, i1]; used for one-shot volume integrals that need better than
// trapezoid accuracy.
double radial_integral(const std::vector<double>& r, const std::vector<double>& ring,
                       int i0, int i1);

int nearest_radius_index(const PolarField& f, double r);

// First Dirichlet eigenfunction sample of the longest arc, L2(dB_r)-normalized,
// evaluated at the field's angular nodes (zero off the arc).
std::vector<double> arc_eigenfunction(const PolarField& f, const ArcDecomposition& dec);

// Slice-cap first eigenfunction for axisymmetric fields, L2(dB_r)-normalized,
// at the field's angular nodes.
std::vector<double> cap_eigenfunction(const PolarField& f, const CapSlice& slice);

// Second Dirichlet eigenvalue among all arcs' sine modes (n = 2).
double arc_second_eigenvalue(const ArcDecomposition& dec);

}  // namespace speclab::acf::detail
