#pragma once

#include <vector>

#include "annulab/map_spec.hpp"

namespace annulab {

// omega(y) = sum omega[k] y^k.
double twist_profile(const std::vector<double>& omega, double y);
double twist_profile_deriv(const std::vector<double>& omega, double y);

// Default kick shape c(x) = cos(2 pi x).
KickShape default_kick_shape();

// Time-eps flow of the Hamiltonian h(x,y) = c(x) V(y), V(y) = y^2 (1-y)^2,
// with respect to dx ^ dy, integrated by implicit midpoint in `substeps`
// fixed substeps. Symplectic, and conjugated to its inverse by R when c is
// even; V vanishes to second order at y = 0,1 so the boundary circles stay
// fixed pointwise.
LiftedPoint kick_flow(const KickShape& shape, double eps, int substeps, LiftedPoint z);

// Rigid rotation f~(x,y) = (x + alpha, y).
MapSpec make_rotation(double alpha);

// Pure twist f~(x,y) = (x + omega(y), y).
MapSpec make_twist(std::vector<double> omega);

// Kick composed with a twist, K_eps o T_omega. Area preserving but not
// R-reversible in general.
MapSpec make_kicked_twist(std::vector<double> omega, double eps,
                          KickShape shape = default_kick_shape(), int substeps = 16);

// Symmetric splitting K_{eps/2} o T_omega o K_{eps/2}. R-reversible exactly
// when the kick shape is even in x.
MapSpec make_split_kicked_twist(std::vector<double> omega, double eps,
                                KickShape shape = default_kick_shape(),
                                int substeps = 16);

// Rebuild a map from its plain-data description.
MapSpec make_map(const FamilySpec& fam);

struct AreaCheckReport {
    struct BoxStat {
        double x_lo = 0.0, x_hi = 0.0, y_lo = 0.0, y_hi = 0.0;
        double box_area = 0.0;    // exact area of the box
        double image_mass = 0.0;  // MC measure of its image under the map
        double sigma = 0.0;       // binomial standard deviation of image_mass
        double rel_dev = 0.0;     // |image_mass - box_area| / box_area
    };
    std::vector<BoxStat> boxes;
    long samples = 0;
    double max_rel_dev = 0.0;
    double max_abs_dev = 0.0;
    double confidence_radius = 0.0;  // largest 3-sigma radius over the boxes
    bool pass = true;                // every box within 3 sigma
};

// Monte Carlo area-preservation check: the measure of f(B) is estimated by
// sampling the annulus uniformly and testing f^{-1}(u) in B, then compared
// with the exact area of B. Requires an invertible map.
AreaCheckReport area_check(const MapSpec& map, long boxes, long samples_per_box,
                           std::uint64_t seed);

// The standard sample set used by tests and the verify suites.
std::vector<MapSpec> builtin_families();

} // namespace annulab
