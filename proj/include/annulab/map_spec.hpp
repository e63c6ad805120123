#pragma once

#include <functional>
#include <string>
#include <vector>

#include "annulab/errors.hpp"
#include "annulab/geometry.hpp"

namespace annulab {

enum class FamilyKind {
    rotation,
    twist,
    kicked_twist,
    split_kicked_twist,
    custom,
};

std::string family_kind_name(FamilyKind kind);
FamilyKind family_kind_from_name(const std::string& name);

// Kick shape c(x) = sum_k cos_coeffs[k] cos(2 pi k x) + sin_coeffs[k] sin(2 pi k x).
// Any nonzero sin coefficient breaks evenness in x and with it R-reversibility.
struct KickShape {
    std::vector<double> cos_coeffs;
    std::vector<double> sin_coeffs;

    bool even_in_x() const {
        for (double s : sin_coeffs)
            if (s != 0.0) return false;
        return true;
    }
};

// Plain-data description of a built-in family; make_map() turns it into a
// MapSpec and serialization round-trips it.
struct FamilySpec {
    FamilyKind kind = FamilyKind::rotation;
    double alpha = 0.0;                  // rotation angle
    std::vector<double> omega = {0.0};   // twist profile omega(y) = sum omega[k] y^k
    double eps = 0.0;                    // kick strength
    KickShape kick{{0.0, 1.0}, {}};      // kick shape, defaults to cos(2 pi x)
    int substeps = 16;                   // kick integrator substeps
};

// An annulus homeomorphism given through a lift to the strip R x [0,1].
// `lift` is the primary evaluator; the annulus map defaults to projection of
// the lift but families install an independent wrapped-coordinate evaluator
// so the projection axiom is a real check rather than a tautology.
struct MapSpec {
    std::string name;
    FamilySpec family;
    bool area_preserving = false;
    bool reversible = false;

    std::function<LiftedPoint(const LiftedPoint&)> lift;
    std::function<LiftedPoint(const LiftedPoint&)> lift_inverse;
    std::function<AnnulusPoint(const AnnulusPoint&)> map_direct;

    bool has_inverse() const { return static_cast<bool>(lift_inverse); }
};

// Single evaluations with finiteness checks.
LiftedPoint apply_lift(const MapSpec& spec, const LiftedPoint& zt);
LiftedPoint apply_lift_inverse(const MapSpec& spec, const LiftedPoint& zt);
AnnulusPoint apply_map(const MapSpec& spec, const AnnulusPoint& z);
AnnulusPoint apply_map_inverse(const MapSpec& spec, const AnnulusPoint& z);

// f~^n, negative n through the inverse.
LiftedPoint iterate_lift(const MapSpec& spec, LiftedPoint zt, long n);

// Orbit segment (z0, f~ z0, ..., f~^n z0), n+1 points.
std::vector<LiftedPoint> lift_orbit(const MapSpec& spec, const LiftedPoint& zt0, long n);
std::vector<AnnulusPoint> orbit(const MapSpec& spec, const AnnulusPoint& z0, long n);

struct LiftCheckReport {
    double max_deck_dev = 0.0;     // sup over samples of |f~(T z) - T f~(z)|
    double max_proj_dev = 0.0;     // annulus distance between pi(f~ z) and f(pi z)
    double max_inverse_dev = 0.0;  // |f~^{-1}(f~ z) - z|, 0 if no inverse
    double max_y_overshoot = 0.0;  // how far images leave [0,1] in y
    long samples = 0;

    double worst() const;
    bool pass(double tol) const { return worst() <= tol; }
};

// Samples lifted points with x in [-2,3), y in [0,1] (both boundary circles
// forced into the sample set) and measures the lift axioms.
LiftCheckReport check_lift_consistency(const MapSpec& spec, long n_samples,
                                       std::uint64_t seed);

} // namespace annulab
