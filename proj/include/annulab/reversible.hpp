#pragma once

#include <array>
#include <vector>

#include "annulab/map_spec.hpp"
#include "annulab/orbit_record.hpp"
#include "annulab/periodic.hpp"

namespace annulab {

// The reflection R(x,y) = (-x, y) on the annulus.
AnnulusPoint apply_R(const AnnulusPoint& z);

// The lift of R with axis over Y1: (xt, y) -> (-xt, y).
LiftedPoint apply_R_lift(const LiftedPoint& zt);

enum class LineId { Y1, Y2 };

// Fix(R) on the annulus: the vertical circles x = 0 (Y1) and x = 1/2 (Y2).
struct SymmetryLine {
    LineId id = LineId::Y1;

    double x_lift() const { return id == LineId::Y1 ? 0.0 : 0.5; }
    AnnulusPoint point(double y) const { return AnnulusPoint{x_lift(), y}; }
    const char* name() const { return id == LineId::Y1 ? "Y1" : "Y2"; }
};

inline std::array<SymmetryLine, 2> symmetry_lines() {
    return {SymmetryLine{LineId::Y1}, SymmetryLine{LineId::Y2}};
}

struct ReversibilityReport {
    double max_map_dev = 0.0;   // distance(f(R z), R(f^{-1} z)) over samples
    double max_lift_dev = 0.0;  // |f~(R~ z) - R~(f~^{-1} z)| over lifted samples
    long samples = 0;

    bool pass(double tol) const {
        return max_map_dev <= tol && max_lift_dev <= tol;
    }
};

// Samples the reversibility identity f o R = R o f^{-1} on the annulus and
// its lift form.
ReversibilityReport check_reversible(const MapSpec& map, long samples,
                                     std::uint64_t seed);

struct KangRoot {
    double y = 0.0;              // root of the line displacement d
    AnnulusPoint point;          // the line point (x_line, y)
    AnnulusPoint image;          // f(point), lies on the line again
    double displacement = 0.0;   // residual |d(y)| after refinement
    bool fixed = false;          // image.y == y within tol: a symmetric fixed point
};

struct KangReport {
    SymmetryLine line;
    std::vector<KangRoot> roots;              // all roots of d on the line
    std::vector<AnnulusPoint> fixed_points;   // the roots that are fixed points
    bool whole_line_fixed = false;            // degenerate: d vanishes along the line
    long resolution = 0;
};

// Samples the lifted displacement d(y) = p1(f~(x_line, y)) - x_line at
// `resolution` points, brackets sign changes, and refines each root by
// bisection. Roots whose image returns to the same height are symmetric
// fixed points; the others are symmetric 2-cycles on the line and stay
// listed without the fixed flag.
KangReport kang_fixed_points(const MapSpec& map, const SymmetryLine& line,
                             long resolution, double tol);

struct SymmetricOrbitRecord {
    OrbitRecord base;
    // crossing data: orbit index j and the line f^j(z) lies on
    std::vector<std::pair<long, LineId>> crossings;
    std::vector<long> permutation;  // R(points[i]) = points[permutation[i]]
    bool degenerate = false;        // from a whole-line-of-roots family
};

struct SymmetryCheck {
    bool symmetric = false;
    std::vector<long> permutation;
    double max_dev = 0.0;
};

// True iff R maps the orbit's point set onto itself within tol; the
// permutation realizes the matching.
SymmetryCheck is_symmetric_orbit(const OrbitRecord& orbit, double tol);

// Symmetry-line search: for each ordered line pair (Yi, Yj) and each
// m <= m_max, finds heights y with f^m on Yi landing on Yj; every root
// generates a symmetric periodic orbit of period dividing 2m, certified a
// posteriori.
std::vector<SymmetricOrbitRecord> symmetric_orbit_search(const MapSpec& map,
                                                         long m_max,
                                                         long resolution,
                                                         double tol);

struct TargetCoverage {
    Rational target;
    bool generic_found = false;    // theorem1_scan produced an orbit
    bool symmetric_found = false;  // a symmetric record has this rotation
};

struct Corollary14Report {
    long n0 = 1;
    long q_max = 1;
    RotationInterval interval;
    std::vector<SymmetricOrbitRecord> records;  // gcd(period, n0) = 1 only
    std::vector<TargetCoverage> coverage;
    long dropped_by_gcd = 0;

    bool covered() const {
        for (const TargetCoverage& tc : coverage)
            if (tc.generic_found && !tc.symmetric_found) return false;
        return true;
    }
};

// Runs symmetric_orbit_search with m_max = q_max, filters by
// gcd(period, n0) = 1, and cross-checks coverage against a theorem1_scan
// with the same parameters.
Corollary14Report corollary14_scan(const MapSpec& map, long n0, long q_max,
                                   double tol, const GridSpec& seeds,
                                   long resolution = 512);

} // namespace annulab
