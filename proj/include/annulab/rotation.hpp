#pragma once

#include <vector>

#include "annulab/geometry.hpp"
#include "annulab/map_spec.hpp"
#include "annulab/orbit_record.hpp"
#include "annulab/rational.hpp"

namespace annulab {

struct RotationEstimate {
    double value = 0.0;
    long iterations = 0;
    std::vector<long> recurrence_times;  // increasing; only the last 64 are kept
    double error_bound = 0.0;            // oscillation of the last two window estimates
    bool converged = false;
    bool diverged = false;
    AnnulusPoint seed;
};

// Average horizontal displacement of the lifted orbit, restricted to times at
// which the projected orbit returns to the ball of `recurrence_radius` around
// the seed. Converges (and stops early) once two successive recurrence-window
// estimates agree within tol; without any recurrence the plain quotient at
// n_max is reported non-converged.
RotationEstimate rotation_estimate(const MapSpec& map, const AnnulusPoint& z,
                                   long n_max, double tol,
                                   double recurrence_radius = 0.05);

// l/k for a certified k-periodic orbit, where l is the rounded lift
// displacement over one period. Throws NotPeriodicError when the rounding gap
// exceeds 0.1.
Rational rotation_of_periodic(const MapSpec& map, const OrbitRecord& orbit);

struct RotationInterval {
    double lo = 0.0;
    double hi = 0.0;
    AnnulusPoint witness_lo;
    AnnulusPoint witness_hi;
    long converged_seeds = 0;
    long excluded_seeds = 0;
    std::vector<RotationEstimate> estimates;  // one per seed, grid order

    bool degenerate(double tol = 1e-9) const { return hi - lo <= tol; }
};

// Hull of the converged estimates over the seed grid. Throws
// IntervalUndefinedError when no seed converges.
RotationInterval rotation_interval(const MapSpec& map, const GridSpec& seeds,
                                   long n_max, double tol);

// Window on the annulus; the x-extent must stay below 1/2 so lift
// displacements between returns are unambiguous.
struct WindowBox {
    double x_center = 0.0;
    double x_halfwidth = 0.05;
    double y_lo = 0.4;
    double y_hi = 0.6;

    bool contains(const AnnulusPoint& z) const {
        if (z.y < y_lo || z.y > y_hi) return false;
        return circle_dist(z.x, wrap_unit(x_center)) <= x_halfwidth;
    }
};

struct ReturnStats {
    WindowBox window;
    std::vector<double> m_values;   // lift displacement accumulated per return
    std::vector<long> tau_values;   // steps per return
    std::vector<double> m_partial;  // prefix sums of m_values
    std::vector<long> tau_partial;  // prefix sums of tau_values
    double ratio = 0.0;             // m_n / tau_n at the last return
    double error_bound = 0.0;
    long iterations = 0;
    bool recurrent = false;
};

// First-return accounting for the window's center seed: each re-entry of the
// projected orbit into the window records (m, tau); the running ratio of
// their sums estimates the rotation number.
ReturnStats return_rotation_estimate(const MapSpec& map, const WindowBox& window,
                                     long budget);

// All irreducible p/q with lo < p/q < hi (strict), q <= q_max and
// gcd(q, n0) = 1, ascending.
std::vector<Rational> farey_enumerate(double lo, double hi, long q_max, long n0);

} // namespace annulab
