#pragma once

#include <vector>

#include "annulab/map_spec.hpp"
#include "annulab/orbit_record.hpp"
#include "annulab/rational.hpp"
#include "annulab/rotation.hpp"

namespace annulab {

// Dedup tolerance for merging orbits found from different seeds (annulus
// metric on point sets).
constexpr double kOrbitDedupTol = 1e-6;

// True when the two records describe the same orbit: equal period and point
// sets matching within tol.
bool same_orbit(const OrbitRecord& a, const OrbitRecord& b,
                double tol = kOrbitDedupTol);

// Removes duplicates, keeping the record with the smaller residual (earlier
// list position wins ties). Idempotent.
std::vector<OrbitRecord> dedup_orbits(std::vector<OrbitRecord> records,
                                      double tol = kOrbitDedupTol);

// Newton search for roots of G(z) = f~^q(z) - T^p(z) from every seed;
// converged roots are certified (residual over the whole orbit, prime period,
// rotation number) and deduplicated. Seeds that fail to converge are dropped;
// singular Jacobians fall back to a 1-D solve in y with the x-coordinate
// frozen, and such orbits are flagged non-isolated.
std::vector<OrbitRecord> find_pq_orbit(const MapSpec& map, const Rational& target,
                                       const GridSpec& seeds, double tol);

// Smallest divisor l of k with f^l(z) within tol of z. Throws
// NotPeriodicError when f^k(z) itself misses z by more than tol.
long prime_period(const MapSpec& map, const AnnulusPoint& z, long k, double tol);

struct TargetResult {
    Rational target;
    std::vector<OrbitRecord> orbits;
    long failed_seeds = 0;
};

struct Theorem1Report {
    long n0 = 1;
    long q_max = 1;
    RotationInterval interval;
    bool degenerate_interval = false;  // all rotation numbers coincide; no
                                       // enumeration is possible in that case
    std::vector<TargetResult> targets;
    std::vector<OrbitRecord> all_orbits;  // dedup across targets, sorted

    long distinct_orbits() const { return static_cast<long>(all_orbits.size()); }
};

// Measures the rotation interval on the seed grid, enumerates irreducible
// p/q inside it with q <= q_max and gcd(q, n0) = 1, and runs find_pq_orbit
// per target. Periods are reported up to the q_max truncation only.
Theorem1Report theorem1_scan(const MapSpec& map, long n0, long q_max,
                             const GridSpec& seeds, double tol,
                             long n_max_rotation = 20000,
                             double rotation_tol = 1e-5);

} // namespace annulab
