#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "annulab/map_spec.hpp"

namespace annulab {

struct HHState {
    double q1 = 0.0;
    double q2 = 0.0;
    double p1 = 0.0;
    double p2 = 0.0;
};

// H = (p1^2 + p2^2 + q1^2 + q2^2)/2 + q1^2 q2 - q2^3/3.
double hh_energy(const HHState& s);

// Gradient of H in (q1, q2, p1, p2) order.
std::array<double, 4> hh_grad(const HHState& s);

// rho(q1,q2,p1,p2) = (-q1, q2, p1, -p2), anti-symplectic time reversal.
HHState apply_rho(const HHState& s);

// sigma rotates (q1,q2) and (p1,p2) simultaneously by 2 pi / 3.
HHState apply_sigma(const HHState& s);

constexpr double kHHEscapeRadius = 5.0;

// One step of the fourth-order symmetric composition (triple jump over
// kick-drift-kick). Symplectic; conjugate to its inverse by rho.
HHState hh_step(const HHState& s, double dt);

// Fixed-step flow for time t (sign of t selects the direction); a shorter
// remainder step absorbs the non-integral part. Throws EscapeError when the
// phase-space norm leaves kHHEscapeRadius.
HHState hh_flow(const HHState& s, double t, double dt);

// States every `stride` steps, including the endpoints.
std::vector<HHState> hh_trajectory(const HHState& s, double t, double dt,
                                   long stride = 1);

// Max |H(s_t) - H(s_0)| along the flow, without storing the trajectory.
double hh_max_energy_drift(const HHState& s, double t, double dt);

struct Equilibrium {
    HHState state;
    double value = 0.0;
    double grad_norm = 0.0;
};

// All equilibria of the flow (Newton from a coarse grid, deduplicated),
// sorted by energy value then coordinates. The value set is {0, 1/6}.
std::vector<Equilibrium> critical_levels();

struct SectionPoint {
    double q2 = 0.0;
    double p2 = 0.0;
    double time = 0.0;             // crossing time along the trajectory
    double energy_residual = 0.0;  // |H - c| at the crossing
};

// p1^2 recovered from the energy constraint on the section q1 = 0.
double section_p1_squared(double c, double q2, double p2);

// On-shell state on the section (q1 = 0, p1 > 0). Throws DomainError when
// (q2, p2) is outside the admissible disk.
HHState section_state(double c, double q2, double p2);

// Successive crossings of q1 = 0 with p1 > 0, each refined by time bisection
// to 1e-12. Throws EvaluationError when the budget runs out early.
std::vector<SectionPoint> poincare_return(double c, const SectionPoint& x,
                                          long crossings, double dt = 1e-3,
                                          double t_budget = 1e4);

// q2-extent of the symmetry segment Fix(rho) on Sigma_c (p2 = 0, q1 = 0).
std::pair<double, double> hh_admissible_segment(double c);

struct HHOrbitRecord {
    double q2_start = 0.0;     // root on the symmetry segment
    long m = 0;                // crossing index where Fix(rho) is hit again
    double half_period = 0.0;
    double period = 0.0;
    double closure_residual = 0.0;
    bool rho_symmetric = false;
    double rho_residual = 0.0;
    bool sigma_symmetric = false;
    double sigma_residual = 0.0;
    double sigma_shift = 0.0;  // flow time realizing sigma as a shift
    std::vector<HHState> section_hits;  // q1 = 0 crossings over one period
};

// Root search over the symmetry segment: starting states u(q2) in Fix(rho)
// whose m-th section crossing (either sign of p1) lands back on Fix(rho)
// close up into rho-symmetric periodic orbits. sigma-symmetry is certified
// at flow level by time-shift matching.
std::vector<HHOrbitRecord> hh_symmetric_orbits(double c, long m_max,
                                               long resolution, double tol,
                                               double dt = 1e-3);

struct SectionAreaReport {
    struct Box {
        double q2_lo = 0.0, q2_hi = 0.0, p2_lo = 0.0, p2_hi = 0.0;
        double p_box = 0.0;    // MC mass of the box itself
        double p_image = 0.0;  // MC mass of the box under the return cloud
        double sigma = 0.0;    // pooled binomial deviation of the difference
        bool pass = false;
    };
    std::vector<Box> boxes;
    long samples = 0;
    long no_return = 0;  // cloud points without a crossing in budget
    bool pass = true;
};

// Monte Carlo check that the section return map preserves dq2 ^ dp2: for
// each random box, the direct box mass and the mass of the returned cloud
// in the box agree within 3 pooled binomial standard deviations.
SectionAreaReport hh_return_area_check(double c, long boxes, long samples_per_box,
                                       std::uint64_t seed, double dt = 0.02);

struct HHChart {
    double c = 0.0;
    double dt = 1e-3;
    double center_q2 = 0.0;
    double center_p2 = 0.0;
    double r_max = 0.0;       // chart radius in the scaled section coordinates
    double axis_scale = 1.0;  // (q2, p2) measured as ((q2-cq)/s, (p2-cp)*s)
    bool reversor_standard = false;  // chart conjugates rho to R(x,y)=(-x,y)
    MapSpec map;
};

// Annulus chart of the return map around a detected elliptic fixed point.
// Section coordinates are first rescaled symplectically so the linearized
// return map is a rigid rotation; x is then the angle around the center
// (lift tracked by continuous winding of the flow projection) and y the
// squared normalized radius, so the chart sends the induced section area to
// a constant multiple of dx ^ dy and its circles track the invariant
// ellipses. Images beyond the chart rim raise EvaluationError. With the
// center on p2 = 0, rho becomes the standard reflection R.
HHChart hh_annulus_chart(double c, double dt = 1e-3, double r_fraction = 0.8);

} // namespace annulab
