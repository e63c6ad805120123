#include <doctest.h>

#include <cmath>
#include <vector>

#include "annulab/errors.hpp"
#include "annulab/henon_heiles.hpp"
#include "annulab/reversible.hpp"

using namespace annulab;

namespace {

double state_dist(const HHState& a, const HHState& b) {
    return std::sqrt((a.q1 - b.q1) * (a.q1 - b.q1) + (a.q2 - b.q2) * (a.q2 - b.q2) +
                     (a.p1 - b.p1) * (a.p1 - b.p1) + (a.p2 - b.p2) * (a.p2 - b.p2));
}

} // namespace

TEST_CASE("energy and gradient closed forms") {
    CHECK(hh_energy({0.0, 1.0, 0.0, 0.0}) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(hh_energy({1.0, 0.0, 0.0, 0.0}) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(hh_energy({0.0, 0.0, 0.3, 0.4}) == doctest::Approx(0.125).epsilon(1e-15));

    HHState s{0.31, -0.22, 0.17, 0.41};
    std::array<double, 4> g = hh_grad(s);
    const double h = 1e-5;
    auto fd = [&](auto bump) {
        HHState a = s, b = s;
        bump(a, h);
        bump(b, -h);
        return (hh_energy(a) - hh_energy(b)) / (2.0 * h);
    };
    CHECK(std::abs(g[0] - fd([](HHState& t, double d) { t.q1 += d; })) < 1e-8);
    CHECK(std::abs(g[1] - fd([](HHState& t, double d) { t.q2 += d; })) < 1e-8);
    CHECK(std::abs(g[2] - fd([](HHState& t, double d) { t.p1 += d; })) < 1e-8);
    CHECK(std::abs(g[3] - fd([](HHState& t, double d) { t.p2 += d; })) < 1e-8);
}

TEST_CASE("the symmetries compose as a dihedral action on the energy level") {
    HHState s{0.31, -0.22, 0.17, 0.41};
    HHState rr = apply_rho(apply_rho(s));
    CHECK(rr.q1 == s.q1);
    CHECK(rr.q2 == s.q2);
    CHECK(rr.p1 == s.p1);
    CHECK(rr.p2 == s.p2);
    CHECK(hh_energy(apply_rho(s)) == hh_energy(s));

    HHState sss = apply_sigma(apply_sigma(apply_sigma(s)));
    CHECK(state_dist(sss, s) < 1e-14);
    CHECK(std::abs(hh_energy(apply_sigma(s)) - hh_energy(s)) < 1e-13);
}

TEST_CASE("the integrator converges at fourth order") {
    HHState s0 = section_state(0.125, 0.1, 0.05);
    HHState ref = hh_flow(s0, 1.0, 1e-5);
    double err8 = state_dist(hh_flow(s0, 1.0, 8e-3), ref);
    double err4 = state_dist(hh_flow(s0, 1.0, 4e-3), ref);
    CHECK(err8 < 1e-6);
    CHECK(err4 > 0.0);
    double ratio = err8 / err4;
    CHECK(ratio > 11.0);
    CHECK(ratio < 22.0);
}

TEST_CASE("energy drift stays near roundoff over long integrations") {
    HHState s0 = section_state(0.125, 0.1, 0.05);
    CHECK(hh_max_energy_drift(s0, 100.0, 1e-3) < 1e-11);
}

TEST_CASE("trajectories stride correctly and escapes throw") {
    HHState s0 = section_state(0.125, 0.1, 0.05);
    std::vector<HHState> traj = hh_trajectory(s0, 1.0, 1e-3, 100);
    REQUIRE(traj.size() == 11);
    CHECK(state_dist(traj.front(), s0) == 0.0);
    CHECK(state_dist(traj.back(), hh_flow(s0, 1.0, 1e-3)) == 0.0);

    HHState runaway{0.0, 2.5, 0.0, 1.0};
    CHECK_THROWS_AS(hh_flow(runaway, 50.0, 1e-3), EscapeError);
}

TEST_CASE("equilibria sit at the two critical values") {
    std::vector<Equilibrium> eq = critical_levels();
    REQUIRE(eq.size() == 4);
    const double s3 = std::sqrt(3.0) / 2.0;
    CHECK(eq[0].value == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(state_dist(eq[0].state, {0.0, 0.0, 0.0, 0.0}) < 1e-9);
    for (int i = 1; i < 4; ++i) CHECK(eq[i].value == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    CHECK(state_dist(eq[1].state, {-s3, -0.5, 0.0, 0.0}) < 1e-9);
    CHECK(state_dist(eq[2].state, {0.0, 1.0, 0.0, 0.0}) < 1e-9);
    CHECK(state_dist(eq[3].state, {s3, -0.5, 0.0, 0.0}) < 1e-9);
    for (const Equilibrium& e : eq) CHECK(e.grad_norm < 1e-10);
}

TEST_CASE("section states honor the energy constraint") {
    const double c = 0.125;
    HHState s = section_state(c, 0.1, 0.05);
    CHECK(s.q1 == 0.0);
    CHECK(s.p1 > 0.0);
    CHECK(std::abs(hh_energy(s) - c) < 1e-15);
    double expect = 2.0 * c - 0.05 * 0.05 - 0.1 * 0.1 + (2.0 / 3.0) * 0.001;
    CHECK(section_p1_squared(c, 0.1, 0.05) == doctest::Approx(expect).epsilon(1e-14));
    CHECK_THROWS_AS(section_state(c, 0.9, 0.0), DomainError);
    CHECK_THROWS_AS(section_state(c, 0.0, 0.6), DomainError);
}

TEST_CASE("return crossings are ordered, on shell, and inside the disk") {
    SectionPoint x;
    x.q2 = 0.1;
    x.p2 = 0.05;
    std::vector<SectionPoint> hits = poincare_return(0.125, x, 25);
    REQUIRE(hits.size() == 25);
    double prev = 0.0;
    for (const SectionPoint& h : hits) {
        CHECK(h.time > prev);
        prev = h.time;
        CHECK(h.energy_residual < 1e-9);
        CHECK(section_p1_squared(0.125, h.q2, h.p2) > 0.0);
    }
    CHECK_THROWS_AS(poincare_return(0.125, x, 5, 1e-3, 0.5), EvaluationError);
}

TEST_CASE("the symmetry segment endpoints solve the boundary equation") {
    const double c = 0.125;
    auto [lo, hi] = hh_admissible_segment(c);
    CHECK(lo < 0.0);
    CHECK(hi > 0.0);
    auto g = [&](double q2) { return 2.0 * c - q2 * q2 + (2.0 / 3.0) * q2 * q2 * q2; };
    CHECK(std::abs(g(lo)) < 1e-10);
    CHECK(std::abs(g(hi)) < 1e-10);

    // bisection oracle on each side
    auto bisect = [&](double a, double b) {
        double ga = g(a);
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (a + b), gm = g(mid);
            if ((gm < 0) == (ga < 0)) { a = mid; ga = gm; } else { b = mid; }
        }
        return 0.5 * (a + b);
    };
    CHECK(lo == doctest::Approx(bisect(-1.0, 0.0)).epsilon(1e-9));
    CHECK(hi == doctest::Approx(bisect(1.0, 0.0)).epsilon(1e-9));
    CHECK(section_p1_squared(c, 0.5 * (lo + hi), 0.0) > 0.0);
}

TEST_CASE("symmetric orbit roots close up under direct reintegration") {
    std::vector<HHOrbitRecord> recs = hh_symmetric_orbits(0.125, 2, 120, 1e-10);
    REQUIRE(!recs.empty());
    for (const HHOrbitRecord& rec : recs) {
        CHECK(rec.rho_symmetric);
        CHECK(rec.closure_residual < 1e-7);
        CHECK(rec.period == doctest::Approx(2.0 * rec.half_period).epsilon(1e-12));
        HHState start = section_state(0.125, rec.q2_start, 0.0);
        HHState endpoint = hh_flow(start, rec.period, 1e-3);
        CHECK(state_dist(endpoint, start) < 1e-6);
        CHECK(!rec.section_hits.empty());
    }
}

TEST_CASE("the annulus chart is a faithful reversible lift on its interior") {
    HHChart chart = hh_annulus_chart(0.125);
    CHECK(chart.c == 0.125);
    CHECK(chart.center_p2 == 0.0);
    CHECK(chart.reversor_standard);
    CHECK(chart.r_max > 0.01);
    CHECK(chart.axis_scale > 0.0);
    CHECK(chart.map.reversible);
    REQUIRE(chart.map.lift);
    REQUIRE(chart.map.has_inverse());

    // the normalization keeps small chart circles nearly invariant
    for (int k = 0; k < 8; ++k) {
        LiftedPoint fz = chart.map.lift({static_cast<double>(k) / 8.0, 0.02});
        CHECK(fz.y > 0.01);
        CHECK(fz.y < 0.04);
    }

    // the outer rim may leave the chart, so probe the interior directly
    for (double y : {0.02, 0.08, 0.15}) {
        for (double xt : {-1.3, 0.2, 0.8}) {
            LiftedPoint z{xt, y};
            LiftedPoint fz = chart.map.lift(z);
            CHECK(fz.y >= 0.0);
            CHECK(fz.y <= 1.0);

            LiftedPoint fTz = chart.map.lift({xt + 1.0, y});
            CHECK(std::abs(fTz.xt - (fz.xt + 1.0)) < 1e-12);
            CHECK(std::abs(fTz.y - fz.y) < 1e-12);

            LiftedPoint back = chart.map.lift_inverse(fz);
            CHECK(std::abs(back.xt - z.xt) < 1e-6);
            CHECK(std::abs(back.y - z.y) < 1e-6);

            // f(R z) = R(f^{-1} z) with R(x, y) = (-x, y)
            LiftedPoint lhs = chart.map.lift(apply_R_lift(z));
            LiftedPoint rhs = apply_R_lift(chart.map.lift_inverse(z));
            CHECK(std::abs(lhs.xt - rhs.xt) < 1e-6);
            CHECK(std::abs(lhs.y - rhs.y) < 1e-6);
        }
    }
}

TEST_CASE("the return map preserves section area in distribution") {
    SectionAreaReport rep = hh_return_area_check(0.125, 5, 2000, 424242);
    CHECK(rep.pass);
    CHECK(rep.boxes.size() == 5);
    CHECK(rep.no_return <= rep.samples / 500);
}
