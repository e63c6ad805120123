#include <doctest.h>

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "annulab/families.hpp"
#include "annulab/reversible.hpp"

using namespace annulab;

TEST_CASE("twist profiles evaluate as polynomials in y") {
    std::vector<double> omega{1.0, 2.0, 3.0};
    CHECK(twist_profile(omega, 0.0) == doctest::Approx(1.0));
    CHECK(twist_profile(omega, 0.5) == doctest::Approx(2.75));
    CHECK(twist_profile(omega, 1.0) == doctest::Approx(6.0));
    CHECK(twist_profile_deriv(omega, 0.5) == doctest::Approx(5.0));
    CHECK(twist_profile_deriv({0.7}, 0.3) == doctest::Approx(0.0));
}

TEST_CASE("builtin families have distinct names and consistent lifts") {
    std::vector<MapSpec> fams = builtin_families();
    REQUIRE(fams.size() >= 6);
    std::set<std::string> names;
    for (const MapSpec& map : fams) {
        names.insert(map.name);
        LiftCheckReport rep = check_lift_consistency(map, 300, 99);
        CHECK(rep.pass(1e-9));
    }
    CHECK(names.size() == fams.size());
}

TEST_CASE("lift consistency flags deck and boundary violations") {
    MapSpec broken_deck;
    broken_deck.name = "broken_deck";
    broken_deck.lift = [](const LiftedPoint& zt) {
        return LiftedPoint{zt.xt * 1.1, zt.y};
    };
    LiftCheckReport rep = check_lift_consistency(broken_deck, 200, 5);
    CHECK(rep.max_deck_dev > 0.05);
    CHECK(!rep.pass(1e-6));

    MapSpec overshoot;
    overshoot.name = "overshoot";
    overshoot.lift = [](const LiftedPoint& zt) {
        return LiftedPoint{zt.xt, 1.2 * zt.y};
    };
    LiftCheckReport rep2 = check_lift_consistency(overshoot, 200, 5);
    CHECK(rep2.max_y_overshoot > 0.1);
    CHECK(!rep2.pass(1e-6));

    MapSpec bad_inverse = make_rotation(0.3);
    bad_inverse.lift_inverse = [](const LiftedPoint& zt) {
        return LiftedPoint{zt.xt - 0.29, zt.y};
    };
    LiftCheckReport rep3 = check_lift_consistency(bad_inverse, 200, 5);
    CHECK(rep3.max_inverse_dev > 0.005);
}

TEST_CASE("kick flow reverses under time negation") {
    KickShape shape = default_kick_shape();
    REQUIRE(shape.cos_coeffs.size() == 2);
    CHECK(shape.cos_coeffs[0] == 0.0);
    CHECK(shape.cos_coeffs[1] == 1.0);
    CHECK(shape.sin_coeffs.empty());

    for (double eps : {0.05, 0.2}) {
        LiftedPoint z{0.3, 0.4};
        LiftedPoint w = kick_flow(shape, eps, 16, z);
        LiftedPoint back = kick_flow(shape, -eps, 16, w);
        CHECK(std::abs(back.xt - z.xt) < 1e-13);
        CHECK(std::abs(back.y - z.y) < 1e-13);
    }
}

TEST_CASE("kick flow fixes the boundary circles") {
    KickShape shape = default_kick_shape();
    for (double y : {0.0, 1.0}) {
        LiftedPoint z{0.37, y};
        LiftedPoint w = kick_flow(shape, 0.3, 16, z);
        CHECK(w.xt == doctest::Approx(z.xt).epsilon(1e-14));
        CHECK(w.y == y);
    }
}

TEST_CASE("kick flow converges at second order in the substep count") {
    KickShape shape{{0.2, 1.0}, {0.0, 0.4}};
    LiftedPoint z{0.21, 0.43};
    auto run = [&](int n) { return kick_flow(shape, 0.6, n, z); };
    auto dist = [](const LiftedPoint& a, const LiftedPoint& b) {
        return std::hypot(a.xt - b.xt, a.y - b.y);
    };
    LiftedPoint w16 = run(16), w64 = run(64), w256 = run(256);
    double coarse = dist(w16, w64);
    double fine = dist(w64, w256);
    CHECK(coarse < 1e-5);
    CHECK(fine > 0.0);
    CHECK(fine < coarse / 8.0);
}

TEST_CASE("split kick with a sin component loses reversibility, not area") {
    KickShape shape{{0.0, 1.0}, {0.0, 0.7}};
    MapSpec map = make_split_kicked_twist({0.0, 1.0}, 0.1, shape);
    CHECK(!map.reversible);
    CHECK(map.area_preserving);
    CHECK(!check_reversible(map, 300, 17).pass(1e-4));
    AreaCheckReport area = area_check(map, 5, 20000, 2718);
    CHECK(area.pass);
}

TEST_CASE("area check accepts the builtin maps and rejects a squeeze") {
    MapSpec good = make_split_kicked_twist({0.0, 1.0}, 0.1);
    AreaCheckReport rep = area_check(good, 5, 20000, 31415);
    CHECK(rep.pass);
    CHECK(rep.boxes.size() == 5);
    CHECK(rep.samples == 20000);

    MapSpec squeeze;
    squeeze.name = "squeeze";
    squeeze.lift = [](const LiftedPoint& zt) {
        return LiftedPoint{zt.xt, zt.y * zt.y * zt.y};
    };
    squeeze.lift_inverse = [](const LiftedPoint& zt) {
        return LiftedPoint{zt.xt, std::cbrt(zt.y)};
    };
    AreaCheckReport bad = area_check(squeeze, 8, 20000, 31415);
    CHECK(!bad.pass);
}

TEST_CASE("family round trip through the plain-data description") {
    MapSpec orig = make_split_kicked_twist({0.1, 0.9}, 0.07);
    MapSpec copy = make_map(orig.family);
    CHECK(copy.name == orig.name);
    CHECK(copy.reversible == orig.reversible);
    for (double x : {0.1, 0.6}) {
        for (double y : {0.2, 0.8}) {
            LiftedPoint a = orig.lift({x, y});
            LiftedPoint b = copy.lift({x, y});
            CHECK(a.xt == b.xt);
            CHECK(a.y == b.y);
        }
    }

    FamilySpec fam;
    fam.kind = FamilyKind::kicked_twist;
    fam.omega = {0.0, 1.0};
    fam.eps = 0.05;
    MapSpec rebuilt = make_map(fam);
    CHECK(!rebuilt.reversible);
    CHECK(check_lift_consistency(rebuilt, 200, 7).pass(1e-9));
    // the default shape is the standard cosine kick, so the kick acts
    LiftedPoint moved = rebuilt.lift({0.25, 0.5});
    LiftedPoint pure = make_twist({0.0, 1.0}).lift({0.25, 0.5});
    CHECK(std::abs(moved.y - pure.y) > 1e-4);
}
