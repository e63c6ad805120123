#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "annulab/errors.hpp"
#include "annulab/families.hpp"
#include "annulab/rng.hpp"
#include "annulab/rotation.hpp"

using namespace annulab;

TEST_CASE("rigid rotation estimate is exact at recurrences") {
    for (const auto& [p, q] : {std::pair<long, long>{1, 3}, {2, 5}, {3, 7}}) {
        const double alpha = static_cast<double>(p) / static_cast<double>(q);
        MapSpec map = make_rotation(alpha);
        RotationEstimate est = rotation_estimate(map, {0.12, 0.5}, 10 * q, 1e-12);
        CHECK(est.converged);
        CHECK(std::abs(est.value - alpha) < 1e-12);
        CHECK(est.iterations <= 10 * q);
    }
}

TEST_CASE("golden rotation estimate converges slowly but surely") {
    const double alpha = 0.5 * (std::sqrt(5.0) - 1.0);
    MapSpec map = make_rotation(alpha);
    RotationEstimate est = rotation_estimate(map, {0.0, 0.5}, 20000, 1e-12);
    CHECK(std::abs(est.value - alpha) < 1e-4);
    CHECK(!est.diverged);
    CHECK(!est.recurrence_times.empty());
}

TEST_CASE("twist heights carry their own rotation number") {
    MapSpec map = make_twist({0.0, 1.0});
    for (double h : {0.21, 0.5, 0.77}) {
        RotationEstimate est = rotation_estimate(map, {0.4, h}, 10000, 1e-12);
        CHECK(std::abs(est.value - h) < 2.0 / 10000.0);
    }
}

TEST_CASE("rotation of a periodic orbit is read off the lift") {
    MapSpec map = make_twist({0.0, 1.0});
    OrbitRecord rec;
    rec.period = 5;
    rec.points = orbit(map, {0.0, 0.4}, 4);
    rec.points.resize(5);
    Rational rot = rotation_of_periodic(map, rec);
    CHECK(rot.p == 2);
    CHECK(rot.q == 5);

    OrbitRecord bad;
    bad.period = 4;  // y = 0.4 is not 4-periodic
    bad.points = orbit(map, {0.0, 0.4}, 3);
    bad.points.resize(4);
    CHECK_THROWS_AS(rotation_of_periodic(map, bad), NotPeriodicError);
}

TEST_CASE("rotation interval of a twist spans the profile range") {
    MapSpec map = make_twist({0.0, 1.0});
    GridSpec grid;
    grid.nx = 2;
    grid.ny = 5;
    grid.y_min = 0.2;
    grid.y_max = 0.8;
    RotationInterval iv = rotation_interval(map, grid, 5000, 1e-9);
    CHECK(iv.lo == doctest::Approx(0.2).epsilon(1e-3));
    CHECK(iv.hi == doctest::Approx(0.8).epsilon(1e-3));
    CHECK(iv.converged_seeds > 0);
    CHECK(!iv.degenerate());
    CHECK(iv.witness_hi.y == doctest::Approx(0.8));
}

TEST_CASE("rotation interval of a rigid rotation is degenerate") {
    MapSpec map = make_rotation(0.3);
    GridSpec grid;
    grid.nx = 2;
    grid.ny = 3;
    RotationInterval iv = rotation_interval(map, grid, 4000, 1e-10);
    CHECK(iv.degenerate(1e-8));
    CHECK(iv.lo == doctest::Approx(0.3).epsilon(1e-6));
}

TEST_CASE("window return statistics estimate the rotation number") {
    MapSpec map = make_twist({0.0, 1.0});
    WindowBox window;
    window.x_center = 0.0;
    window.x_halfwidth = 0.05;
    window.y_lo = 0.45;
    window.y_hi = 0.55;
    ReturnStats stats = return_rotation_estimate(map, window, 4000);
    CHECK(stats.recurrent);
    CHECK(!stats.m_values.empty());
    CHECK(std::abs(stats.ratio - 0.5) <= stats.error_bound + 1e-12);
    CHECK(stats.m_partial.size() == stats.m_values.size());
    // prefix sums are consistent
    double acc = 0.0;
    for (std::size_t i = 0; i < stats.m_values.size(); ++i) {
        acc += stats.m_values[i];
        CHECK(stats.m_partial[i] == doctest::Approx(acc));
    }
}

namespace {

// brute-force double loop, the independent enumeration oracle
std::vector<Rational> farey_oracle(double lo, double hi, long q_max, long n0) {
    std::vector<Rational> out;
    for (long q = 1; q <= q_max; ++q) {
        if (std::gcd(q, n0) != 1) continue;
        for (long p = static_cast<long>(std::floor(lo * q)) - 2;
             p <= static_cast<long>(std::ceil(hi * q)) + 2; ++p) {
            if (std::gcd(std::abs(p), q) != 1) continue;
            const double v = static_cast<double>(p) / static_cast<double>(q);
            if (lo < v && v < hi) out.push_back(Rational{p, q});
        }
    }
    std::sort(out.begin(), out.end(),
              [](const Rational& a, const Rational& b) { return a.value() < b.value(); });
    return out;
}

} // namespace

TEST_CASE("farey enumeration: frozen example") {
    std::vector<Rational> got = farey_enumerate(0.0, 1.0, 5, 2);
    REQUIRE(got.size() == 6);
    const char* expect[] = {"1/5", "1/3", "2/5", "3/5", "2/3", "4/5"};
    for (std::size_t i = 0; i < 6; ++i) CHECK(got[i].str() == expect[i]);
}

TEST_CASE("farey enumeration matches the brute-force oracle") {
    Rng rng(555);
    for (int i = 0; i < 60; ++i) {
        const double lo = rng.uniform(-1.5, 1.5);
        const double hi = lo + rng.uniform(0.005, 1.5);
        const long q_max = 1 + static_cast<long>(rng.uniform_index(25));
        const long n0 = 1 + static_cast<long>(rng.uniform_index(8));
        std::vector<Rational> got = farey_enumerate(lo, hi, q_max, n0);
        std::vector<Rational> want = farey_oracle(lo, hi, q_max, n0);
        REQUIRE(got.size() == want.size());
        for (std::size_t k = 0; k < got.size(); ++k) {
            CHECK(got[k].p == want[k].p);
            CHECK(got[k].q == want[k].q);
        }
    }
}

TEST_CASE("farey enumeration properties") {
    std::vector<Rational> list = farey_enumerate(0.1, 0.9, 12, 6);
    CHECK(!list.empty());
    for (std::size_t i = 0; i < list.size(); ++i) {
        CHECK(list[i].q <= 12);
        CHECK(std::gcd(list[i].q, 6L) == 1);
        CHECK(std::gcd(std::abs(list[i].p), list[i].q) == 1);
        CHECK(list[i].value() > 0.1);
        CHECK(list[i].value() < 0.9);
        if (i) CHECK(list[i - 1] < list[i]);
    }
    // endpoints are excluded: 1/2 sits strictly inside, 1/10 does not exist
    std::vector<Rational> tight = farey_enumerate(0.5, 0.6, 2, 2);
    CHECK(tight.empty());  // q = 2 killed by gcd, q = 1 has nothing inside
}
