#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "annulab/errors.hpp"
#include "annulab/orbit_db.hpp"
#include "annulab/serialize.hpp"

using namespace annulab;

TEST_CASE("g17 formatting round-trips every double") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, 2.5e17, -0.0, 6.02e23,
                     0.30000000000000004}) {
        std::string s = fmt_g17(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
    CHECK(fmt_g17(0.5) == "0.5");
}

TEST_CASE("family descriptions round-trip and reject unknown keys") {
    FamilySpec fam;
    fam.kind = FamilyKind::split_kicked_twist;
    fam.omega = {0.0, 1.0, -0.25};
    fam.eps = 0.07;
    fam.kick = KickShape{{0.0, 0.5, 0.5}, {0.1}};
    fam.substeps = 32;
    Json j = family_to_json(fam);
    FamilySpec back = family_from_json(j);
    CHECK(back.kind == fam.kind);
    CHECK(back.omega == fam.omega);
    CHECK(back.eps == fam.eps);
    CHECK(back.kick.cos_coeffs == fam.kick.cos_coeffs);
    CHECK(back.kick.sin_coeffs == fam.kick.sin_coeffs);
    CHECK(back.substeps == fam.substeps);

    j["mystery"] = 1;
    CHECK_THROWS_AS(family_from_json(j), UsageError);
}

TEST_CASE("orbit records round-trip through JSON") {
    OrbitRecord rec;
    rec.points = {{0.125, 0.5}, {0.625, 0.5}};
    rec.period = 2;
    rec.rotation = make_rational(1, 2);
    rec.residual = 3.5e-13;
    rec.prime_certified = true;
    rec.symmetric = true;
    rec.family = "twist(0,1)";
    Json j = orbit_to_json(rec);
    OrbitRecord back = orbit_from_json(j);
    CHECK(back.points.size() == 2);
    CHECK(back.points[1].x == rec.points[1].x);
    CHECK(back.points[1].y == rec.points[1].y);
    CHECK(back.period == 2);
    CHECK(back.rotation == rec.rotation);
    CHECK(back.residual == rec.residual);
    CHECK(back.prime_certified);
    CHECK(back.symmetric);
    CHECK(!back.non_isolated);
    CHECK(back.family == rec.family);
}

TEST_CASE("symmetric orbit records keep crossings and permutation") {
    SymmetricOrbitRecord rec;
    rec.base.points = {{0.0, 0.3}, {0.5, 0.3}};
    rec.base.period = 2;
    rec.base.rotation = make_rational(1, 2);
    rec.base.symmetric = true;
    rec.base.family = "split_kicked_twist(0,1;eps=0.05)";
    rec.crossings = {{0, LineId::Y1}, {1, LineId::Y2}};
    rec.permutation = {0, 1};
    rec.degenerate = true;
    Json j = symmetric_orbit_to_json(rec);
    SymmetricOrbitRecord back = symmetric_orbit_from_json(j);
    CHECK(back.base.period == 2);
    CHECK(back.base.rotation == rec.base.rotation);
    REQUIRE(back.crossings.size() == 2);
    CHECK(back.crossings[0].first == 0);
    CHECK(back.crossings[0].second == LineId::Y1);
    CHECK(back.crossings[1].second == LineId::Y2);
    CHECK(back.permutation == rec.permutation);
    CHECK(back.degenerate);
}

TEST_CASE("experiment configs round-trip as stable text") {
    ExperimentConfig cfg;
    cfg.operation = "scan-t11";
    cfg.family.kind = FamilyKind::twist;
    cfg.family.omega = {0.1, 0.9};
    cfg.q_max = 5;
    cfg.n0 = 2;
    cfg.seed = 18446744073709551557ULL;  // needs the full uint64 range
    cfg.grid.nx = 6;
    cfg.grid.ny = 3;
    cfg.out_csv = "orbits.csv";

    std::string text = config_to_string(cfg);
    ExperimentConfig back = config_from_string(text);
    CHECK(config_to_string(back) == text);
    CHECK(back.operation == "scan-t11");
    CHECK(back.family.omega == cfg.family.omega);
    CHECK(back.q_max == 5);
    CHECK(back.seed == cfg.seed);
    CHECK(back.grid.nx == 6);
    CHECK(back.out_csv == "orbits.csv");

    Json j = config_to_json(cfg);
    j["not_a_field"] = true;
    CHECK_THROWS_AS(config_from_json(j), UsageError);
    CHECK_THROWS_AS(config_from_string("{\"operation\""), UsageError);
}

TEST_CASE("the orbit database dedups on append and answers queries") {
    namespace fs = std::filesystem;
    const std::string path =
        (fs::temp_directory_path() / "annulab_test_db.jsonl").string();
    fs::remove(path);

    OrbitDatabase db(path);
    CHECK(db.read_all().empty());

    OrbitRecord a;
    a.points = {{0.1, 0.25}, {0.43333333, 0.25}, {0.76666667, 0.25}};
    a.period = 3;
    a.rotation = make_rational(1, 3);
    a.residual = 1e-12;
    a.family = "twist(0,1)";

    OrbitRecord b;
    b.points = {{0.2, 0.5}, {0.7, 0.5}};
    b.period = 2;
    b.rotation = make_rational(1, 2);
    b.residual = 2e-12;
    b.family = "twist(0,1)";

    CHECK(db.append({orbit_to_json(a), orbit_to_json(b)}) == 2);
    CHECK(db.read_all().size() == 2);

    // exact duplicate and a near-duplicate inside the dedup tolerance
    OrbitRecord near_a = a;
    near_a.points[0].x += 2e-7;
    near_a.residual = 5e-13;
    CHECK(db.append({orbit_to_json(a)}) == 0);
    CHECK(db.append({orbit_to_json(near_a)}) == 0);

    // same orbit under a different family is a distinct row
    OrbitRecord c = a;
    c.family = "split_kicked_twist(0,1;eps=0.05)";
    CHECK(db.append({orbit_to_json(c)}) == 1);
    CHECK(db.read_all().size() == 3);

    OrbitDatabase::Query by_period;
    by_period.period = 3;
    CHECK(db.select(by_period).size() == 2);

    OrbitDatabase::Query by_rotation;
    by_rotation.rotation = "1/2";
    CHECK(db.select(by_rotation).size() == 1);

    OrbitDatabase::Query by_family;
    by_family.family_substring = "split";
    CHECK(db.select(by_family).size() == 1);

    OrbitDatabase::Query by_both;
    by_both.period = 3;
    by_both.family_substring = "twist";
    CHECK(db.select(by_both).size() == 2);

    fs::remove(path);
}

TEST_CASE("corrupt database lines are reported with their line number") {
    namespace fs = std::filesystem;
    const std::string path =
        (fs::temp_directory_path() / "annulab_corrupt_db.jsonl").string();
    {
        std::ofstream out(path);
        OrbitRecord a;
        a.points = {{0.4, 0.5}};
        a.period = 1;
        a.rotation = make_rational(0, 1);
        a.family = "rotation(0)";
        out << orbit_to_json(a).dump() << "\n";
        out << "{ this is not json\n";
    }
    OrbitDatabase db(path);
    try {
        db.read_all();
        FAIL("expected a parse failure");
    } catch (const UsageError& e) {
        CHECK(std::string(e.what()).find("2") != std::string::npos);
    }
    fs::remove(path);
}
