#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "annulab/geometry.hpp"
#include "annulab/map_spec.hpp"
#include "annulab/orbit_record.hpp"
#include "annulab/reversible.hpp"

namespace annulab {

using Json = nlohmann::ordered_json;

// Fixed-width round-trip formatting for doubles in CSV and table output.
std::string fmt_g17(double v);

Json family_to_json(const FamilySpec& fam);
FamilySpec family_from_json(const Json& j);  // strict: unknown keys rejected

Json grid_to_json(const GridSpec& grid);
GridSpec grid_from_json(const Json& j);

Json orbit_to_json(const OrbitRecord& rec);
OrbitRecord orbit_from_json(const Json& j);

Json symmetric_orbit_to_json(const SymmetricOrbitRecord& rec);
SymmetricOrbitRecord symmetric_orbit_from_json(const Json& j);

// One experiment: the operation name, the system under study, every numeric
// parameter an operation might need, output paths, and the Monte Carlo seed.
// All fields are always serialized so the text form round-trips losslessly.
struct ExperimentConfig {
    std::string operation = "rotation";

    FamilySpec family;        // annulus system under study
    bool hh_chart = false;    // replace `family` by the section chart

    // Henon-Heiles parameters.
    double c = 0.125;
    double dt = 1e-3;
    double q2 = 0.0;
    double p2 = 0.0;
    long crossings = 100;

    // Annulus operation parameters.
    double x = 0.0;
    double y = 0.5;
    double lo = 0.0;
    double hi = 1.0;
    long q_max = 7;
    long n0 = 1;
    std::string target = "1/2";
    double tol = 1e-10;
    long n_max = 20000;
    double rotation_tol = 1e-5;
    long m_max = 5;
    long resolution = 512;
    long samples = 1000;
    long boxes = 20;
    GridSpec grid;

    std::uint64_t seed = 20260816;

    // Artifacts; empty string = do not write.
    std::string out_records;
    std::string out_csv;
    std::string db_path;

    // verify parameters.
    std::string suite = "all";
    long repeat = 1;
};

Json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const Json& j);  // strict

std::string config_to_string(const ExperimentConfig& cfg);
ExperimentConfig config_from_string(const std::string& text);

ExperimentConfig load_config(const std::string& path);
void save_config(const ExperimentConfig& cfg, const std::string& path);

} // namespace annulab
