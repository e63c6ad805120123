#include "annulab/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "annulab/errors.hpp"
#include "annulab/rational.hpp"

namespace annulab {

std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

// Strict object read: every present key must be consumed by the caller.
void require_keys(const Json& j, const std::set<std::string>& allowed,
                  const std::string& what) {
    if (!j.is_object()) throw UsageError(what + ": expected a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (allowed.find(it.key()) == allowed.end())
            throw UsageError(what + ": unknown key '" + it.key() + "'");
}

std::vector<double> doubles_from(const Json& j, const std::string& what) {
    if (!j.is_array()) throw UsageError(what + ": expected an array");
    std::vector<double> out;
    for (const Json& v : j) out.push_back(v.get<double>());
    return out;
}

} // namespace

Json family_to_json(const FamilySpec& fam) {
    Json j;
    j["kind"] = family_kind_name(fam.kind);
    j["alpha"] = fam.alpha;
    j["omega"] = fam.omega;
    j["eps"] = fam.eps;
    j["cos_coeffs"] = fam.kick.cos_coeffs;
    j["sin_coeffs"] = fam.kick.sin_coeffs;
    j["substeps"] = fam.substeps;
    return j;
}

FamilySpec family_from_json(const Json& j) {
    require_keys(j, {"kind", "alpha", "omega", "eps", "cos_coeffs", "sin_coeffs",
                     "substeps"},
                 "family");
    FamilySpec fam;
    fam.kind = family_kind_from_name(j.at("kind").get<std::string>());
    if (j.contains("alpha")) fam.alpha = j.at("alpha").get<double>();
    if (j.contains("omega")) fam.omega = doubles_from(j.at("omega"), "family.omega");
    if (j.contains("eps")) fam.eps = j.at("eps").get<double>();
    if (j.contains("cos_coeffs"))
        fam.kick.cos_coeffs = doubles_from(j.at("cos_coeffs"), "family.cos_coeffs");
    if (j.contains("sin_coeffs"))
        fam.kick.sin_coeffs = doubles_from(j.at("sin_coeffs"), "family.sin_coeffs");
    if (j.contains("substeps")) fam.substeps = j.at("substeps").get<int>();
    return fam;
}

Json grid_to_json(const GridSpec& grid) {
    Json j;
    j["nx"] = grid.nx;
    j["ny"] = grid.ny;
    j["x_min"] = grid.x_min;
    j["x_max"] = grid.x_max;
    j["y_min"] = grid.y_min;
    j["y_max"] = grid.y_max;
    return j;
}

GridSpec grid_from_json(const Json& j) {
    require_keys(j, {"nx", "ny", "x_min", "x_max", "y_min", "y_max"}, "grid");
    GridSpec grid;
    if (j.contains("nx")) grid.nx = j.at("nx").get<int>();
    if (j.contains("ny")) grid.ny = j.at("ny").get<int>();
    if (j.contains("x_min")) grid.x_min = j.at("x_min").get<double>();
    if (j.contains("x_max")) grid.x_max = j.at("x_max").get<double>();
    if (j.contains("y_min")) grid.y_min = j.at("y_min").get<double>();
    if (j.contains("y_max")) grid.y_max = j.at("y_max").get<double>();
    return grid;
}

Json orbit_to_json(const OrbitRecord& rec) {
    Json j;
    j["kind"] = "orbit";
    j["family"] = rec.family;
    j["period"] = rec.period;
    j["rotation"] = rec.rotation.str();
    Json pts = Json::array();
    for (const AnnulusPoint& p : rec.points) pts.push_back(Json::array({p.x, p.y}));
    j["points"] = pts;
    j["residual"] = rec.residual;
    j["prime_certified"] = rec.prime_certified;
    j["symmetric"] = rec.symmetric;
    j["non_isolated"] = rec.non_isolated;
    return j;
}

OrbitRecord orbit_from_json(const Json& j) {
    require_keys(j,
                 {"kind", "family", "period", "rotation", "points", "residual",
                  "prime_certified", "symmetric", "non_isolated"},
                 "orbit");
    OrbitRecord rec;
    rec.family = j.at("family").get<std::string>();
    rec.period = j.at("period").get<long>();
    rec.rotation = parse_rational(j.at("rotation").get<std::string>());
    for (const Json& p : j.at("points"))
        rec.points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    rec.residual = j.at("residual").get<double>();
    rec.prime_certified = j.at("prime_certified").get<bool>();
    rec.symmetric = j.at("symmetric").get<bool>();
    rec.non_isolated = j.at("non_isolated").get<bool>();
    return rec;
}

Json symmetric_orbit_to_json(const SymmetricOrbitRecord& rec) {
    Json j = orbit_to_json(rec.base);
    j["kind"] = "symmetric_orbit";
    Json crossings = Json::array();
    for (const auto& [idx, line] : rec.crossings)
        crossings.push_back(Json::array({idx, line == LineId::Y1 ? "Y1" : "Y2"}));
    j["crossings"] = crossings;
    j["permutation"] = rec.permutation;
    j["degenerate"] = rec.degenerate;
    return j;
}

SymmetricOrbitRecord symmetric_orbit_from_json(const Json& j) {
    require_keys(j,
                 {"kind", "family", "period", "rotation", "points", "residual",
                  "prime_certified", "symmetric", "non_isolated", "crossings",
                  "permutation", "degenerate"},
                 "symmetric_orbit");
    SymmetricOrbitRecord rec;
    Json base = j;
    base.erase("crossings");
    base.erase("permutation");
    base.erase("degenerate");
    base["kind"] = "orbit";
    rec.base = orbit_from_json(base);
    for (const Json& c : j.at("crossings")) {
        const std::string line = c.at(1).get<std::string>();
        if (line != "Y1" && line != "Y2")
            throw UsageError("symmetric_orbit: bad line name '" + line + "'");
        rec.crossings.emplace_back(c.at(0).get<long>(),
                                   line == "Y1" ? LineId::Y1 : LineId::Y2);
    }
    for (const Json& p : j.at("permutation")) rec.permutation.push_back(p.get<long>());
    rec.degenerate = j.at("degenerate").get<bool>();
    return rec;
}

Json config_to_json(const ExperimentConfig& cfg) {
    Json j;
    j["operation"] = cfg.operation;
    j["family"] = family_to_json(cfg.family);
    j["hh_chart"] = cfg.hh_chart;
    j["c"] = cfg.c;
    j["dt"] = cfg.dt;
    j["q2"] = cfg.q2;
    j["p2"] = cfg.p2;
    j["crossings"] = cfg.crossings;
    j["x"] = cfg.x;
    j["y"] = cfg.y;
    j["lo"] = cfg.lo;
    j["hi"] = cfg.hi;
    j["q_max"] = cfg.q_max;
    j["n0"] = cfg.n0;
    j["target"] = cfg.target;
    j["tol"] = cfg.tol;
    j["n_max"] = cfg.n_max;
    j["rotation_tol"] = cfg.rotation_tol;
    j["m_max"] = cfg.m_max;
    j["resolution"] = cfg.resolution;
    j["samples"] = cfg.samples;
    j["boxes"] = cfg.boxes;
    j["grid"] = grid_to_json(cfg.grid);
    j["seed"] = cfg.seed;
    j["out_records"] = cfg.out_records;
    j["out_csv"] = cfg.out_csv;
    j["db_path"] = cfg.db_path;
    j["suite"] = cfg.suite;
    j["repeat"] = cfg.repeat;
    return j;
}

ExperimentConfig config_from_json(const Json& j) {
    require_keys(j,
                 {"operation", "family", "hh_chart", "c", "dt", "q2", "p2",
                  "crossings", "x", "y", "lo", "hi", "q_max", "n0", "target",
                  "tol", "n_max", "rotation_tol", "m_max", "resolution",
                  "samples", "boxes", "grid", "seed", "out_records", "out_csv",
                  "db_path", "suite", "repeat"},
                 "config");
    ExperimentConfig cfg;
    if (j.contains("operation")) cfg.operation = j.at("operation").get<std::string>();
    if (j.contains("family")) cfg.family = family_from_json(j.at("family"));
    if (j.contains("hh_chart")) cfg.hh_chart = j.at("hh_chart").get<bool>();
    if (j.contains("c")) cfg.c = j.at("c").get<double>();
    if (j.contains("dt")) cfg.dt = j.at("dt").get<double>();
    if (j.contains("q2")) cfg.q2 = j.at("q2").get<double>();
    if (j.contains("p2")) cfg.p2 = j.at("p2").get<double>();
    if (j.contains("crossings")) cfg.crossings = j.at("crossings").get<long>();
    if (j.contains("x")) cfg.x = j.at("x").get<double>();
    if (j.contains("y")) cfg.y = j.at("y").get<double>();
    if (j.contains("lo")) cfg.lo = j.at("lo").get<double>();
    if (j.contains("hi")) cfg.hi = j.at("hi").get<double>();
    if (j.contains("q_max")) cfg.q_max = j.at("q_max").get<long>();
    if (j.contains("n0")) cfg.n0 = j.at("n0").get<long>();
    if (j.contains("target")) cfg.target = j.at("target").get<std::string>();
    if (j.contains("tol")) cfg.tol = j.at("tol").get<double>();
    if (j.contains("n_max")) cfg.n_max = j.at("n_max").get<long>();
    if (j.contains("rotation_tol"))
        cfg.rotation_tol = j.at("rotation_tol").get<double>();
    if (j.contains("m_max")) cfg.m_max = j.at("m_max").get<long>();
    if (j.contains("resolution")) cfg.resolution = j.at("resolution").get<long>();
    if (j.contains("samples")) cfg.samples = j.at("samples").get<long>();
    if (j.contains("boxes")) cfg.boxes = j.at("boxes").get<long>();
    if (j.contains("grid")) cfg.grid = grid_from_json(j.at("grid"));
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("out_records"))
        cfg.out_records = j.at("out_records").get<std::string>();
    if (j.contains("out_csv")) cfg.out_csv = j.at("out_csv").get<std::string>();
    if (j.contains("db_path")) cfg.db_path = j.at("db_path").get<std::string>();
    if (j.contains("suite")) cfg.suite = j.at("suite").get<std::string>();
    if (j.contains("repeat")) cfg.repeat = j.at("repeat").get<long>();
    return cfg;
}

std::string config_to_string(const ExperimentConfig& cfg) {
    return config_to_json(cfg).dump(2) + "\n";
}

ExperimentConfig config_from_string(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("config parse error: ") + e.what());
    }
    try {
        return config_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("config field error: ") + e.what());
    }
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return config_from_string(ss.str());
}

void save_config(const ExperimentConfig& cfg, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write config file: " + path);
    out << config_to_string(cfg);
}

} // namespace annulab
