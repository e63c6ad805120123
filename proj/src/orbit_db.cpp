#include "annulab/orbit_db.hpp"

#include <fstream>

#include "annulab/errors.hpp"
#include "annulab/periodic.hpp"

namespace annulab {

namespace {

// Orbit identity for dedup: same family, period, rotation, and point set
// within the shared orbit tolerance.
bool rows_match(const Json& a, const Json& b) {
    if (a.value("kind", "") != b.value("kind", "")) return false;
    if (a.value("family", "") != b.value("family", "")) return false;
    if (a.value("period", -1L) != b.value("period", -2L)) return false;
    if (a.value("rotation", "") != b.value("rotation", "")) return false;
    const Json& pa = a.at("points");
    const Json& pb = b.at("points");
    if (pa.size() != pb.size()) return false;
    std::vector<bool> used(pb.size(), false);
    for (const Json& p : pa) {
        AnnulusPoint zp{p.at(0).get<double>(), p.at(1).get<double>()};
        bool matched = false;
        for (std::size_t j = 0; j < pb.size(); ++j) {
            if (used[j]) continue;
            AnnulusPoint zq{pb[j].at(0).get<double>(), pb[j].at(1).get<double>()};
            if (annulus_dist(zp, zq) < kOrbitDedupTol) {
                used[j] = true;
                matched = true;
                break;
            }
        }
        if (!matched) return false;
    }
    return true;
}

} // namespace

std::vector<Json> OrbitDatabase::read_all() const {
    std::vector<Json> rows;
    std::ifstream in(path_);
    if (!in) return rows;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            rows.push_back(Json::parse(line));
        } catch (const nlohmann::json::exception& e) {
            throw UsageError("database " + path_ + " line " +
                             std::to_string(lineno) + ": " + e.what());
        }
    }
    return rows;
}

long OrbitDatabase::append(const std::vector<Json>& rows) {
    std::vector<Json> existing = read_all();
    std::ofstream out(path_, std::ios::app);
    if (!out) throw UsageError("cannot open database for append: " + path_);
    long written = 0;
    for (const Json& row : rows) {
        bool dup = false;
        for (const Json& have : existing) {
            if (rows_match(row, have)) {
                dup = true;
                break;
            }
        }
        if (dup) continue;
        out << row.dump() << "\n";
        existing.push_back(row);
        ++written;
    }
    return written;
}

std::vector<Json> OrbitDatabase::select(const Query& query) const {
    std::vector<Json> out;
    for (Json& row : read_all()) {
        if (query.period && row.value("period", -1L) != *query.period) continue;
        if (query.rotation && row.value("rotation", "") != *query.rotation) continue;
        if (!query.family_substring.empty() &&
            row.value("family", "").find(query.family_substring) == std::string::npos)
            continue;
        out.push_back(std::move(row));
    }
    return out;
}

} // namespace annulab
