#pragma once

#include <optional>
#include <string>
#include <vector>

#include "annulab/serialize.hpp"

namespace annulab {

// Append-only line-delimited store of orbit records. Each line is one JSON
// object; records are deduplicated on insert against rows with the same
// family, period, and rotation using the periodic module's tolerance.
class OrbitDatabase {
  public:
    explicit OrbitDatabase(std::string path) : path_(std::move(path)) {}

    const std::string& path() const { return path_; }

    // Every row, in file order. A missing file reads as empty.
    std::vector<Json> read_all() const;

    // Appends the rows that are not already present; returns how many were
    // written.
    long append(const std::vector<Json>& rows);

    struct Query {
        std::optional<long> period;
        std::optional<std::string> rotation;  // "p/q"
        std::string family_substring;         // empty = match all
    };

    std::vector<Json> select(const Query& query) const;

  private:
    std::string path_;
};

} // namespace annulab
