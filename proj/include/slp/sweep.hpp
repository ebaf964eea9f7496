// sweep.hpp: tabular sweep results and their CSV / JSON / SVG forms, plus
// JSON for models and Kraus sets.
//
// Files carry the run config, its hash, the seed and the tool version. No
// timestamps are written, so identical config and seed give identical bytes.

#pragma once

#include "slp/channels.hpp"
#include "slp/models.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace slp {

inline constexpr const char* kToolVersion = "0.3.0";

using Cell = std::variant<double, std::int64_t, std::string>;
using Json = nlohmann::ordered_json;

struct SweepResult {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    Json config = Json::object();
    std::uint64_t seed = 0;
    Json extra = Json::object();  // tolerances, notes, discrepancy reports

    void add_row(std::vector<Cell> row);
    int column(const std::string& name) const;  // -1 if absent
    double number(std::size_t row, int col) const;

    // NaN cells are allowed only in rows whose "masked" column is 1.
    void check_flags() const;
};

// FNV-1a over the compact dump of the config.
std::string config_hash(const Json& config);

std::string format_double(double x);  // 17 significant digits, "inf"/"-inf"/"nan"

void write_csv(std::ostream& os, const SweepResult& r);
Json to_json(const SweepResult& r);

// Heat map of an omega grid (columns delta0, delta1, omega, masked) with the
// zero region outlined, plus an optional overlay path in (delta0, delta1).
void write_omega_svg(std::ostream& os, const SweepResult& r,
                     const std::vector<std::pair<double, double>>& overlay = {});

// One polyline per distinct value of series_col; non-finite y values are skipped.
void write_curve_svg(std::ostream& os, const SweepResult& r, const std::string& x_col, const std::string& y_col,
                     const std::string& series_col);

Json model_to_json(const SystemModel& m);
Json kraus_to_json(const KrausSet& ks);
KrausSet kraus_from_json(const Json& j);

}  // namespace slp
