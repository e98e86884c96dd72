#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "f2f/meas.hpp"

namespace f2f::expt {

/// Provenance carried by every output file.
struct RunMeta {
    std::string command;
    std::string fingerprint;
    std::uint64_t seed = 0;
    std::string version;
    std::string schema;
};

using Cell = std::variant<long long, double, std::string>;

/// A fixed-column table. Doubles are written with 17 significant digits;
/// NaN is "nan" in CSV and null in JSON.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row);
    /// Numeric value of a cell; strings throw.
    double number(std::size_t row, const std::string& column) const;
};

/// One simulated trajectory plus what was measured along it.
struct TrajectoryRecord {
    int index = 0;
    std::string fingerprint;
    std::uint64_t seed = 0;
    meas::Trajectory trajectory;
    /// Best-match Gamma fidelity after pulse p (entry 0 = initial state);
    /// empty unless tracked.
    std::vector<double> gamma_fidelity;
};

Table pulses_table(const std::vector<TrajectoryRecord>& records);
Table field_traces_table(const std::vector<TrajectoryRecord>& records);

std::string to_csv(const Table& table, const RunMeta& meta);
/// {"meta": {...}, "columns": [...], "rows": [[...], ...]}
std::string to_json(const Table& table, const RunMeta& meta);

/// Parses either serialization back. Integers written as such come back as
/// long long, everything else numeric as double.
Table parse_csv(const std::string& text);
Table parse_json(const std::string& text);

/// Writes `stem`.csv or `stem`.json and returns the path written.
std::filesystem::path write_table(const std::filesystem::path& stem, const Table& table, const RunMeta& meta,
                                  const std::string& format);

Table read_table(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace f2f::expt
