#include "f2f/expt/records.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "f2f/error.hpp"

namespace f2f::expt {

using Json = nlohmann::ordered_json;

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw std::logic_error("row width does not match the column count");
    rows.push_back(std::move(row));
}

double Table::number(std::size_t row, const std::string& column) const {
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (columns[c] != column) continue;
        const Cell& cell = rows.at(row)[c];
        if (const auto* i = std::get_if<long long>(&cell)) return static_cast<double>(*i);
        if (const auto* d = std::get_if<double>(&cell)) return *d;
        throw std::invalid_argument("column " + column + " is not numeric");
    }
    throw std::out_of_range("no column named " + column);
}

Table pulses_table(const std::vector<TrajectoryRecord>& records) {
    Table t;
    t.columns = {"trajectory", "stream", "pulse",   "time",     "phi",   "n1",    "n2",
                 "jumps1",     "jumps2", "requested", "p1_first", "mean_n", "abs_b", "arg_b"};
    bool fidelity = false;
    for (const auto& r : records) fidelity = fidelity || !r.gamma_fidelity.empty();
    if (fidelity) t.columns.push_back("gamma_fidelity");
    t.columns.push_back("exhausted");

    for (const auto& r : records) {
        const auto& traj = r.trajectory;
        for (std::size_t p = 0; p < traj.pulses.size(); ++p) {
            const auto& pr = traj.pulses[p];
            std::vector<Cell> row{static_cast<long long>(r.index),
                                  static_cast<long long>(traj.stream),
                                  static_cast<long long>(pr.index),
                                  pr.time,
                                  pr.phi,
                                  static_cast<long long>(pr.n1),
                                  static_cast<long long>(pr.n2),
                                  static_cast<long long>(pr.jumps1),
                                  static_cast<long long>(pr.jumps2),
                                  static_cast<long long>(pr.requested),
                                  pr.p1_first,
                                  pr.post.mean_n,
                                  pr.post.abs_b,
                                  pr.post.arg_b};
            if (fidelity) {
                const std::size_t k = p + 1;
                row.emplace_back(k < r.gamma_fidelity.size() ? r.gamma_fidelity[k]
                                                              : std::numeric_limits<double>::quiet_NaN());
            }
            row.emplace_back(static_cast<long long>(pr.exhausted ? 1 : 0));
            t.add_row(std::move(row));
        }
    }
    return t;
}

Table field_traces_table(const std::vector<TrajectoryRecord>& records) {
    Table t;
    t.columns = {"trajectory", "after_pulse", "time", "field"};
    for (const auto& r : records) {
        for (const auto& tr : r.trajectory.traces) {
            for (std::size_t i = 0; i < tr.times.size(); ++i) {
                t.add_row({static_cast<long long>(r.index), static_cast<long long>(tr.after_pulse), tr.times[i],
                           tr.field[i]});
            }
        }
    }
    return t;
}

namespace {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string csv_cell(const Cell& cell) {
    if (const auto* i = std::get_if<long long>(&cell)) return std::to_string(*i);
    if (const auto* d = std::get_if<double>(&cell)) return format_double(*d);
    const auto& s = std::get<std::string>(cell);
    // Quote strings that would otherwise read back as numbers.
    char* end = nullptr;
    errno = 0;
    std::strtod(s.c_str(), &end);
    const bool numeric_looking = !s.empty() && end == s.c_str() + s.size();
    if (numeric_looking) return "\"" + s + "\"";
    return csv_escape(s);
}

Json meta_json(const RunMeta& meta) {
    return {{"command", meta.command},
            {"fingerprint", meta.fingerprint},
            {"seed", meta.seed},
            {"version", meta.version},
            {"schema", meta.schema}};
}

Cell parse_unquoted(const std::string& s) {
    if (s.empty()) return std::string{};
    const char* begin = s.c_str();
    char* end = nullptr;
    errno = 0;
    const long long i = std::strtoll(begin, &end, 10);
    if (end == begin + s.size() && errno == 0) return i;
    errno = 0;
    const double d = std::strtod(begin, &end);
    if (end == begin + s.size()) return d;
    return s;
}

/// Splits CSV text into records of (value, was_quoted) fields.
std::vector<std::vector<std::pair<std::string, bool>>> split_csv(const std::string& text) {
    std::vector<std::vector<std::pair<std::string, bool>>> out;
    std::vector<std::pair<std::string, bool>> record;
    std::string field;
    bool quoted = false, in_quotes = false, at_line_start = true, comment = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (at_line_start) {
            at_line_start = false;
            comment = c == '#';
        }
        if (comment) {
            if (c == '\n') at_line_start = true;
            continue;
        }
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"') {
            in_quotes = true;
            quoted = true;
        } else if (c == ',') {
            record.emplace_back(std::move(field), quoted);
            field.clear();
            quoted = false;
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            record.emplace_back(std::move(field), quoted);
            field.clear();
            quoted = false;
            out.push_back(std::move(record));
            record.clear();
            at_line_start = true;
        } else {
            field += c;
        }
    }
    if (in_quotes) throw ConfigError("unterminated quoted CSV field");
    if (!field.empty() || quoted || !record.empty()) {
        record.emplace_back(std::move(field), quoted);
        out.push_back(std::move(record));
    }
    return out;
}

}  // namespace

std::string to_csv(const Table& table, const RunMeta& meta) {
    std::ostringstream os;
    os << "# f2f version=" << meta.version << " schema=" << meta.schema << " command=" << meta.command
       << " fingerprint=" << meta.fingerprint << " seed=" << meta.seed << "\n";
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c) os << ',';
        os << csv_escape(table.columns[c]);
    }
    os << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) os << ',';
            os << csv_cell(row[c]);
        }
        os << "\n";
    }
    return os.str();
}

std::string to_json(const Table& table, const RunMeta& meta) {
    Json j;
    j["meta"] = meta_json(meta);
    j["columns"] = table.columns;
    Json rows = Json::array();
    for (const auto& row : table.rows) {
        Json r = Json::array();
        for (const auto& cell : row) {
            if (const auto* i = std::get_if<long long>(&cell)) {
                r.push_back(*i);
            } else if (const auto* d = std::get_if<double>(&cell)) {
                if (std::isfinite(*d)) {
                    r.push_back(*d);
                } else {
                    r.push_back(nullptr);
                }
            } else {
                r.push_back(std::get<std::string>(cell));
            }
        }
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    return j.dump(1) + "\n";
}

Table parse_csv(const std::string& text) {
    auto records = split_csv(text);
    Table t;
    if (records.empty()) return t;
    for (auto& [name, quoted] : records.front()) t.columns.push_back(name);
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != t.columns.size()) throw ConfigError("CSV row width does not match the header");
        std::vector<Cell> row;
        for (auto& [value, quoted] : records[r]) {
            if (quoted) {
                row.emplace_back(value);
            } else {
                row.push_back(parse_unquoted(value));
            }
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table parse_json(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("table is not valid JSON: ") + e.what());
    }
    Table t;
    t.columns = j.at("columns").get<std::vector<std::string>>();
    for (const auto& r : j.at("rows")) {
        std::vector<Cell> row;
        for (const auto& v : r) {
            if (v.is_null()) {
                row.emplace_back(std::numeric_limits<double>::quiet_NaN());
            } else if (v.is_number_integer()) {
                row.emplace_back(v.get<long long>());
            } else if (v.is_number()) {
                row.emplace_back(v.get<double>());
            } else {
                row.emplace_back(v.get<std::string>());
            }
        }
        if (row.size() != t.columns.size()) throw ConfigError("JSON row width does not match the columns");
        t.rows.push_back(std::move(row));
    }
    return t;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << text;
    if (!out) throw ConfigError("failed writing " + path.string());
}

std::filesystem::path write_table(const std::filesystem::path& stem, const Table& table, const RunMeta& meta,
                                  const std::string& format) {
    std::filesystem::path path = stem;
    if (format == "csv") {
        path += ".csv";
        write_text(path, to_csv(table, meta));
    } else if (format == "json") {
        path += ".json";
        write_text(path, to_json(table, meta));
    } else {
        throw ConfigError("unknown output format " + format);
    }
    return path;
}

Table read_table(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return path.extension() == ".json" ? parse_json(buf.str()) : parse_csv(buf.str());
}

}  // namespace f2f::expt
