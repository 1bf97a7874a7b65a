#include "relaxcycle/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <system_error>

namespace relaxcycle {

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

std::string format_int(long v) {
    return std::to_string(v);
}

bool parse_double(std::string_view text, double& out) {
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto res = std::from_chars(begin, end, out);
    return res.ec == std::errc() && res.ptr == end;
}

bool parse_int(std::string_view text, int& out) {
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto res = std::from_chars(begin, end, out);
    return res.ec == std::errc() && res.ptr == end;
}

std::vector<std::string> split_fields(std::string_view line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.emplace_back(line.substr(start));
            break;
        }
        fields.emplace_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

// strips one trailing CR so CRLF input parses like LF
std::string_view strip_cr(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
}

} // namespace

std::string to_csv_string(const CsvTable& table) {
    std::string out;
    auto emit_row = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out.push_back(',');
            out += cells[i];
        }
        out.push_back('\n');
    };
    emit_row(table.header);
    for (const auto& row : table.rows) emit_row(row);
    return out;
}

std::size_t write_csv(const CsvTable& table, std::ostream& dest) {
    const std::string text = to_csv_string(table);
    dest.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!dest) {
        throw IoError("write_csv: stream write failed");
    }
    return text.size();
}

std::size_t write_csv(const CsvTable& table, const std::filesystem::path& dest) {
    std::ofstream out(dest, std::ios::binary);
    if (!out) {
        throw IoError("write_csv: cannot open " + dest.string() + " for writing");
    }
    const std::string text = to_csv_string(table);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) {
        throw IoError("write_csv: write failed for " + dest.string());
    }
    return text.size();
}

CsvTable read_csv(std::istream& source) {
    CsvTable table;
    std::string line;
    bool have_header = false;
    while (std::getline(source, line)) {
        const std::string_view view = strip_cr(line);
        if (!have_header) {
            auto fields = split_fields(view);
            table.header.assign(fields.begin(), fields.end());
            have_header = true;
        } else {
            table.rows.push_back(split_fields(view));
        }
    }
    if (!have_header) {
        throw ValidationError("read_csv: input has no header line");
    }
    return table;
}

CsvTable read_csv_file(const std::filesystem::path& source) {
    std::ifstream in(source, std::ios::binary);
    if (!in) {
        throw IoError("read_csv: cannot open " + source.string());
    }
    return read_csv(in);
}

std::vector<SeriesRow> read_series_csv(std::istream& source) {
    std::string line;
    if (!std::getline(source, line)) {
        throw ValidationError("series: input is empty");
    }
    if (strip_cr(line) != "year,production,price") {
        throw ValidationError("series: line 1: expected header "
                              "'year,production,price', got '" +
                              std::string(strip_cr(line)) + "'");
    }

    std::vector<SeriesRow> rows;
    long line_no = 1;
    while (std::getline(source, line)) {
        ++line_no;
        const std::string_view view = strip_cr(line);
        if (view.empty()) continue;
        const auto where = "series: line " + format_int(line_no) + ": ";
        const auto fields = split_fields(view);
        if (fields.size() != 3) {
            throw ValidationError(where + "expected 3 fields, got " +
                                  format_int(static_cast<long>(fields.size())));
        }
        SeriesRow row{};
        if (!parse_int(fields[0], row.year)) {
            throw ValidationError(where + "bad year '" + fields[0] + "'");
        }
        if (!parse_double(fields[1], row.production) || !std::isfinite(row.production) ||
            row.production <= 0.0) {
            throw ValidationError(where + "production must be a positive finite number, "
                                          "got '" +
                                  fields[1] + "'");
        }
        if (!parse_double(fields[2], row.price) || !std::isfinite(row.price) ||
            row.price <= 0.0) {
            throw ValidationError(where + "price must be a positive finite number, got '" +
                                  fields[2] + "'");
        }
        if (!rows.empty() && row.year <= rows.back().year) {
            throw ValidationError(where + "years must be strictly increasing (" +
                                  format_int(row.year) + " after " +
                                  format_int(rows.back().year) + ")");
        }
        rows.push_back(row);
    }
    if (rows.empty()) {
        throw ValidationError("series: no data rows after the header");
    }
    return rows;
}

std::vector<SeriesRow> read_series_csv_file(const std::filesystem::path& source) {
    std::ifstream in(source, std::ios::binary);
    if (!in) {
        throw IoError("series: cannot open " + source.string());
    }
    return read_series_csv(in);
}

CsvTable to_table(const Trajectory& traj) {
    CsvTable table;
    const bool ne = traj.chart == Chart::ne;
    table.header = {"t", "n", ne ? "e" : "s"};
    table.rows.reserve(traj.times.size());
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        table.rows.push_back({format_double(traj.times[i]),
                              format_double(traj.states[i][0]),
                              format_double(traj.states[i][1])});
    }
    return table;
}

CsvTable to_table(const std::vector<DiagramRow>& rows) {
    CsvTable table;
    table.header = {"s", "n", "stability"};
    table.rows.reserve(rows.size());
    for (const auto& row : rows) {
        if (!row.error.empty()) {
            std::string msg = "error: " + row.error;
            for (char& c : msg) {
                if (c == ',' || c == '\n') c = ';';
            }
            table.rows.push_back({format_double(row.s), "", msg});
        } else {
            table.rows.push_back({format_double(row.s), format_double(row.n),
                                  row.stable ? "stable" : "unstable"});
        }
    }
    return table;
}

CsvTable to_table(const EquilibriumSet& set) {
    CsvTable table;
    table.header = {"s", "n", "stability"};
    table.rows.push_back({format_double(set.s), format_double(0.0),
                          set.zero_stable ? "stable" : "unstable"});
    for (const auto& eq : set.roots) {
        table.rows.push_back({format_double(set.s), format_double(eq.n),
                              eq.stable ? "stable" : "unstable"});
    }
    return table;
}

CsvTable to_table(const std::vector<SeriesRow>& rows) {
    CsvTable table;
    table.header = {"year", "production", "price"};
    table.rows.reserve(rows.size());
    for (const auto& row : rows) {
        table.rows.push_back({format_int(row.year), format_double(row.production),
                              format_double(row.price)});
    }
    return table;
}

CsvTable to_table(const std::vector<ToyStep>& steps) {
    CsvTable table;
    table.header = {"step", "demand", "price", "pace"};
    table.rows.reserve(steps.size());
    for (std::size_t i = 0; i < steps.size(); ++i) {
        table.rows.push_back({format_int(static_cast<long>(i)),
                              format_double(steps[i].demand),
                              format_double(steps[i].price), to_string(steps[i].pace)});
    }
    return table;
}

CsvTable to_table(const LimitCycle& cycle) {
    CsvTable table;
    table.header = {"t", "n", "e"};
    table.rows.reserve(cycle.orbit.size());
    for (const auto& s : cycle.orbit) {
        table.rows.push_back(
            {format_double(s.t), format_double(s.n), format_double(s.e)});
    }
    return table;
}

CsvTable to_table(const std::vector<PhaseSegment>& segments) {
    CsvTable table;
    table.header = {"kind", "begin", "count", "mean_speed_ratio"};
    table.rows.reserve(segments.size());
    for (const auto& seg : segments) {
        table.rows.push_back({to_string(seg.kind), format_int(static_cast<long>(seg.begin)),
                              format_int(static_cast<long>(seg.count)),
                              format_double(seg.mean_speed_ratio)});
    }
    return table;
}

CsvTable to_table(const PhasePolyline& poly) {
    CsvTable table;
    table.header = {"x_from", "y_from", "x_to", "y_to", "speed", "pace"};
    table.rows.reserve(poly.edge_speed.size());
    for (std::size_t i = 0; i < poly.edge_speed.size(); ++i) {
        table.rows.push_back(
            {format_double(poly.vertices[i][0]), format_double(poly.vertices[i][1]),
             format_double(poly.vertices[i + 1][0]), format_double(poly.vertices[i + 1][1]),
             format_double(poly.edge_speed[i]), to_string(poly.edge_pace[i])});
    }
    return table;
}

CsvTable to_table(const HysteresisTrace& trace) {
    CsvTable table;
    table.header = {"s", "n"};
    table.rows.reserve(trace.schedule.size());
    for (std::size_t i = 0; i < trace.schedule.size(); ++i) {
        table.rows.push_back(
            {format_double(trace.schedule[i]), format_double(trace.branch_n[i])});
    }
    return table;
}

} // namespace relaxcycle
