#ifndef RELAXCYCLE_CSV_HPP
#define RELAXCYCLE_CSV_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "relaxcycle/cycle.hpp"
#include "relaxcycle/equilibria.hpp"
#include "relaxcycle/integrator.hpp"
#include "relaxcycle/series.hpp"
#include "relaxcycle/toy_market.hpp"

namespace relaxcycle {

// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

// Header plus string cells; the common currency of every emitter.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

// Comma-separated, LF line endings, header always present. Deterministic
// bytes for identical input.
std::string to_csv_string(const CsvTable& table);

// Returns the number of bytes written. Throws IoError with path context.
std::size_t write_csv(const CsvTable& table, const std::filesystem::path& dest);
std::size_t write_csv(const CsvTable& table, std::ostream& dest);

// Generic reader for files this library emits (no quoting, no embedded
// separators). Used by round-trip checks.
CsvTable read_csv(std::istream& source);
CsvTable read_csv_file(const std::filesystem::path& source);

// Historical series ingestion: header `year,production,price`, strictly
// increasing years, positive finite values. LF or CRLF. Violations raise
// ValidationError naming the line, empty data is an error.
std::vector<SeriesRow> read_series_csv(std::istream& source);
std::vector<SeriesRow> read_series_csv_file(const std::filesystem::path& source);

// table builders
CsvTable to_table(const Trajectory& traj);
CsvTable to_table(const std::vector<DiagramRow>& rows);
CsvTable to_table(const EquilibriumSet& set);
CsvTable to_table(const std::vector<SeriesRow>& rows);
CsvTable to_table(const std::vector<ToyStep>& steps);
CsvTable to_table(const LimitCycle& cycle);
CsvTable to_table(const std::vector<PhaseSegment>& segments);
CsvTable to_table(const PhasePolyline& poly);
CsvTable to_table(const HysteresisTrace& trace);

} // namespace relaxcycle

#endif
