#pragma once

#include <string>

#include "pegsim/engine.hpp"

namespace pegsim {

inline constexpr int kReportSchemaVersion = 1;

// JSON run report: schema version, scenario echo, all per-period series as
// ledger decimal strings, cohorts, verdict. Writes are atomic and
// byte-deterministic for a given record.
void write_report(const RunRecord& run, const std::string& path);
std::string report_to_string(const RunRecord& run);

// Exact inverse of write_report. Throws io_error on unreadable or malformed
// files and schema_mismatch on a version the reader does not understand.
RunRecord read_report(const std::string& path);
RunRecord report_from_string(const std::string& text);

// Plot-ready data: price.csv, amounts.csv, utility.csv, gamma_d.csv under
// `dir`, each `period,value`. Amounts and utility track the first cohort.
void write_plot_csvs(const RunRecord& run, const std::string& dir);

// Shortest round-trip decimal form of a double (deterministic, locale-free).
std::string format_double(double v);
double parse_double_str(const std::string& s);

} // namespace pegsim
