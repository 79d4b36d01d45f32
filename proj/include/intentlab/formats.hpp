#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "intentlab/engine.hpp"
#include "intentlab/evaluation.hpp"

namespace intentlab {

/// Required event-log columns, in the order the writer emits them.
inline constexpr const char* kEventLogHeader = "user_id,intent,timestamp,lat,lon";

/// Parses a UTF-8 CSV event log. Columns are matched by header name; extra
/// columns are ignored with a warning appended to `warnings`. Rows must be
/// time-ordered per user. Every bad row is reported in one ParseError.
std::vector<ContextEvent> read_event_log(std::istream& in, std::vector<std::string>* warnings = nullptr);
std::vector<ContextEvent> read_event_log_file(const std::string& path, std::vector<std::string>* warnings = nullptr);

void write_event_log(std::ostream& out, std::span<const ContextEvent> events);

/// Flat `key = value` text; `#` starts a comment. Unknown keys and bad
/// values are ParseErrors. Missing keys keep their defaults.
EngineConfig read_config(std::istream& in);
EngineConfig read_config_file(const std::string& path);

/// Emits every key with its current value; read_config accepts the output.
void write_config(std::ostream& out, const EngineConfig& config);

/// `day,instances,hits,ratio,live_nodes`, one row per day.
void write_day_report(std::ostream& out, const ReplayReport& report);

/// Deterministic JSON summary (no timing data).
std::string summary_json(const ReplayReport& report);

/// Timing data kept apart from the summary so reports stay byte-reproducible.
std::string timing_json(const ReplayReport& report);

/// Fixed-precision rendering used by every report writer.
std::string format_real(double value);

}  // namespace intentlab
