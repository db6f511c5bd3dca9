#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "wincc/event_log.hpp"

namespace wincc {

// XES subset: <trace> elements containing <event> elements; the activity is
// the event's string attribute keyed "concept:name", the case id is the
// trace-level one (synthesized as "trace_<k>" when absent). Everything else
// (timestamps, lifecycle, extensions) is ignored. Throws MalformedInput.
EventLog parse_xes(std::string_view bytes, std::string_view source_name = "<xes>");
EventLog parse_xes_file(const std::string& path);

void write_xes(std::ostream& out, const EventLog& log);

// Column mapping for CSV logs. Columns are addressed by header name, or by
// 0-based index when the string is numeric.
struct CsvColumns {
  std::string case_column = "case";
  std::string activity_column = "activity";
  std::optional<std::string> time_column;  // optional ordering column
};

// One Trace per case id, cases in first-appearance order. Events keep file
// order; when a time column is mapped, events are stably sorted per case by
// timestamp (numerically when every value parses as a number, otherwise
// lexicographically). Throws MissingColumn / MalformedInput.
EventLog parse_csv(std::string_view bytes, const CsvColumns& columns,
                   std::string_view source_name = "<csv>");
EventLog parse_csv_file(const std::string& path, const CsvColumns& columns);

void write_csv(std::ostream& out, const EventLog& log,
               const CsvColumns& columns = {});

}  // namespace wincc
