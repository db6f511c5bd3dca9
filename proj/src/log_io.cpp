#include "wincc/log_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "wincc/xml_reader.hpp"

namespace wincc {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MalformedInput("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void collect_alphabet(EventLog& log) {
  std::unordered_set<std::string> seen;
  for (const Trace& t : log.traces)
    for (const std::string& a : t.activities)
      if (seen.insert(a).second) log.activity_alphabet.push_back(a);
}

class XesHandler : public XmlHandler {
 public:
  explicit XesHandler(std::string_view source) : source_(source) {}

  void on_start(std::string_view name, const std::vector<Attr>& attrs) override {
    if (name == "trace") {
      in_trace_ = true;
      current_ = Trace{};
      trace_has_name_ = false;
      event_had_name_ = false;
    } else if (name == "event" && in_trace_) {
      in_event_ = true;
      event_had_name_ = false;
    } else if (name == "string") {
      std::string_view key, value;
      for (const auto& [k, v] : attrs) {
        if (k == "key") key = v;
        if (k == "value") value = v;
      }
      if (key != "concept:name") return;
      // First concept:name wins if an element carries several.
      if (in_event_ && !event_had_name_) {
        current_.activities.emplace_back(value);
        event_had_name_ = true;
      } else if (in_trace_ && !in_event_ && !trace_has_name_) {
        current_.case_id = std::string(value);
        trace_has_name_ = true;
      }
    }
  }

  void on_end(std::string_view name) override {
    if (name == "event" && in_event_) {
      if (!event_had_name_)
        throw MalformedInput(std::string(source_) + ": <event> " +
                             std::to_string(current_.activities.size()) +
                             " in trace " + std::to_string(traces_.size()) +
                             " lacks a concept:name string");
      in_event_ = false;
    } else if (name == "trace") {
      if (!trace_has_name_)
        current_.case_id = "trace_" + std::to_string(traces_.size());
      if (!case_ids_.insert(current_.case_id).second)
        throw MalformedInput(std::string(source_) + ": duplicate trace concept:name '" +
                             current_.case_id + "'");
      traces_.push_back(std::move(current_));
      in_trace_ = false;
    }
  }

  std::vector<Trace> take() { return std::move(traces_); }

 private:
  std::string source_;
  std::vector<Trace> traces_;
  std::set<std::string> case_ids_;
  Trace current_;
  bool in_trace_ = false;
  bool in_event_ = false;
  bool trace_has_name_ = false;
  bool event_had_name_ = false;
};

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// RFC-4180-ish row splitter: quoted fields may contain commas, doubled
// quotes and newlines. line_no tracks the physical line of the row start.
struct CsvReader {
  std::string_view data;
  std::size_t pos = 0;
  std::size_t line = 1;

  bool done() const { return pos >= data.size(); }

  std::optional<std::vector<std::string>> next_row(std::size_t& row_line) {
    while (!done()) {
      row_line = line;
      std::vector<std::string> fields(1);
      bool quoted = false, any = false;
      while (!done()) {
        char c = data[pos];
        if (quoted) {
          if (c == '"') {
            if (pos + 1 < data.size() && data[pos + 1] == '"') {
              fields.back() += '"';
              pos += 2;
            } else {
              quoted = false;
              ++pos;
            }
          } else {
            if (c == '\n') ++line;
            fields.back() += c;
            ++pos;
          }
          continue;
        }
        if (c == '"' && fields.back().empty()) {
          quoted = true;
          any = true;
          ++pos;
        } else if (c == ',') {
          fields.emplace_back();
          any = true;
          ++pos;
        } else if (c == '\n' || c == '\r') {
          if (c == '\r' && pos + 1 < data.size() && data[pos + 1] == '\n') ++pos;
          ++pos;
          ++line;
          break;
        } else {
          fields.back() += c;
          any = true;
          ++pos;
        }
      }
      if (quoted)
        throw MalformedInput("line " + std::to_string(row_line) +
                             ": unterminated quoted field");
      if (any || fields.size() > 1) return fields;
      // skip blank lines
    }
    return std::nullopt;
  }
};

std::size_t resolve_column(const std::vector<std::string>& header,
                           const std::string& name, std::string_view source) {
  std::size_t index = 0;
  auto [ptr, ec] = std::from_chars(name.data(), name.data() + name.size(), index);
  if (ec == std::errc() && ptr == name.data() + name.size()) {
    if (index >= header.size())
      throw MissingColumn(std::string(source) + ": column index " + name +
                          " out of range (header has " +
                          std::to_string(header.size()) + " columns)");
    return index;
  }
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw MissingColumn(std::string(source) + ": no column named '" + name + "'");
}

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

}  // namespace

EventLog parse_xes(std::string_view bytes, std::string_view source_name) {
  XesHandler handler(source_name);
  parse_xml(bytes, handler, source_name);
  EventLog log;
  log.traces = handler.take();
  collect_alphabet(log);
  return log;
}

EventLog parse_xes_file(const std::string& path) {
  return parse_xes(read_file(path), path);
}

void write_xes(std::ostream& out, const EventLog& log) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<log xes.version=\"1.0\">\n";
  for (const Trace& t : log.traces) {
    out << "  <trace>\n    <string key=\"concept:name\" value=\""
        << xml_escape(t.case_id) << "\"/>\n";
    for (const std::string& a : t.activities)
      out << "    <event><string key=\"concept:name\" value=\"" << xml_escape(a)
          << "\"/></event>\n";
    out << "  </trace>\n";
  }
  out << "</log>\n";
}

EventLog parse_csv(std::string_view bytes, const CsvColumns& columns,
                   std::string_view source_name) {
  CsvReader reader{bytes};
  std::size_t row_line = 1;
  auto header = reader.next_row(row_line);
  if (!header) throw MalformedInput(std::string(source_name) + ": empty file, no header row");

  std::size_t case_col = resolve_column(*header, columns.case_column, source_name);
  std::size_t act_col = resolve_column(*header, columns.activity_column, source_name);
  std::optional<std::size_t> time_col;
  if (columns.time_column)
    time_col = resolve_column(*header, *columns.time_column, source_name);

  struct Row {
    std::string activity;
    std::string time;
    double numeric_time = 0.0;
  };
  std::vector<std::string> case_order;
  std::unordered_map<std::string, std::vector<Row>> cases;

  while (auto row = reader.next_row(row_line)) {
    std::size_t needed = std::max(case_col, act_col);
    if (time_col) needed = std::max(needed, *time_col);
    if (row->size() <= needed)
      throw MalformedInput(std::string(source_name) + ": line " +
                           std::to_string(row_line) + " has " +
                           std::to_string(row->size()) +
                           " fields, expected at least " + std::to_string(needed + 1));
    const std::string& case_id = (*row)[case_col];
    auto [it, inserted] = cases.try_emplace(case_id);
    if (inserted) case_order.push_back(case_id);
    it->second.push_back(
        Row{(*row)[act_col], time_col ? (*row)[*time_col] : std::string()});
  }

  EventLog log;
  for (const std::string& case_id : case_order) {
    std::vector<Row>& rows = cases[case_id];
    if (time_col) {
      // Numeric comparison when every timestamp parses as a number,
      // lexicographic otherwise; stable sort keeps file order on ties.
      bool all_numeric = true;
      for (Row& r : rows) {
        char* end = nullptr;
        r.numeric_time = std::strtod(r.time.c_str(), &end);
        if (r.time.empty() || end != r.time.c_str() + r.time.size()) {
          all_numeric = false;
          break;
        }
      }
      if (all_numeric)
        std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
          return a.numeric_time < b.numeric_time;
        });
      else
        std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
          return a.time < b.time;
        });
    }
    Trace trace;
    trace.case_id = case_id;
    for (Row& r : rows) trace.activities.push_back(std::move(r.activity));
    log.traces.push_back(std::move(trace));
  }
  collect_alphabet(log);
  return log;
}

EventLog parse_csv_file(const std::string& path, const CsvColumns& columns) {
  return parse_csv(read_file(path), columns, path);
}

void write_csv(std::ostream& out, const EventLog& log,
               const CsvColumns& columns) {
  out << csv_quote(columns.case_column) << ','
      << csv_quote(columns.activity_column) << '\n';
  for (const Trace& t : log.traces)
    for (const std::string& a : t.activities)
      out << csv_quote(t.case_id) << ',' << csv_quote(a) << '\n';
}

}  // namespace wincc
