// Command-line front end: conformance checking, oracle comparison, log
// generation, and benchmarking over PNML models and XES/CSV event logs.

#include <algorithm>
#include <atomic>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "wincc/alignment.hpp"
#include "wincc/bench.hpp"
#include "wincc/errors.hpp"
#include "wincc/event_log.hpp"
#include "wincc/log_io.hpp"
#include "wincc/pnml.hpp"
#include "wincc/sliding_window.hpp"
#include "wincc/version.hpp"

using nlohmann::json;
using wincc::CheckContext;
using wincc::EventLog;
using wincc::Marking;
using wincc::Move;
using wincc::MoveKind;
using wincc::ProcessNet;
using wincc::Trace;
using wincc::WindowConfig;

namespace {

struct Options {
  std::string model_path;
  std::string log_path;
  std::string output_path;
  std::string corpus_path;
  std::string final_marking;
  std::string case_column = "case";
  std::string activity_column = "activity";
  std::string format = "jsonl";
  std::uint32_t window_length = 10;
  std::uint32_t beam_width = 3;
  std::size_t budget = 50'000;
  std::size_t oracle_budget = 5'000'000;
  std::uint64_t seed = 1;
  unsigned jobs = 0;
  std::size_t min_length = 0;
  std::size_t max_length = 50;
  std::uint32_t traces = 10;
  double noise = 0.0;
  bool emit_moves = false;
  bool progress = false;
};

enum class LogFormat { kXes, kCsv };

LogFormat sniff_log_format(const std::string& path) {
  std::string lower = path;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower.ends_with(".xes")) return LogFormat::kXes;
  if (lower.ends_with(".csv")) return LogFormat::kCsv;
  throw wincc::MalformedInput("cannot infer log format from '" + path +
                              "': expected a .xes or .csv file");
}

EventLog load_log(const Options& opt) {
  if (sniff_log_format(opt.log_path) == LogFormat::kXes)
    return wincc::parse_xes_file(opt.log_path);
  wincc::CsvColumns columns;
  columns.case_column = opt.case_column;
  columns.activity_column = opt.activity_column;
  return wincc::parse_csv_file(opt.log_path, columns);
}

// Loads the model and resolves the final marking: an explicit --final-marking
// wins, otherwise the marking declared in the file.
ProcessNet load_model(const Options& opt) {
  ProcessNet net = wincc::read_pnml_file(opt.model_path);
  if (!opt.final_marking.empty())
    net.set_final_marking(wincc::parse_marking_spec(net, opt.final_marking));
  if (!net.has_final_marking())
    throw wincc::MalformedInput(
        opt.model_path +
        ": model declares no final marking; pass --final-marking");
  return net;
}

void drop_short_traces(EventLog& log, std::size_t min_length) {
  if (min_length == 0) return;
  std::erase_if(log.traces, [&](const Trace& t) {
    return t.length() < min_length;
  });
}

json manifest_json(const char* command, const Options& opt) {
  json costs = {{"sync", 0}, {"log", 1}, {"model", 1}, {"silent", 0}};
  json m = {
      {"tool", "wincc"},
      {"version", wincc::kVersion},
      {"schema_version", wincc::kReportSchemaVersion},
      {"command", command},
      {"model", opt.model_path},
      {"log", opt.log_path},
      {"final_marking",
       opt.final_marking.empty() ? json(nullptr) : json(opt.final_marking)},
      {"window_length", opt.window_length},
      {"beam_width", opt.beam_width},
      {"per_window_budget", opt.budget},
      {"oracle_budget", opt.oracle_budget},
      {"costs", costs},
      {"seed", opt.seed},
      {"jobs", opt.jobs},
      {"min_length", opt.min_length},
      {"case_column", opt.case_column},
      {"activity_column", opt.activity_column},
  };
  return m;
}

const char* kind_name(MoveKind kind) {
  switch (kind) {
    case MoveKind::Sync: return "sync";
    case MoveKind::Model: return "model";
    case MoveKind::Log: return "log";
  }
  return "?";
}

json move_json(const ProcessNet& net, const Trace& trace, const Move& move) {
  json j;
  j["kind"] = kind_name(move.kind);
  const std::optional<std::string> label = wincc::move_label(net, trace, move);
  j["label"] = label ? json(*label) : json(nullptr);
  j["transition"] = move.transition == wincc::kNoTransition
                        ? json(nullptr)
                        : json(net.transition(move.transition).id);
  j["trace_index"] = move.trace_index == wincc::kNoTraceIndex
                         ? json(nullptr)
                         : json(move.trace_index);
  return j;
}

// Claims row indices from an atomic counter until the work list is drained.
template <typename Fn>
void run_pool(std::size_t rows, unsigned jobs, Fn&& work) {
  if (jobs == 0) jobs = std::thread::hardware_concurrency();
  if (jobs == 0) jobs = 1;
  jobs = static_cast<unsigned>(
      std::min<std::size_t>(jobs, std::max<std::size_t>(rows, 1)));
  std::atomic<std::size_t> next{0};
  const auto loop = [&] {
    for (std::size_t i = next.fetch_add(1); i < rows; i = next.fetch_add(1))
      work(i);
  };
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(loop);
  for (std::thread& t : pool) t.join();
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return (values[mid - 1] + values[mid]) / 2.0;
}

// ---------------------------------------------------------------------------
// check

struct CheckRow {
  std::string case_id;
  std::size_t input_index = 0;
  wincc::Cost cost = 0;
  std::size_t explored = 0;
  std::size_t windows = 0;
  bool truncated = false;
  double wall_ms = 0.0;
  json moves;
  std::string error;
};

int run_check(const Options& opt) {
  const ProcessNet net = load_model(opt);
  EventLog log = load_log(opt);
  drop_short_traces(log, opt.min_length);
  const CheckContext ctx(net);
  if (!ctx.rg.node_of(net.final_marking()))
    throw wincc::Unreachable(opt.model_path +
                             ": final marking is not reachable");

  WindowConfig cfg;
  cfg.window_length = opt.window_length;
  cfg.beam_width = opt.beam_width;
  cfg.per_window_budget = opt.budget;

  std::vector<CheckRow> rows(log.traces.size());
  run_pool(rows.size(), opt.jobs, [&](std::size_t i) {
    CheckRow& row = rows[i];
    const Trace& trace = log.traces[i];
    row.case_id = trace.case_id;
    row.input_index = i;
    try {
      const wincc::ConformanceResult result =
          wincc::window_conformance(ctx, trace, cfg);
      row.cost = result.cost;
      row.explored = result.explored_nodes;
      row.windows = result.windows;
      row.truncated = result.truncated;
      row.wall_ms = result.wall_time.count() * 1e3;
      if (opt.emit_moves) {
        row.moves = json::array();
        for (const Move& m : result.alignment.moves)
          row.moves.push_back(move_json(net, trace, m));
      }
    } catch (const wincc::Error& e) {
      row.error = e.what();
    }
  });

  std::stable_sort(rows.begin(), rows.end(),
                   [](const CheckRow& a, const CheckRow& b) {
                     return std::tie(a.case_id, a.input_index) <
                            std::tie(b.case_id, b.input_index);
                   });

  std::size_t failed = 0;
  std::vector<double> costs;
  double nodes_sum = 0.0;
  for (const CheckRow& row : rows) {
    if (!row.error.empty()) {
      ++failed;
      continue;
    }
    costs.push_back(static_cast<double>(row.cost));
    nodes_sum += static_cast<double>(row.explored);
  }
  const std::size_t checked = rows.size() - failed;
  const double mean_cost =
      checked ? std::accumulate(costs.begin(), costs.end(), 0.0) / checked : 0.0;
  const double mean_nodes = checked ? nodes_sum / checked : 0.0;

  const json manifest = manifest_json("check", opt);
  if (opt.format == "jsonl") {
    std::cout << json{{"manifest", manifest}}.dump() << '\n';
    for (const CheckRow& row : rows) {
      json j = {{"case_id", row.case_id},
                {"cost", row.cost},
                {"explored_nodes", row.explored},
                {"windows", row.windows},
                {"truncated", row.truncated},
                {"wall_ms", row.wall_ms}};
      if (!row.error.empty()) j["error"] = row.error;
      if (opt.emit_moves && row.error.empty()) j["moves"] = row.moves;
      std::cout << j.dump() << '\n';
    }
    std::cout << json{{"summary",
                       {{"traces", rows.size()},
                        {"failed", failed},
                        {"mean_cost", mean_cost},
                        {"median_cost", median(costs)},
                        {"mean_explored_nodes", mean_nodes}}}}
                     .dump()
              << '\n';
  } else if (opt.format == "csv") {
    std::cout << "# manifest " << manifest.dump() << '\n';
    std::cout << "case_id,cost,explored_nodes,windows,truncated,wall_ms,error\n";
    for (const CheckRow& row : rows) {
      std::string sanitized = row.error;
      std::replace(sanitized.begin(), sanitized.end(), ',', ';');
      std::cout << row.case_id << ',' << row.cost << ',' << row.explored << ','
                << row.windows << ',' << (row.truncated ? 1 : 0) << ','
                << row.wall_ms << ',' << sanitized << '\n';
    }
    std::cout << "# summary traces=" << rows.size() << " failed=" << failed
              << " mean_cost=" << mean_cost << " median_cost=" << median(costs)
              << " mean_explored_nodes=" << mean_nodes << '\n';
  } else {
    std::cout << "manifest: " << manifest.dump() << '\n';
    std::cout << std::left << std::setw(20) << "case_id" << std::right
              << std::setw(8) << "cost" << std::setw(12) << "explored"
              << std::setw(9) << "windows" << std::setw(11) << "truncated"
              << std::setw(10) << "wall_ms" << "  error\n";
    for (const CheckRow& row : rows) {
      std::cout << std::left << std::setw(20) << row.case_id << std::right
                << std::setw(8) << row.cost << std::setw(12) << row.explored
                << std::setw(9) << row.windows << std::setw(11)
                << (row.truncated ? "yes" : "no") << std::setw(10)
                << std::fixed << std::setprecision(1) << row.wall_ms
                << std::defaultfloat << "  " << row.error << '\n';
    }
    std::cout << "traces " << rows.size() << "  failed " << failed
              << "  mean cost " << mean_cost << "  median cost "
              << median(costs) << "  mean nodes " << mean_nodes << '\n';
  }
  return failed == 0 ? 0 : 2;
}

// ---------------------------------------------------------------------------
// compare

struct CompareRow {
  std::string case_id;
  std::size_t input_index = 0;
  wincc::OracleComparison cmp;
  std::string error;
};

int run_compare(const Options& opt) {
  const ProcessNet net = load_model(opt);
  EventLog log = load_log(opt);
  drop_short_traces(log, opt.min_length);
  const CheckContext ctx(net);
  if (!ctx.rg.node_of(net.final_marking()))
    throw wincc::Unreachable(opt.model_path +
                             ": final marking is not reachable");

  WindowConfig cfg;
  cfg.window_length = opt.window_length;
  cfg.beam_width = opt.beam_width;
  cfg.per_window_budget = opt.budget;

  std::vector<CompareRow> rows(log.traces.size());
  run_pool(rows.size(), opt.jobs, [&](std::size_t i) {
    CompareRow& row = rows[i];
    row.case_id = log.traces[i].case_id;
    row.input_index = i;
    try {
      row.cmp = wincc::compare_with_oracle(ctx, log.traces[i], cfg,
                                           opt.oracle_budget);
    } catch (const wincc::Error& e) {
      row.error = e.what();
    }
  });
  std::stable_sort(rows.begin(), rows.end(),
                   [](const CompareRow& a, const CompareRow& b) {
                     return std::tie(a.case_id, a.input_index) <
                            std::tie(b.case_id, b.input_index);
                   });

  std::size_t failed = 0, compared = 0, optimal = 0;
  double delta_sum = 0.0;
  for (const CompareRow& row : rows) {
    if (!row.error.empty()) {
      ++failed;
      continue;
    }
    if (!row.cmp.optimal_cost) continue;
    ++compared;
    if (row.cmp.window_cost == *row.cmp.optimal_cost) ++optimal;
    delta_sum += row.cmp.delta;
  }
  const double optimal_pct =
      compared ? 100.0 * static_cast<double>(optimal) / compared : 0.0;
  const double mean_delta_pct = compared ? 100.0 * delta_sum / compared : 0.0;

  const json manifest = manifest_json("compare", opt);
  if (opt.format == "jsonl") {
    std::cout << json{{"manifest", manifest}}.dump() << '\n';
    for (const CompareRow& row : rows) {
      json j = {{"case_id", row.case_id},
                {"window_cost", row.cmp.window_cost},
                {"oracle_cost", row.cmp.optimal_cost
                                    ? json(*row.cmp.optimal_cost)
                                    : json(nullptr)},
                {"delta", row.cmp.delta},
                {"explored_window", row.cmp.explored_window},
                {"explored_oracle", row.cmp.explored_oracle},
                {"oracle_skipped", row.cmp.oracle_skipped},
                {"window_ms", row.cmp.window_seconds * 1e3},
                {"oracle_ms", row.cmp.oracle_seconds * 1e3}};
      if (!row.error.empty()) j["error"] = row.error;
      std::cout << j.dump() << '\n';
    }
    std::cout << json{{"summary",
                       {{"traces", rows.size()},
                        {"failed", failed},
                        {"compared", compared},
                        {"optimal_pct", optimal_pct},
                        {"mean_delta_pct", mean_delta_pct}}}}
                     .dump()
              << '\n';
  } else if (opt.format == "csv") {
    std::cout << "# manifest " << manifest.dump() << '\n';
    std::cout << "case_id,window_cost,oracle_cost,delta,explored_window,"
                 "explored_oracle,oracle_skipped,window_ms,oracle_ms,error\n";
    for (const CompareRow& row : rows) {
      std::string sanitized = row.error;
      std::replace(sanitized.begin(), sanitized.end(), ',', ';');
      std::cout << row.case_id << ',' << row.cmp.window_cost << ',';
      if (row.cmp.optimal_cost) std::cout << *row.cmp.optimal_cost;
      std::cout << ',' << row.cmp.delta << ',' << row.cmp.explored_window
                << ',' << row.cmp.explored_oracle << ','
                << (row.cmp.oracle_skipped ? 1 : 0) << ','
                << row.cmp.window_seconds * 1e3 << ','
                << row.cmp.oracle_seconds * 1e3 << ',' << sanitized << '\n';
    }
    std::cout << "# summary traces=" << rows.size() << " failed=" << failed
              << " compared=" << compared << " optimal_pct=" << optimal_pct
              << " mean_delta_pct=" << mean_delta_pct << '\n';
  } else {
    std::cout << "manifest: " << manifest.dump() << '\n';
    std::cout << std::left << std::setw(20) << "case_id" << std::right
              << std::setw(8) << "window" << std::setw(8) << "oracle"
              << std::setw(9) << "delta%" << std::setw(12) << "nodes_win"
              << std::setw(12) << "nodes_opt" << "  notes\n";
    for (const CompareRow& row : rows) {
      std::cout << std::left << std::setw(20) << row.case_id << std::right
                << std::setw(8) << row.cmp.window_cost;
      if (row.cmp.optimal_cost)
        std::cout << std::setw(8) << *row.cmp.optimal_cost;
      else
        std::cout << std::setw(8) << "-";
      std::cout << std::setw(9) << std::fixed << std::setprecision(2)
                << row.cmp.delta * 100.0 << std::defaultfloat << std::setw(12)
                << row.cmp.explored_window << std::setw(12)
                << row.cmp.explored_oracle << "  ";
      if (!row.error.empty())
        std::cout << row.error;
      else if (row.cmp.oracle_skipped)
        std::cout << "oracle skipped";
      std::cout << '\n';
    }
    std::cout << "optimal (%): " << std::fixed << std::setprecision(2)
              << optimal_pct << "\nmean Δ cost (%): " << mean_delta_pct
              << std::defaultfloat << '\n';
  }
  return failed == 0 ? 0 : 2;
}

// ---------------------------------------------------------------------------
// generate

int run_generate(const Options& opt) {
  const ProcessNet net = load_model(opt);
  const wincc::TraceSimulator simulator(net);
  std::vector<std::string> pool;
  for (wincc::LabelIdx l = 0; l < net.label_count(); ++l)
    pool.push_back(net.label_name(l));

  EventLog log;
  log.activity_alphabet = pool;
  std::size_t failed = 0;
  for (std::uint32_t k = 0; k < opt.traces; ++k) {
    std::ostringstream id;
    id << "case_" << std::setw(4) << std::setfill('0') << k;
    try {
      Trace trace = simulator.simulate(opt.min_length, opt.max_length,
                                       wincc::mix_seed(opt.seed, k));
      const wincc::NoiseProfile profile = wincc::NoiseProfile::level(
          opt.noise, wincc::mix_seed(opt.seed ^ 0x9042f1ULL, k), pool);
      trace = wincc::inject_noise(trace, profile);
      trace.case_id = id.str();
      log.traces.push_back(std::move(trace));
    } catch (const wincc::Error& e) {
      ++failed;
      std::cerr << id.str() << ": " << e.what() << '\n';
    }
  }

  std::ofstream out(opt.output_path, std::ios::binary);
  if (!out)
    throw wincc::MalformedInput("cannot open '" + opt.output_path +
                                "' for writing");
  if (sniff_log_format(opt.output_path) == LogFormat::kXes)
    wincc::write_xes(out, log);
  else
    wincc::write_csv(out, log);
  std::cerr << "wrote " << log.traces.size() << " trace(s) to "
            << opt.output_path << '\n';
  return failed == 0 ? 0 : 2;
}

// ---------------------------------------------------------------------------
// bench

int run_bench(const Options& opt) {
  wincc::CorpusSpec spec = wincc::parse_corpus_spec_file(opt.corpus_path);
  if (opt.jobs != 0) spec.jobs = opt.jobs;
  const wincc::BenchReport report =
      wincc::run_benchmark(spec, opt.progress ? &std::cerr : nullptr);
  json manifest = manifest_json("bench", opt);
  manifest["corpus"] = opt.corpus_path;
  if (opt.format == "csv") {
    std::cout << "# manifest " << manifest.dump() << '\n';
    wincc::write_report_csv(std::cout, report);
  } else {
    std::cout << "manifest: " << manifest.dump() << '\n';
    wincc::write_report_table(std::cout, report);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sliding-window conformance checking for Petri-net models"};
  app.require_subcommand(1);
  Options opt;

  const auto add_model_log = [&](CLI::App* cmd) {
    cmd->add_option("model", opt.model_path, "process model (PNML)")
        ->required();
    cmd->add_option("log", opt.log_path, "event log (.xes or .csv)")
        ->required();
    cmd->add_option("--final-marking", opt.final_marking,
                    "final marking as place[:count],... (overrides the model)");
    cmd->add_option("--case-col", opt.case_column,
                    "CSV case id column (name or 0-based index)");
    cmd->add_option("--activity-col", opt.activity_column,
                    "CSV activity column (name or 0-based index)");
    cmd->add_option("--min-length", opt.min_length,
                    "skip traces shorter than this");
    cmd->add_option("--jobs", opt.jobs, "worker threads (0 = all cores)");
  };
  const auto add_window_flags = [&](CLI::App* cmd) {
    cmd->add_option("-L,--window-length", opt.window_length,
                    "events per window");
    cmd->add_option("-N,--beam-width", opt.beam_width,
                    "alignment prefixes kept between windows");
    cmd->add_option("--budget", opt.budget,
                    "settled-state budget per window search");
  };

  CLI::App* check = app.add_subcommand(
      "check", "align every trace with the sliding-window checker");
  add_model_log(check);
  add_window_flags(check);
  check->add_flag("--emit-moves", opt.emit_moves,
                  "include the full move sequence per trace (jsonl)");
  check->add_option("--format", opt.format, "jsonl, csv, or table")
      ->check(CLI::IsMember({"jsonl", "csv", "table"}));

  CLI::App* compare = app.add_subcommand(
      "compare", "score the window checker against the exact aligner");
  add_model_log(compare);
  add_window_flags(compare);
  compare->add_option("--oracle-budget", opt.oracle_budget,
                      "settled-state budget for the exact search");
  compare->add_option("--format", opt.format, "jsonl, csv, or table")
      ->check(CLI::IsMember({"jsonl", "csv", "table"}));

  CLI::App* generate = app.add_subcommand(
      "generate", "simulate traces from a model into an event log");
  generate->add_option("model", opt.model_path, "process model (PNML)")
      ->required();
  generate->add_option("-o,--output", opt.output_path,
                       "output log (.xes or .csv)")
      ->required();
  generate->add_option("--traces", opt.traces, "number of traces");
  generate->add_option("--min-length", opt.min_length,
                       "minimum events per trace");
  generate->add_option("--max-length", opt.max_length,
                       "maximum events per trace");
  generate->add_option("--noise", opt.noise,
                       "noise level in [0,1], split across insert/delete/swap");
  generate->add_option("--seed", opt.seed, "generation seed");
  generate->add_option("--final-marking", opt.final_marking,
                       "final marking as place[:count],...");

  CLI::App* bench = app.add_subcommand(
      "bench", "run the generated-corpus benchmark described by a config file");
  bench->add_option("corpus", opt.corpus_path, "corpus config file")
      ->required();
  bench->add_option("--jobs", opt.jobs, "worker threads (0 = all cores)");
  bench->add_flag("--progress", opt.progress, "per-instance progress on stderr");
  bench->add_option("--format", opt.format, "csv or table")
      ->check(CLI::IsMember({"csv", "table"}));

  CLI11_PARSE(app, argc, argv);
  if (bench->parsed() && opt.format == "jsonl") opt.format = "table";

  try {
    if (check->parsed()) return run_check(opt);
    if (compare->parsed()) return run_compare(opt);
    if (generate->parsed()) return run_generate(opt);
    if (bench->parsed()) return run_bench(opt);
  } catch (const wincc::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
