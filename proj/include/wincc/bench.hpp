#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wincc/alignment.hpp"
#include "wincc/event_log.hpp"
#include "wincc/petri_net.hpp"
#include "wincc/sliding_window.hpp"

namespace wincc {

// Deterministic seed derivation: one root seed fans out into independent
// streams for nets, traces, and noise without overlap.
std::uint64_t mix_seed(std::uint64_t root, std::uint64_t stream);

struct NoiseProfile {
  double p_insert = 0.0;
  double p_delete = 0.0;
  double p_swap = 0.0;  // adjacent transposition
  std::uint64_t seed = 0;
  std::vector<std::string> insert_pool;  // labels drawn for insertions

  // Split one distortion level evenly over the three operations.
  static NoiseProfile level(double lvl, std::uint64_t seed,
                            std::vector<std::string> pool);
};

// Single left-to-right pass; at each original position, independently: maybe
// insert a pool label before it, else-wise maybe delete it, else maybe swap
// it with its right neighbour (consuming both). One final insertion chance
// after the last event. Deterministic per seed; insertions are skipped when
// the pool is empty.
Trace inject_noise(const Trace& trace, const NoiseProfile& profile);

struct NetGenConfig {
  std::uint32_t min_places = 4;
  std::uint32_t max_places = 10;
  bool require_loop = false;  // force a loop block at the top level
  std::uint64_t seed = 0;
};

// Random safe workflow-style net: a source-to-sink chain of sequence, choice
// (with occasional silent skip branches), and loop blocks. One token flows
// from source to sink, so the net is 1-safe and bounded by construction;
// labels are distinct single letters (A, B, ... then T10, T11, ...).
ProcessNet random_workflow_net(const NetGenConfig& cfg);

// Precomputed guidance tables for simulating fitting traces of a wanted
// length: per reachability node, the minimum and maximum number of labeled
// transitions on any path to the final marking (maximum saturates when a
// labeled cycle can be pumped).
class TraceSimulator {
 public:
  explicit TraceSimulator(const ProcessNet& net,
                          std::size_t state_cap = kDefaultStateCap);

  // Random walk over enabled transitions from the initial marking, filtered
  // to choices that can still finish inside [min_len, max_len] emitted
  // labels, stopping at the final marking. The result is the label
  // projection of a firing sequence, so it aligns at cost 0. Throws
  // GenerationFailed when the length window is infeasible or no walk
  // completes within the retry allowance.
  Trace simulate(std::size_t min_len, std::size_t max_len,
                 std::uint64_t seed) const;

  const ReachabilityGraph& graph() const { return rg_; }

 private:
  const ProcessNet* net_;
  ReachabilityGraph rg_;
  std::uint32_t final_node_ = 0;
  std::vector<std::uint32_t> min_emit_;  // labeled steps to final, at least
  std::vector<std::uint32_t> max_emit_;  // labeled steps to final, at most
};

Trace simulate_trace(const ProcessNet& net, std::size_t max_len,
                     std::uint64_t seed);

// Declarative benchmark corpus: how many nets, how many traces each, length
// and noise ranges, the (L, N) grid, and oracle limits. Parsed from a
// key = value file (# comments, unknown keys rejected).
struct CorpusSpec {
  std::uint32_t nets = 10;
  std::uint64_t net_seed = 1;
  std::uint32_t min_places = 4;
  std::uint32_t max_places = 10;
  // Corpus length ranges usually exceed what a loop-free net can emit, so
  // every net gets a loop unless explicitly switched off.
  bool require_loop = true;
  std::uint32_t traces_per_net = 5;
  std::uint64_t trace_seed = 2;
  std::size_t min_length = 40;
  std::size_t max_length = 120;
  double noise_min = 0.1;
  double noise_max = 0.3;
  std::vector<std::uint32_t> window_lengths = {10};
  std::vector<std::uint32_t> beam_widths = {3};
  std::size_t per_window_budget = 50'000;
  std::size_t oracle_budget = 5'000'000;
  std::size_t oracle_max_length = 200;  // longer traces get window-only rows
  unsigned jobs = 0;                    // 0 = hardware concurrency
};

CorpusSpec parse_corpus_spec(const std::string& text);
CorpusSpec parse_corpus_spec_file(const std::string& path);

struct BenchRow {
  std::string instance;  // "net03/trace07"
  std::size_t trace_length = 0;
  std::uint32_t window_length = 0;
  std::uint32_t beam_width = 0;
  std::optional<Cost> window_cost;
  std::optional<Cost> oracle_cost;
  double delta = 0.0;
  std::size_t explored_window = 0;
  std::size_t explored_oracle = 0;
  std::size_t windows = 0;
  double window_seconds = 0.0;
  double oracle_seconds = 0.0;
  bool truncated = false;
  std::string error;  // nonempty when this instance failed
};

struct BenchAggregates {
  std::size_t instances = 0;
  std::size_t failed = 0;
  std::size_t compared = 0;       // rows where the oracle ran
  double fraction_optimal = 0.0;  // among compared rows
  double mean_delta = 0.0;        // among compared rows
  double mean_nodes_ratio = 0.0;  // explored_window / explored_oracle
};

struct BenchReport {
  std::vector<BenchRow> rows;
  BenchAggregates aggregates;
};

BenchAggregates compute_aggregates(const std::vector<BenchRow>& rows);

// Generates the corpus, runs every (net, trace, L, N) instance — window
// algorithm always, the exact oracle when the trace is short enough — and
// aggregates. Instances run on a worker pool; rows land in a preallocated
// slot each, so the report is deterministic apart from the timing columns.
// Per-instance failures are recorded in their rows, never thrown. When
// `progress` is given, one line per finished instance is written to it.
BenchReport run_benchmark(const CorpusSpec& spec, std::ostream* progress = nullptr);

void write_report_csv(std::ostream& out, const BenchReport& report);
void write_report_table(std::ostream& out, const BenchReport& report);

}  // namespace wincc
