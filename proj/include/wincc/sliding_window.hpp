#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "wincc/alignment.hpp"
#include "wincc/event_log.hpp"
#include "wincc/petri_net.hpp"
#include "wincc/reachability.hpp"

namespace wincc {

struct WindowConfig {
  std::uint32_t window_length = 10;  // events per window (L)
  std::uint32_t beam_width = 3;      // alignments kept per window (N)
  // Settled-state cap for each beam entry's per-window search; the closing
  // search of the last window gets the same cap (once more at 10x as a
  // fallback when nothing reaches the final marking).
  std::size_t per_window_budget = 50'000;
  // Each beam entry contributes up to beam_width * goal_overcollect distinct
  // goal markings to the merge, so one dominant entry cannot starve the
  // others out of the dedup before the global top-N cut.
  std::uint32_t goal_overcollect = 2;
  // Keep per-window candidate tables in the result (diagnostics/tests).
  bool record_windows = false;
};

// One surviving prefix alignment: everything aligned so far, ending in a
// distinct model marking.
struct BeamEntry {
  Alignment prefix;
  Marking model_marking;
  Cost accumulated_cost = 0;
};

// A merged per-window candidate as it was ranked, kept or not.
struct WindowCandidate {
  Marking marking;
  Cost accumulated_cost = 0;
  Cost penalty = 0;
  Cost total = 0;
  bool kept = false;
};

struct WindowDetail {
  std::uint32_t window_index = 0;
  std::size_t explored = 0;  // settled states, summed over this window's searches
  std::vector<WindowCandidate> candidates;  // sorted by the ranking key
};

struct ConformanceResult {
  Alignment alignment;
  Cost cost = 0;
  std::size_t explored_nodes = 0;  // settled states, summed over all windows
  std::size_t windows = 0;
  bool truncated = false;  // some search hit its budget (result still valid)
  std::chrono::duration<double> wall_time{0};
  std::vector<WindowDetail> window_details;  // filled when cfg.record_windows
};

// Lower bound on the cost of aligning the remaining trace (the suffix
// starting at `position`) given the set of activity labels still reachable
// from a marking: every remaining event whose label is not in the set must
// be a nonsynchronous move, so the bound is the summed frequency of such
// labels. Admissible by construction; 0 for the empty suffix.
Cost marginal_cost_lower_bound(const std::set<std::string>& labels_reachable,
                               const SuffixFrequency& remaining,
                               std::size_t position);

// Sliding-window conformance of one trace: split into ceil(|trace|/L)
// windows; carry a beam of at most N prefix alignments with pairwise
// distinct markings; extend every entry per window by its best partial
// alignments, ranked by accumulated cost plus the marginal-cost lower bound
// over the remaining suffix; close the last window with an exact search to
// the model's final marking. The empty trace degenerates to the cheapest
// pure-model path. Throws Unreachable when no beam entry can reach the
// final marking within (10x) budget.
ConformanceResult window_conformance(const CheckContext& ctx, const Trace& trace,
                                     const WindowConfig& cfg);

struct OracleComparison {
  Cost window_cost = 0;
  std::optional<Cost> optimal_cost;  // empty when the oracle hit its budget
  double delta = 0.0;  // (window - optimal) / max(optimal, 1); 0 when skipped
  std::size_t explored_window = 0;
  std::size_t explored_oracle = 0;
  bool oracle_skipped = false;
  double window_seconds = 0.0;
  double oracle_seconds = 0.0;
};

// Runs the windowed algorithm and the exact aligner on the same trace. The
// window result can never beat the optimum; that is checked and violations
// surface as std::logic_error. An oracle budget overrun is recorded
// (oracle_skipped), not propagated.
OracleComparison compare_with_oracle(const CheckContext& ctx, const Trace& trace,
                                     const WindowConfig& cfg,
                                     std::size_t oracle_budget = 5'000'000);

}  // namespace wincc
