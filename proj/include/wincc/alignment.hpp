#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wincc/errors.hpp"
#include "wincc/event_log.hpp"
#include "wincc/petri_net.hpp"
#include "wincc/reachability.hpp"

namespace wincc {

using Cost = std::uint64_t;

// A move either advances the model, the trace, or both in lockstep.
enum class MoveKind : std::uint8_t { Sync = 0, Model = 1, Log = 2 };

inline constexpr TransIdx kNoTransition = UINT32_MAX;
inline constexpr std::uint32_t kNoTraceIndex = UINT32_MAX;

// One step of an alignment. Sync and Model moves fire `transition`; Sync and
// Log moves consume the trace event at `trace_index`.
struct Move {
  MoveKind kind = MoveKind::Log;
  TransIdx transition = kNoTransition;
  std::uint32_t trace_index = kNoTraceIndex;

  bool operator==(const Move&) const = default;
};

// Label a move displays: the transition label for Sync/Model moves (nullopt
// when silent), the trace activity for Log moves.
std::optional<std::string> move_label(const ProcessNet& net, const Trace& trace,
                                      const Move& move);

// Per-kind move prices. The default is the unit profile: matching steps and
// silent routing are free, every one-sided step costs 1.
struct CostProfile {
  Cost sync = 0;
  Cost log_move = 1;
  Cost model_move = 1;
  Cost silent_move = 0;
};

Cost move_cost(const ProcessNet& net, const Move& move,
               const CostProfile& profile = {});

struct Alignment {
  std::vector<Move> moves;
  Cost cost = 0;
  Marking final_marking;
  // One past the last consumed trace position (= number of consumed events
  // when the alignment starts at position 0).
  std::uint32_t trace_progress = 0;
};

// Trace activities resolved against the model's label table. Activities the
// model does not know get fresh ids at and above net.label_count(); they can
// never take part in a Sync move and always count as nonreachable.
struct InternedTrace {
  const Trace* trace = nullptr;
  std::vector<LabelIdx> labels;      // one id per event
  std::vector<std::string> foreign;  // unknown activities, first appearance
  std::size_t alphabet_size = 0;     // model labels + foreign labels

  std::uint32_t length() const { return static_cast<std::uint32_t>(labels.size()); }
};

InternedTrace intern_trace(const ProcessNet& net, const Trace& trace);

// Immutable per-net search state shared by every alignment query: the
// reachability graph, per-marking reachable-label sets, transition labels as
// ids, and the cost profile. Build once, then share freely across traces and
// threads — nothing here mutates after construction.
struct CheckContext {
  const ProcessNet* net = nullptr;
  ReachabilityGraph rg;
  LabelReachability reach;
  CostProfile costs;
  std::vector<LabelIdx> transition_labels;  // kSilentLabel for silent ones

  explicit CheckContext(const ProcessNet& n, CostProfile profile = {},
                        std::size_t state_cap = kDefaultStateCap);

  // Rank of a marking's node in canonical marking order (tie-break key).
  std::uint32_t marking_rank(std::uint32_t node) const {
    return rg.canonical_rank[node];
  }
};

// A synchronous-product state: the model's marking plus a trace position,
// with the cost accumulated to reach it.
struct SyncState {
  Marking marking;
  std::uint32_t trace_position = 0;
  Cost g = 0;
};

// Every legal single move out of `s` within `window`, deterministically
// ordered: Sync moves first, then Model moves (both in transition-id order),
// then the Log move when the window still has events left.
std::vector<std::pair<Move, SyncState>> successors(const ProcessNet& net,
                                                   const SyncState& s,
                                                   const SubtraceView& window,
                                                   const CostProfile& profile = {});

struct AStarOptions {
  std::size_t budget = 5'000'000;  // settled-state cap
  // Admissible cost-to-go estimate: the number of remaining trace events
  // whose labels cannot be reached from the current marking. Off by default
  // (plain uniform-cost search).
  bool remaining_events_heuristic = false;
};

struct AStarResult {
  Alignment alignment;
  std::size_t explored = 0;  // settled states
};

// Provably minimum-cost alignment of the whole trace from the net's initial
// marking to its final marking. Throws Unreachable when the final marking
// cannot be reached, BudgetExceeded past opts.budget settled states.
AStarResult astar_optimal_alignment(const CheckContext& ctx, const Trace& trace,
                                    const AStarOptions& opts = {});
AStarResult astar_optimal_alignment(const CheckContext& ctx,
                                    const InternedTrace& trace,
                                    const AStarOptions& opts = {});

// Minimum-cost alignment of trace[from, to) that starts at `start` and must
// end exactly at `goal` with the whole segment consumed: the joint-goal
// search that closes the last window. The full-trace alignment above is the
// special case from = 0, to = |trace|, start = m_i, goal = m_f. Both
// markings must lie in the reachability graph.
AStarResult segment_optimal_alignment(const CheckContext& ctx,
                                      const InternedTrace& trace,
                                      std::uint32_t from, std::uint32_t to,
                                      const Marking& start, const Marking& goal,
                                      const AStarOptions& opts = {});

enum class SegmentOutcome { Found, Unreachable, Budget };

struct SegmentAttempt {
  std::optional<Alignment> alignment;  // set iff outcome == Found
  std::size_t explored = 0;
  SegmentOutcome outcome = SegmentOutcome::Unreachable;
};

// Non-throwing form of segment_optimal_alignment for callers probing many
// start markings: budget overruns and unreachable goals come back as
// outcomes carrying exact explored counts instead of exceptions. A start or
// goal marking outside the reachability graph still throws Unreachable —
// that is a caller error, not a search outcome.
SegmentAttempt try_segment_alignment(const CheckContext& ctx,
                                     const InternedTrace& trace,
                                     std::uint32_t from, std::uint32_t to,
                                     const Marking& start, const Marking& goal,
                                     const AStarOptions& opts = {});

// Estimated cost of everything after a partial alignment's window, given the
// marking it ends in. Receives the reachability-graph node alongside the
// marking so implementations can memoize per node; the zero function is a
// valid (exact-search) penalty.
using MarkingPenalty =
    std::function<Cost(std::uint32_t rg_node, const Marking& marking)>;

struct PartialOptions {
  std::size_t budget = 50'000;  // settled-state cap
  // Drain the frontier instead of stopping early once the collected goals
  // provably cannot be beaten. Testing aid for the pruning-soundness check.
  bool exhaustive = false;
};

struct PartialGoal {
  Alignment alignment;  // consumes window [from, to), may end in any marking
  Cost penalty = 0;
  Cost total = 0;  // alignment.cost + penalty
};

struct PartialResult {
  // Distinct final markings, each with its cheapest alignment, sorted by
  // (total, alignment cost, canonical marking order).
  std::vector<PartialGoal> goals;
  std::size_t explored = 0;
  bool truncated = false;  // budget hit after at least one goal was found
};

// Uniform-cost search over the synchronous product of trace[from, to) and the
// model, started at `start`. A goal is any state whose trace position reached
// `to` — the marking is unconstrained; goal states keep expanding through
// Model moves so markings behind them are found too. Each goal marking is
// collected once, at its first (cheapest) settlement. Stops when n_goals
// distinct markings are collected and the frontier's minimum cost proves no
// better total can appear, when the frontier empties, or at the budget.
// Throws NoGoalFound / BudgetExceeded only when zero goals were collected.
PartialResult partial_alignments(const CheckContext& ctx, const Marking& start,
                                 const InternedTrace& trace, std::uint32_t from,
                                 std::uint32_t to, std::size_t n_goals,
                                 const MarkingPenalty& penalty,
                                 const PartialOptions& opts = {});
PartialResult partial_alignments(const CheckContext& ctx, const Marking& start,
                                 const SubtraceView& window, std::size_t n_goals,
                                 const MarkingPenalty& penalty,
                                 const PartialOptions& opts = {});

// Internal soundness check run on every search result: replays the moves
// from `start`, verifying firing legality, the log-side projection against
// trace[from, trace_progress), cost accounting, and the final marking.
// Throws std::logic_error on any mismatch — reaching that is a bug, not bad
// input.
void verify_alignment(const CheckContext& ctx, const InternedTrace& trace,
                      std::uint32_t from, const Marking& start,
                      const Alignment& alignment);

}  // namespace wincc
