#include "wincc/alignment.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

namespace wincc {

namespace {

constexpr std::uint64_t kNoParent = UINT64_MAX;

// Open-list entry. Stale entries (superseded by a cheaper push to the same
// state) are skipped at pop time instead of being removed.
struct QueueEntry {
  Cost f;              // g + heuristic; equals g in uniform-cost searches
  Cost g;
  std::uint32_t rank;  // canonical marking rank, third tie-break key
  std::uint64_t seq;   // insertion counter: FIFO among otherwise-equal entries
  std::uint64_t key;
};

struct QueueOrder {
  bool operator()(const QueueEntry& a, const QueueEntry& b) const {
    return std::tie(a.f, a.g, a.rank, a.seq) > std::tie(b.f, b.g, b.rank, b.seq);
  }
};

struct StateRecord {
  Cost g;                // cheapest cost pushed so far
  std::uint64_t parent;  // predecessor state key, kNoParent at the start
  Move via;              // move taken from the predecessor
  bool settled = false;
};

// Dijkstra/A* scaffolding over synchronous-product states (reachability
// node, trace position), keyed as node * (to + 1) + position. Successors are
// generated straight from the reachability graph's edge lists, which are in
// transition-id order, so the push order is Sync moves, then Model moves,
// then the Log move — the documented deterministic expansion order.
class ProductSearch {
 public:
  ProductSearch(const CheckContext& ctx, const InternedTrace& trace,
                std::uint32_t from, std::uint32_t to)
      : ctx_(ctx), trace_(trace), from_(from), to_(to),
        width_(static_cast<std::uint64_t>(to) + 1) {}

  std::uint64_t key_of(std::uint32_t node, std::uint32_t pos) const {
    return node * width_ + pos;
  }
  std::uint32_t node_of(std::uint64_t key) const {
    return static_cast<std::uint32_t>(key / width_);
  }
  std::uint32_t pos_of(std::uint64_t key) const {
    return static_cast<std::uint32_t>(key % width_);
  }

  // Enables the admissible cost-to-go estimate: remaining events whose
  // labels are unreachable from the current marking, each priced at one Log
  // move. Consistent, because reachable-label sets only shrink along edges.
  void enable_heuristic() {
    const std::size_t alpha = trace_.alphabet_size;
    suffix_.assign(to_ + 1, std::vector<std::uint32_t>(alpha, 0));
    for (std::uint32_t p = to_; p-- > from_;) {
      suffix_[p] = suffix_[p + 1];
      suffix_[p][trace_.labels[p]] += 1;
    }
  }

  Cost heuristic(std::uint32_t node, std::uint32_t pos) const {
    if (suffix_.empty()) return 0;
    Cost unreachable = 0;
    const std::vector<std::uint32_t>& row = suffix_[pos];
    for (std::size_t a = 0; a < row.size(); ++a) {
      if (row[a] == 0) continue;
      if (a >= ctx_.reach.alphabet_size ||
          !ctx_.reach.reachable(node, static_cast<LabelIdx>(a)))
        unreachable += row[a];
    }
    return unreachable * ctx_.costs.log_move;
  }

  void seed(std::uint32_t start_node) {
    const std::uint64_t k = key_of(start_node, from_);
    table_.emplace(k, StateRecord{0, kNoParent, Move{}, false});
    open_.push(QueueEntry{heuristic(start_node, from_), 0,
                          ctx_.marking_rank(start_node), seq_++, k});
  }

  // Pops until a not-yet-settled state surfaces; marks it settled.
  // Returns false when the frontier is exhausted.
  bool next_settlement(std::uint64_t& key, Cost& g) {
    while (!open_.empty()) {
      QueueEntry e = open_.top();
      open_.pop();
      auto it = table_.find(e.key);
      if (it->second.settled || e.g != it->second.g) continue;
      it->second.settled = true;
      ++settled_;
      key = e.key;
      g = e.g;
      return true;
    }
    return false;
  }

  // Like next_settlement, but exposes the frontier minimum cost first so the
  // caller can apply a stopping rule before committing to the settlement.
  std::optional<Cost> frontier_min() {
    while (!open_.empty()) {
      const QueueEntry& e = open_.top();
      auto it = table_.find(e.key);
      if (it->second.settled || e.g != it->second.g) {
        open_.pop();
        continue;
      }
      return e.g;
    }
    return std::nullopt;
  }

  void expand(std::uint64_t key, Cost g) {
    const std::uint32_t node = node_of(key);
    const std::uint32_t pos = pos_of(key);
    const auto& edges = ctx_.rg.adjacency[node];
    const bool has_event = pos < to_;
    if (has_event) {
      const LabelIdx want = trace_.labels[pos];
      for (const ReachabilityGraph::Edge& e : edges)
        if (ctx_.transition_labels[e.transition] == want)
          push(e.target, pos + 1, g + ctx_.costs.sync,
               Move{MoveKind::Sync, e.transition, pos}, key);
    }
    for (const ReachabilityGraph::Edge& e : edges) {
      const bool silent = ctx_.transition_labels[e.transition] == kSilentLabel;
      push(e.target, pos,
           g + (silent ? ctx_.costs.silent_move : ctx_.costs.model_move),
           Move{MoveKind::Model, e.transition, kNoTraceIndex}, key);
    }
    if (has_event)
      push(node, pos + 1, g + ctx_.costs.log_move,
           Move{MoveKind::Log, kNoTransition, pos}, key);
  }

  Alignment reconstruct(std::uint64_t goal_key) const {
    Alignment a;
    a.final_marking = ctx_.rg.nodes[node_of(goal_key)];
    a.trace_progress = pos_of(goal_key);
    a.cost = table_.at(goal_key).g;
    std::uint64_t key = goal_key;
    while (true) {
      const StateRecord& rec = table_.at(key);
      if (rec.parent == kNoParent) break;
      a.moves.push_back(rec.via);
      key = rec.parent;
    }
    std::reverse(a.moves.begin(), a.moves.end());
    return a;
  }

  std::size_t settled() const { return settled_; }

 private:
  void push(std::uint32_t node, std::uint32_t pos, Cost g, Move via,
            std::uint64_t parent) {
    const std::uint64_t k = key_of(node, pos);
    auto [it, inserted] = table_.try_emplace(k, StateRecord{g, parent, via, false});
    if (!inserted) {
      // Keep the first push at equal cost: it pops first and its recorded
      // parent must be the one the reconstruction follows.
      if (it->second.settled || it->second.g <= g) return;
      it->second = StateRecord{g, parent, via, false};
    }
    open_.push(QueueEntry{g + heuristic(node, pos), g, ctx_.marking_rank(node),
                          seq_++, k});
  }

  const CheckContext& ctx_;
  const InternedTrace& trace_;
  std::uint32_t from_, to_;
  std::uint64_t width_;
  std::vector<std::vector<std::uint32_t>> suffix_;  // empty unless heuristic on
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, QueueOrder> open_;
  std::unordered_map<std::uint64_t, StateRecord> table_;
  std::uint64_t seq_ = 0;
  std::size_t settled_ = 0;
};

[[noreturn]] void fail_verification(const std::string& what) {
  throw std::logic_error("alignment verification failed: " + what);
}

}  // namespace

std::optional<std::string> move_label(const ProcessNet& net, const Trace& trace,
                                      const Move& move) {
  if (move.kind == MoveKind::Log) return trace.activities[move.trace_index];
  return net.transition(move.transition).label;
}

Cost move_cost(const ProcessNet& net, const Move& move,
               const CostProfile& profile) {
  switch (move.kind) {
    case MoveKind::Sync:
      return profile.sync;
    case MoveKind::Log:
      return profile.log_move;
    case MoveKind::Model:
      return net.transition(move.transition).silent() ? profile.silent_move
                                                      : profile.model_move;
  }
  throw std::logic_error("unknown move kind");
}

InternedTrace intern_trace(const ProcessNet& net, const Trace& trace) {
  InternedTrace interned;
  interned.trace = &trace;
  interned.labels.reserve(trace.length());
  std::unordered_map<std::string_view, LabelIdx> foreign_index;
  for (const std::string& activity : trace.activities) {
    if (std::optional<LabelIdx> idx = net.label_index(activity)) {
      interned.labels.push_back(*idx);
      continue;
    }
    const LabelIdx next =
        static_cast<LabelIdx>(net.label_count() + interned.foreign.size());
    auto [it, inserted] = foreign_index.try_emplace(activity, next);
    if (inserted) interned.foreign.push_back(activity);
    interned.labels.push_back(it->second);
  }
  interned.alphabet_size = net.label_count() + interned.foreign.size();
  return interned;
}

CheckContext::CheckContext(const ProcessNet& n, CostProfile profile,
                           std::size_t state_cap)
    : net(&n),
      rg(build_reachability_graph(n, state_cap)),
      reach(reachable_label_sets(rg, n)),
      costs(profile) {
  transition_labels.reserve(n.transitions().size());
  for (TransIdx t = 0; t < n.transitions().size(); ++t)
    transition_labels.push_back(n.transition_label(t));
}

std::vector<std::pair<Move, SyncState>> successors(const ProcessNet& net,
                                                   const SyncState& s,
                                                   const SubtraceView& window,
                                                   const CostProfile& profile) {
  std::vector<std::pair<Move, SyncState>> out;
  const std::vector<TransIdx> enabled = enabled_transitions(net, s.marking);
  const bool has_event = s.trace_position < window.end;
  const std::string_view next =
      has_event ? window.activity(s.trace_position) : std::string_view{};
  for (TransIdx t : enabled) {
    const Transition& tr = net.transition(t);
    if (has_event && !tr.silent() && *tr.label == next)
      out.emplace_back(Move{MoveKind::Sync, t, s.trace_position},
                       SyncState{fire(net, s.marking, t), s.trace_position + 1,
                                 s.g + profile.sync});
  }
  for (TransIdx t : enabled) {
    const bool silent = net.transition(t).silent();
    out.emplace_back(
        Move{MoveKind::Model, t, kNoTraceIndex},
        SyncState{fire(net, s.marking, t), s.trace_position,
                  s.g + (silent ? profile.silent_move : profile.model_move)});
  }
  if (has_event)
    out.emplace_back(Move{MoveKind::Log, kNoTransition, s.trace_position},
                     SyncState{s.marking, s.trace_position + 1,
                               s.g + profile.log_move});
  return out;
}

SegmentAttempt try_segment_alignment(const CheckContext& ctx,
                                     const InternedTrace& trace,
                                     std::uint32_t from, std::uint32_t to,
                                     const Marking& start, const Marking& goal,
                                     const AStarOptions& opts) {
  const std::optional<std::uint32_t> start_node = ctx.rg.node_of(start);
  if (!start_node)
    throw Unreachable("alignment start marking lies outside the model's reachable states");
  const std::optional<std::uint32_t> goal_node = ctx.rg.node_of(goal);
  if (!goal_node)
    throw Unreachable("goal marking is not reachable from the initial marking");

  ProductSearch search(ctx, trace, from, to);
  if (opts.remaining_events_heuristic) search.enable_heuristic();
  search.seed(*start_node);
  const std::uint64_t goal_key = search.key_of(*goal_node, to);

  std::uint64_t key = 0;
  Cost g = 0;
  while (search.next_settlement(key, g)) {
    if (key == goal_key) {
      SegmentAttempt attempt{search.reconstruct(goal_key), search.settled(),
                             SegmentOutcome::Found};
      verify_alignment(ctx, trace, from, start, *attempt.alignment);
      return attempt;
    }
    if (search.settled() >= opts.budget)
      return SegmentAttempt{std::nullopt, search.settled(),
                            SegmentOutcome::Budget};
    search.expand(key, g);
  }
  return SegmentAttempt{std::nullopt, search.settled(),
                        SegmentOutcome::Unreachable};
}

AStarResult segment_optimal_alignment(const CheckContext& ctx,
                                      const InternedTrace& trace,
                                      std::uint32_t from, std::uint32_t to,
                                      const Marking& start, const Marking& goal,
                                      const AStarOptions& opts) {
  SegmentAttempt attempt =
      try_segment_alignment(ctx, trace, from, to, start, goal, opts);
  switch (attempt.outcome) {
    case SegmentOutcome::Found:
      return AStarResult{std::move(*attempt.alignment), attempt.explored};
    case SegmentOutcome::Budget:
      throw BudgetExceeded("alignment search exceeded " +
                           std::to_string(opts.budget) + " settled states");
    case SegmentOutcome::Unreachable:
      break;
  }
  throw Unreachable("no alignment reaches the goal marking at the end of the trace");
}

AStarResult astar_optimal_alignment(const CheckContext& ctx,
                                    const InternedTrace& trace,
                                    const AStarOptions& opts) {
  return segment_optimal_alignment(ctx, trace, 0, trace.length(),
                                   ctx.net->initial_marking(),
                                   ctx.net->final_marking(), opts);
}

AStarResult astar_optimal_alignment(const CheckContext& ctx, const Trace& trace,
                                    const AStarOptions& opts) {
  const InternedTrace interned = intern_trace(*ctx.net, trace);
  return astar_optimal_alignment(ctx, interned, opts);
}

PartialResult partial_alignments(const CheckContext& ctx, const Marking& start,
                                 const InternedTrace& trace, std::uint32_t from,
                                 std::uint32_t to, std::size_t n_goals,
                                 const MarkingPenalty& penalty,
                                 const PartialOptions& opts) {
  if (n_goals == 0)
    throw std::invalid_argument("partial_alignments requires n_goals >= 1");
  const std::optional<std::uint32_t> start_node = ctx.rg.node_of(start);
  if (!start_node)
    throw Unreachable("alignment start marking lies outside the model's reachable states");

  ProductSearch search(ctx, trace, from, to);
  search.seed(*start_node);

  struct Collected {
    std::uint64_t key;
    Cost g;
    Cost pen;
    Cost total;
    std::uint32_t rank;
  };
  std::vector<Collected> collected;
  std::unordered_set<std::uint32_t> goal_nodes_seen;
  std::optional<Cost> stop_threshold;  // n_goals-th best total, once known
  bool truncated = false;

  const auto refresh_threshold = [&] {
    if (collected.size() < n_goals) return;
    std::vector<Cost> totals;
    totals.reserve(collected.size());
    for (const Collected& c : collected) totals.push_back(c.total);
    std::nth_element(totals.begin(), totals.begin() + (n_goals - 1),
                     totals.end());
    stop_threshold = totals[n_goals - 1];
  };

  while (true) {
    // Stopping rule: once n_goals markings are in hand and every state still
    // on the frontier already costs at least the n_goals-th best total, no
    // undiscovered goal can improve the ranking (penalties are nonnegative).
    if (!opts.exhaustive && stop_threshold) {
      const std::optional<Cost> frontier = search.frontier_min();
      if (!frontier || *frontier >= *stop_threshold) break;
    }
    std::uint64_t key = 0;
    Cost g = 0;
    if (!search.next_settlement(key, g)) break;

    const std::uint32_t node = search.node_of(key);
    if (search.pos_of(key) == to && goal_nodes_seen.insert(node).second) {
      const Cost pen = penalty(node, ctx.rg.nodes[node]);
      collected.push_back(
          Collected{key, g, pen, g + pen, ctx.marking_rank(node)});
      refresh_threshold();
    }
    if (search.settled() >= opts.budget) {
      if (collected.empty())
        throw BudgetExceeded("window search exceeded " +
                             std::to_string(opts.budget) +
                             " settled states before reaching any goal");
      truncated = true;
      break;
    }
    // Goal states expand too: markings that lie behind a goal through Model
    // moves are goals in their own right.
    search.expand(key, g);
  }

  if (collected.empty())
    throw NoGoalFound("window search exhausted the state space without reaching the window end");

  std::sort(collected.begin(), collected.end(),
            [](const Collected& a, const Collected& b) {
              return std::tie(a.total, a.g, a.rank) <
                     std::tie(b.total, b.g, b.rank);
            });

  PartialResult result;
  result.explored = search.settled();
  result.truncated = truncated;
  result.goals.reserve(collected.size());
  for (const Collected& c : collected) {
    PartialGoal goal{search.reconstruct(c.key), c.pen, c.total};
    verify_alignment(ctx, trace, from, start, goal.alignment);
    result.goals.push_back(std::move(goal));
  }
  return result;
}

PartialResult partial_alignments(const CheckContext& ctx, const Marking& start,
                                 const SubtraceView& window, std::size_t n_goals,
                                 const MarkingPenalty& penalty,
                                 const PartialOptions& opts) {
  const InternedTrace interned = intern_trace(*ctx.net, *window.parent);
  return partial_alignments(ctx, start, interned, window.start, window.end,
                            n_goals, penalty, opts);
}

void verify_alignment(const CheckContext& ctx, const InternedTrace& trace,
                      std::uint32_t from, const Marking& start,
                      const Alignment& alignment) {
  const ProcessNet& net = *ctx.net;
  Marking marking = start;
  Cost cost = 0;
  std::uint32_t pos = from;
  for (const Move& move : alignment.moves) {
    switch (move.kind) {
      case MoveKind::Sync: {
        if (move.trace_index != pos) fail_verification("sync move out of order");
        if (pos >= trace.length()) fail_verification("sync move past trace end");
        const Transition& t = net.transition(move.transition);
        if (t.silent()) fail_verification("sync move on a silent transition");
        if (net.transition_label(move.transition) != trace.labels[pos])
          fail_verification("sync move label differs from the trace event");
        if (!is_enabled(net, marking, move.transition))
          fail_verification("sync move fires a disabled transition");
        marking = fire(net, marking, move.transition);
        cost += ctx.costs.sync;
        ++pos;
        break;
      }
      case MoveKind::Model: {
        if (!is_enabled(net, marking, move.transition))
          fail_verification("model move fires a disabled transition");
        const bool silent = net.transition(move.transition).silent();
        marking = fire(net, marking, move.transition);
        cost += silent ? ctx.costs.silent_move : ctx.costs.model_move;
        break;
      }
      case MoveKind::Log: {
        if (move.trace_index != pos) fail_verification("log move out of order");
        if (pos >= trace.length()) fail_verification("log move past trace end");
        cost += ctx.costs.log_move;
        ++pos;
        break;
      }
    }
  }
  if (pos != alignment.trace_progress)
    fail_verification("trace progress does not match the consumed events");
  if (cost != alignment.cost)
    fail_verification("recorded cost differs from the priced move sequence");
  if (!(marking == alignment.final_marking))
    fail_verification("replay does not end in the recorded final marking");
}

}  // namespace wincc
