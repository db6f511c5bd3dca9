#include "wincc/sliding_window.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

namespace wincc {

namespace {

void check_config(const WindowConfig& cfg) {
  if (cfg.window_length == 0)
    throw WindowLengthZero("window length must be at least 1");
  if (cfg.beam_width == 0)
    throw std::invalid_argument("beam width must be at least 1");
  if (cfg.goal_overcollect == 0)
    throw std::invalid_argument("goal overcollect multiplier must be at least 1");
}

// Dense per-position label counts over the interned alphabet: rows[p][a] is
// how often label a occurs in the trace suffix starting at position p.
struct InternedSuffix {
  std::vector<std::vector<std::uint32_t>> rows;  // (n + 1) x alphabet

  explicit InternedSuffix(const InternedTrace& trace) {
    const std::uint32_t n = trace.length();
    rows.assign(n + 1, std::vector<std::uint32_t>(trace.alphabet_size, 0));
    for (std::uint32_t p = n; p-- > 0;) {
      rows[p] = rows[p + 1];
      rows[p][trace.labels[p]] += 1;
    }
  }
};

// Node-memoized marginal-cost bound for the suffix at one position: every
// remaining event whose label cannot be reached from the marking needs at
// least one log move. Labels the model does not know (interned past the
// model alphabet) are nonreachable from every marking.
class SuffixPenalty {
 public:
  SuffixPenalty(const CheckContext& ctx, const InternedSuffix& suffix,
                std::uint32_t position)
      : ctx_(ctx), row_(suffix.rows[position]) {}

  Cost operator()(std::uint32_t node, const Marking&) {
    auto [it, inserted] = memo_.try_emplace(node, 0);
    if (!inserted) return it->second;
    Cost count = 0;
    for (std::size_t a = 0; a < row_.size(); ++a) {
      if (row_[a] == 0) continue;
      if (a >= ctx_.reach.alphabet_size ||
          !ctx_.reach.reachable(node, static_cast<LabelIdx>(a)))
        count += row_[a];
    }
    it->second = count * ctx_.costs.log_move;
    return it->second;
  }

 private:
  const CheckContext& ctx_;
  const std::vector<std::uint32_t>& row_;
  std::unordered_map<std::uint32_t, Cost> memo_;
};

BeamEntry compose(const BeamEntry& parent, const Alignment& extension) {
  BeamEntry out;
  out.prefix.moves = parent.prefix.moves;
  out.prefix.moves.insert(out.prefix.moves.end(), extension.moves.begin(),
                          extension.moves.end());
  out.prefix.cost = parent.accumulated_cost + extension.cost;
  out.prefix.final_marking = extension.final_marking;
  out.prefix.trace_progress = extension.trace_progress;
  out.model_marking = extension.final_marking;
  out.accumulated_cost = out.prefix.cost;
  return out;
}

}  // namespace

Cost marginal_cost_lower_bound(const std::set<std::string>& labels_reachable,
                               const SuffixFrequency& remaining,
                               std::size_t position) {
  Cost total = 0;
  const std::vector<std::string>& labels = remaining.labels();
  const std::span<const std::uint32_t> row = remaining.row(position);
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (row[i] > 0 && !labels_reachable.contains(labels[i])) total += row[i];
  return total;
}

ConformanceResult window_conformance(const CheckContext& ctx, const Trace& trace,
                                     const WindowConfig& cfg) {
  check_config(cfg);
  const auto started = std::chrono::steady_clock::now();
  const ProcessNet& net = *ctx.net;
  const Marking& final_marking = net.final_marking();
  if (!ctx.rg.node_of(final_marking))
    throw Unreachable("final marking is not reachable from the initial marking");

  const InternedTrace itrace = intern_trace(net, trace);
  const std::uint32_t n = itrace.length();
  const std::uint32_t L = cfg.window_length;
  const std::size_t window_count = (n + L - 1) / L;

  ConformanceResult result;
  result.windows = window_count;

  if (n == 0) {
    // No windows; the whole alignment is the cheapest pure-model path.
    AStarResult direct = segment_optimal_alignment(
        ctx, itrace, 0, 0, net.initial_marking(), final_marking,
        AStarOptions{cfg.per_window_budget, false});
    result.alignment = std::move(direct.alignment);
    result.cost = result.alignment.cost;
    result.explored_nodes = direct.explored;
    result.wall_time = std::chrono::steady_clock::now() - started;
    return result;
  }

  const InternedSuffix suffix(itrace);

  std::vector<BeamEntry> beam;
  {
    BeamEntry init;
    init.model_marking = net.initial_marking();
    init.prefix.final_marking = init.model_marking;
    beam.push_back(std::move(init));
  }

  const std::size_t goals_per_entry =
      static_cast<std::size_t>(cfg.beam_width) * cfg.goal_overcollect;

  for (std::uint32_t w = 0; w + 1 < window_count; ++w) {
    const std::uint32_t wstart = w * L;
    const std::uint32_t wend = wstart + L;
    MarkingPenalty penalty = SuffixPenalty(ctx, suffix, wend);

    std::vector<PartialResult> partials;
    partials.reserve(beam.size());
    std::size_t window_explored = 0;
    for (const BeamEntry& entry : beam) {
      PartialResult pr = partial_alignments(
          ctx, entry.model_marking, itrace, wstart, wend, goals_per_entry,
          penalty, PartialOptions{cfg.per_window_budget, false});
      window_explored += pr.explored;
      result.truncated |= pr.truncated;
      partials.push_back(std::move(pr));
    }
    result.explored_nodes += window_explored;

    // Merge: every beam entry's goals, re-ranked on accumulated cost.
    struct Candidate {
      std::size_t parent;
      const PartialGoal* goal;
      Cost accumulated;
      Cost total;
      std::uint32_t node;
      std::uint32_t rank;
    };
    std::vector<Candidate> candidates;
    for (std::size_t i = 0; i < beam.size(); ++i) {
      const std::vector<PartialGoal>& goals = partials[i].goals;
      const std::size_t take = std::min(goals.size(), goals_per_entry);
      for (std::size_t k = 0; k < take; ++k) {
        const PartialGoal& goal = goals[k];
        const std::uint32_t node =
            *ctx.rg.node_of(goal.alignment.final_marking);
        const Cost accumulated = beam[i].accumulated_cost + goal.alignment.cost;
        candidates.push_back(Candidate{i, &goal, accumulated,
                                       accumulated + goal.penalty, node,
                                       ctx.marking_rank(node)});
      }
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& a, const Candidate& b) {
                       return std::tie(a.total, a.accumulated, a.rank) <
                              std::tie(b.total, b.accumulated, b.rank);
                     });

    // Keep the top N candidates with pairwise-distinct final markings; the
    // first hit per marking is its cheapest extension.
    std::vector<BeamEntry> next_beam;
    std::unordered_set<std::uint32_t> used_nodes;
    WindowDetail detail;
    detail.window_index = w;
    detail.explored = window_explored;
    for (const Candidate& c : candidates) {
      const bool fresh = used_nodes.insert(c.node).second;
      const bool keep = fresh && next_beam.size() < cfg.beam_width;
      if (keep) next_beam.push_back(compose(beam[c.parent], c.goal->alignment));
      if (cfg.record_windows)
        detail.candidates.push_back(WindowCandidate{
            c.goal->alignment.final_marking, c.accumulated, c.goal->penalty,
            c.total, keep});
    }
    if (cfg.record_windows)
      result.window_details.push_back(std::move(detail));
    beam = std::move(next_beam);
  }

  // Final window: every surviving prefix is closed with an exact search to
  // the joint goal (final marking, end of trace). Entries that hit the
  // budget are retried once at 10x before the run is declared unreachable.
  const std::uint32_t wstart = static_cast<std::uint32_t>(window_count - 1) * L;
  struct Closed {
    std::size_t parent;
    Alignment extension;
    Cost total;
  };
  std::vector<Closed> closed;
  std::vector<std::size_t> budget_hit;
  std::size_t final_explored = 0;

  const auto close_entry = [&](std::size_t i, std::size_t budget) {
    SegmentAttempt attempt = try_segment_alignment(
        ctx, itrace, wstart, n, beam[i].model_marking, final_marking,
        AStarOptions{budget, false});
    final_explored += attempt.explored;
    switch (attempt.outcome) {
      case SegmentOutcome::Found: {
        const Cost total = beam[i].accumulated_cost + attempt.alignment->cost;
        closed.push_back(Closed{i, std::move(*attempt.alignment), total});
        break;
      }
      case SegmentOutcome::Budget:
        budget_hit.push_back(i);
        result.truncated = true;
        break;
      case SegmentOutcome::Unreachable:
        break;
    }
  };

  for (std::size_t i = 0; i < beam.size(); ++i)
    close_entry(i, cfg.per_window_budget);
  if (closed.empty() && !budget_hit.empty()) {
    const std::vector<std::size_t> retry = std::move(budget_hit);
    budget_hit.clear();
    for (std::size_t i : retry) close_entry(i, cfg.per_window_budget * 10);
  }
  result.explored_nodes += final_explored;

  if (closed.empty())
    throw Unreachable(
        "no beam alignment reaches the final marking within the window budget");

  const Closed* best = &closed.front();
  for (const Closed& c : closed)
    if (c.total < best->total) best = &c;

  if (cfg.record_windows) {
    WindowDetail detail;
    detail.window_index = static_cast<std::uint32_t>(window_count - 1);
    detail.explored = final_explored;
    for (const Closed& c : closed)
      detail.candidates.push_back(WindowCandidate{beam[c.parent].model_marking,
                                                  c.total, 0, c.total,
                                                  &c == best});
    result.window_details.push_back(std::move(detail));
  }

  BeamEntry full = compose(beam[best->parent], best->extension);
  verify_alignment(ctx, itrace, 0, net.initial_marking(), full.prefix);
  result.alignment = std::move(full.prefix);
  result.cost = result.alignment.cost;
  result.wall_time = std::chrono::steady_clock::now() - started;
  return result;
}

OracleComparison compare_with_oracle(const CheckContext& ctx, const Trace& trace,
                                     const WindowConfig& cfg,
                                     std::size_t oracle_budget) {
  OracleComparison record;

  const auto window_started = std::chrono::steady_clock::now();
  const ConformanceResult window = window_conformance(ctx, trace, cfg);
  record.window_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                    window_started)
          .count();
  record.window_cost = window.cost;
  record.explored_window = window.explored_nodes;

  const auto oracle_started = std::chrono::steady_clock::now();
  try {
    const AStarResult oracle = astar_optimal_alignment(
        ctx, trace, AStarOptions{oracle_budget, true});
    record.optimal_cost = oracle.alignment.cost;
    record.explored_oracle = oracle.explored;
  } catch (const BudgetExceeded&) {
    record.oracle_skipped = true;
  }
  record.oracle_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                    oracle_started)
          .count();

  if (record.optimal_cost) {
    if (record.window_cost < *record.optimal_cost)
      throw std::logic_error(
          "window conformance undercut the exact optimum; one of the searches is wrong");
    record.delta =
        static_cast<double>(record.window_cost - *record.optimal_cost) /
        static_cast<double>(std::max<Cost>(*record.optimal_cost, 1));
  }
  return record;
}

}  // namespace wincc
