#pragma once

// Reference alignment costs computed the slow, obviously-correct way: plain
// breadth-first enumeration of the joint (marking, position) space followed
// by Bellman relaxation to a fixpoint. No priority queue, no reachability
// graph, no heuristics — deliberately nothing shared with the real search,
// so the two implementations can check each other.

#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "wincc/petri_net.hpp"

namespace testutil {

namespace detail {

// Token counts keyed by place index; std::map gives canonical ordering for
// free, so the map itself is usable as a state key.
using SimpleMarking = std::map<std::uint32_t, std::uint32_t>;

inline SimpleMarking to_simple(const wincc::Marking& marking) {
  SimpleMarking out;
  for (const auto& [place, count] : marking.entries()) out[place] = count;
  return out;
}

inline bool simple_enabled(const wincc::ProcessNet& net,
                           const SimpleMarking& marking, wincc::TransIdx t) {
  SimpleMarking need;
  for (wincc::PlaceIdx p : net.transition(t).inputs) ++need[p];
  for (const auto& [place, count] : need) {
    const auto it = marking.find(place);
    if (it == marking.end() || it->second < count) return false;
  }
  return true;
}

inline SimpleMarking simple_fire(const wincc::ProcessNet& net,
                                 const SimpleMarking& marking,
                                 wincc::TransIdx t) {
  SimpleMarking out = marking;
  for (wincc::PlaceIdx p : net.transition(t).inputs) {
    auto it = out.find(p);
    if (--it->second == 0) out.erase(it);
  }
  for (wincc::PlaceIdx p : net.transition(t).outputs) ++out[p];
  return out;
}

}  // namespace detail

// Cheapest alignment of `suffix` starting from `start`. With a goal marking
// the alignment must end there; with std::nullopt any end marking counts.
// Returns std::nullopt when no alignment exists (goal unreachable) and
// throws std::runtime_error when the joint space exceeds `state_limit`.
inline std::optional<std::uint64_t> brute_force_cost(
    const wincc::ProcessNet& net, const wincc::Marking& start,
    const std::vector<std::string>& suffix,
    const std::optional<wincc::Marking>& goal,
    std::size_t state_limit = 500'000) {
  using detail::SimpleMarking;
  using State = std::pair<SimpleMarking, std::size_t>;  // marking, position
  constexpr std::uint64_t kInf = std::numeric_limits<std::uint64_t>::max();

  const std::size_t n = suffix.size();
  std::map<State, std::size_t> index;
  std::vector<State> states;
  std::vector<std::tuple<std::size_t, std::size_t, std::uint64_t>> edges;

  const auto intern = [&](State s) {
    const auto [it, fresh] = index.emplace(std::move(s), states.size());
    if (fresh) {
      states.push_back(it->first);
      if (states.size() > state_limit)
        throw std::runtime_error("brute force state limit exceeded");
    }
    return it->second;
  };

  intern({detail::to_simple(start), 0});
  for (std::size_t i = 0; i < states.size(); ++i) {
    const State state = states[i];  // copy: `states` may reallocate below
    const auto& [marking, pos] = state;
    for (wincc::TransIdx ti = 0; ti < net.transitions().size(); ++ti) {
      const wincc::Transition& t = net.transition(ti);  // model + sync moves
      if (!detail::simple_enabled(net, marking, ti)) continue;
      SimpleMarking next = detail::simple_fire(net, marking, ti);
      edges.emplace_back(i, intern({next, pos}), t.silent() ? 0 : 1);
      if (pos < n && t.label && *t.label == suffix[pos])
        edges.emplace_back(i, intern({std::move(next), pos + 1}), 0);
    }
    if (pos < n)  // log move
      edges.emplace_back(i, intern({marking, pos + 1}), 1);
  }

  std::vector<std::uint64_t> dist(states.size(), kInf);
  dist[0] = 0;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& [from, to, cost] : edges) {
      if (dist[from] == kInf) continue;
      if (dist[from] + cost < dist[to]) {
        dist[to] = dist[from] + cost;
        changed = true;
      }
    }
  }

  std::uint64_t best = kInf;
  const std::optional<SimpleMarking> goal_simple =
      goal ? std::optional(detail::to_simple(*goal)) : std::nullopt;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto& [marking, pos] = states[i];
    if (pos != n) continue;
    if (goal_simple && marking != *goal_simple) continue;
    best = std::min(best, dist[i]);
  }
  if (best == kInf) return std::nullopt;
  return best;
}

// Full-trace optimum: initial marking to final marking.
inline std::optional<std::uint64_t> brute_force_optimal(
    const wincc::ProcessNet& net, const std::vector<std::string>& activities,
    std::size_t state_limit = 500'000) {
  return brute_force_cost(net, net.initial_marking(), activities,
                          net.final_marking(), state_limit);
}

// Cheapest alignment cost of `suffix` from every start marking at once: the
// joint space is built over the firing closure of all starts, then a single
// backward zero/one BFS from the goal layer prices every state. Entry i is
// the cost from starts[i]; std::nullopt means no alignment exists (possible
// only when a goal marking is given). Same answers as brute_force_cost per
// start, at one search per suffix instead of one per (start, suffix).
inline std::vector<std::optional<std::uint64_t>> brute_force_suffix_costs(
    const wincc::ProcessNet& net, const std::vector<wincc::Marking>& starts,
    const std::vector<std::string>& suffix,
    const std::optional<wincc::Marking>& goal,
    std::size_t state_limit = 500'000) {
  using detail::SimpleMarking;
  constexpr std::uint64_t kInf = std::numeric_limits<std::uint64_t>::max();
  const std::size_t n = suffix.size();

  // Firing closure of the start markings; log/sync moves never leave it.
  std::map<SimpleMarking, std::size_t> index;
  std::vector<SimpleMarking> markings;
  const auto intern = [&](SimpleMarking m) {
    const auto [it, fresh] = index.emplace(std::move(m), markings.size());
    if (fresh) {
      markings.push_back(it->first);
      if (markings.size() * (n + 1) > state_limit)
        throw std::runtime_error("brute force state limit exceeded");
    }
    return it->second;
  };
  for (const wincc::Marking& start : starts) intern(detail::to_simple(start));

  struct Edge {
    std::size_t from;  // reversed: BFS relaxes from the goal layer backwards
    std::uint64_t cost;
  };
  const auto state_id = [&](std::size_t marking, std::size_t pos) {
    return marking * (n + 1) + pos;
  };
  std::vector<std::vector<Edge>> reverse_adj;
  for (std::size_t mi = 0; mi < markings.size(); ++mi) {
    const SimpleMarking marking = markings[mi];  // copy: vector reallocates
    reverse_adj.resize(markings.size() * (n + 1));
    for (std::size_t pos = 0; pos < n; ++pos)  // log move
      reverse_adj[state_id(mi, pos + 1)].push_back({state_id(mi, pos), 1});
    for (wincc::TransIdx ti = 0; ti < net.transitions().size(); ++ti) {
      const wincc::Transition& t = net.transition(ti);
      if (!detail::simple_enabled(net, marking, ti)) continue;
      const std::size_t mj = intern(detail::simple_fire(net, marking, ti));
      reverse_adj.resize(markings.size() * (n + 1));
      for (std::size_t pos = 0; pos <= n; ++pos)  // model move
        reverse_adj[state_id(mj, pos)].push_back(
            {state_id(mi, pos), t.silent() ? 0u : 1u});
      for (std::size_t pos = 0; pos < n; ++pos)  // sync move
        if (t.label && *t.label == suffix[pos])
          reverse_adj[state_id(mj, pos + 1)].push_back({state_id(mi, pos), 0});
    }
  }

  std::vector<std::uint64_t> dist(markings.size() * (n + 1), kInf);
  std::deque<std::size_t> queue;
  const auto seed = [&](std::size_t state) {
    dist[state] = 0;
    queue.push_back(state);
  };
  if (goal) {
    const auto it = index.find(detail::to_simple(*goal));
    if (it != index.end()) seed(state_id(it->second, n));
  } else {
    for (std::size_t mi = 0; mi < markings.size(); ++mi)
      seed(state_id(mi, n));
  }
  while (!queue.empty()) {
    const std::size_t s = queue.front();
    queue.pop_front();
    for (const Edge& e : reverse_adj[s]) {
      const std::uint64_t candidate = dist[s] + e.cost;
      if (candidate >= dist[e.from]) continue;
      dist[e.from] = candidate;
      if (e.cost == 0)
        queue.push_front(e.from);
      else
        queue.push_back(e.from);
    }
  }

  std::vector<std::optional<std::uint64_t>> out;
  out.reserve(starts.size());
  for (const wincc::Marking& start : starts) {
    const std::uint64_t d =
        dist[state_id(index.at(detail::to_simple(start)), 0)];
    out.push_back(d == kInf ? std::nullopt : std::optional(d));
  }
  return out;
}

// Every label that can still fire somewhere in the future of `start`,
// computed by plain marking-space flooding.
inline std::set<std::string> brute_force_reachable_labels(
    const wincc::ProcessNet& net, const wincc::Marking& start,
    std::size_t state_limit = 500'000) {
  using detail::SimpleMarking;
  std::set<std::string> labels;
  std::map<SimpleMarking, bool> seen;
  std::vector<SimpleMarking> queue{detail::to_simple(start)};
  seen[queue.front()] = true;
  while (!queue.empty()) {
    const SimpleMarking marking = std::move(queue.back());
    queue.pop_back();
    for (wincc::TransIdx ti = 0; ti < net.transitions().size(); ++ti) {
      const wincc::Transition& t = net.transition(ti);
      if (!detail::simple_enabled(net, marking, ti)) continue;
      if (t.label) labels.insert(*t.label);
      SimpleMarking next = detail::simple_fire(net, marking, ti);
      if (auto [it, fresh] = seen.emplace(std::move(next), true); fresh) {
        queue.push_back(it->first);
        if (seen.size() > state_limit)
          throw std::runtime_error("brute force state limit exceeded");
      }
    }
  }
  return labels;
}

}  // namespace testutil
