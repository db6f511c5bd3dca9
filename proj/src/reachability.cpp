#include "wincc/reachability.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace wincc {

ReachabilityGraph build_reachability_graph(const ProcessNet& net,
                                           std::size_t state_cap) {
  if (state_cap < 1) state_cap = 1;
  ReachabilityGraph rg;
  rg.nodes.push_back(net.initial_marking());
  rg.index.emplace(net.initial_marking(), 0);
  rg.adjacency.emplace_back();
  rg.root = 0;

  for (std::uint32_t current = 0; current < rg.nodes.size(); ++current) {
    for (TransIdx t = 0; t < net.transitions().size(); ++t) {
      if (!is_enabled(net, rg.nodes[current], t)) continue;
      Marking next = fire(net, rg.nodes[current], t);
      auto [it, inserted] =
          rg.index.emplace(std::move(next), static_cast<std::uint32_t>(rg.nodes.size()));
      if (inserted) {
        if (rg.nodes.size() >= state_cap)
          throw StateCapExceeded(
              "reachability graph exceeds the state cap of " +
              std::to_string(state_cap) + " markings");
        rg.nodes.push_back(it->first);
        rg.adjacency.emplace_back();
      }
      rg.adjacency[current].push_back({it->second, t});
    }
  }

  // Rank nodes by canonical marking order for deterministic tie-breaking.
  std::vector<std::uint32_t> order(rg.nodes.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&rg](std::uint32_t a, std::uint32_t b) {
    return rg.nodes[a] < rg.nodes[b];
  });
  rg.canonical_rank.resize(rg.nodes.size());
  for (std::uint32_t rank = 0; rank < order.size(); ++rank)
    rg.canonical_rank[order[rank]] = rank;
  return rg;
}

std::size_t LabelSet::count() const {
  std::size_t n = 0;
  for (std::uint64_t w : words_) n += std::popcount(w);
  return n;
}

std::set<std::string> LabelReachability::labels_from(
    std::uint32_t node, const ProcessNet& net) const {
  std::set<std::string> result;
  for (LabelIdx l = 0; l < alphabet_size; ++l)
    if (table[node].test(l)) result.insert(net.label_name(l));
  return result;
}

SccPartition strongly_connected_components(const ReachabilityGraph& rg) {
  // Iterative Tarjan; the recursion would overflow on deep graphs.
  const std::uint32_t n = static_cast<std::uint32_t>(rg.nodes.size());
  constexpr std::uint32_t kUnvisited = UINT32_MAX;
  SccPartition out;
  out.component.assign(n, kUnvisited);

  std::vector<std::uint32_t> idx(n, kUnvisited), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::uint32_t> stack;
  std::uint32_t counter = 0;

  struct Frame {
    std::uint32_t node;
    std::uint32_t edge;  // next adjacency entry to process
  };
  std::vector<Frame> frames;

  for (std::uint32_t start = 0; start < n; ++start) {
    if (idx[start] != kUnvisited) continue;
    frames.push_back({start, 0});
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.edge == 0) {
        idx[f.node] = low[f.node] = counter++;
        stack.push_back(f.node);
        on_stack[f.node] = true;
      }
      if (f.edge < rg.adjacency[f.node].size()) {
        std::uint32_t next = rg.adjacency[f.node][f.edge].target;
        ++f.edge;
        if (idx[next] == kUnvisited) {
          frames.push_back({next, 0});
        } else if (on_stack[next]) {
          low[f.node] = std::min(low[f.node], idx[next]);
        }
      } else {
        std::uint32_t node = f.node;
        frames.pop_back();
        if (!frames.empty())
          low[frames.back().node] = std::min(low[frames.back().node], low[node]);
        if (low[node] == idx[node]) {
          // Root of a component; everything reachable from it is already
          // assigned, so components come out in reverse topological order.
          std::uint32_t comp = out.component_count++;
          while (true) {
            std::uint32_t member = stack.back();
            stack.pop_back();
            on_stack[member] = false;
            out.component[member] = comp;
            if (member == node) break;
          }
        }
      }
    }
  }
  return out;
}

LabelReachability reachable_label_sets(const ReachabilityGraph& rg,
                                       const ProcessNet& net) {
  LabelReachability result;
  result.alphabet_size = net.label_count();
  SccPartition scc = strongly_connected_components(rg);

  std::vector<LabelSet> comp_sets(scc.component_count,
                                  LabelSet(result.alphabet_size));
  std::vector<std::vector<std::uint32_t>> members(scc.component_count);
  for (std::uint32_t node = 0; node < rg.nodes.size(); ++node)
    members[scc.component[node]].push_back(node);

  // Component ids ascend in reverse topological order, so a single pass in
  // id order sees every successor component before its predecessors.
  for (std::uint32_t comp = 0; comp < scc.component_count; ++comp) {
    for (std::uint32_t node : members[comp]) {
      for (const auto& edge : rg.adjacency[node]) {
        LabelIdx label = net.transition_label(edge.transition);
        if (label != kSilentLabel) comp_sets[comp].set(label);
        std::uint32_t target_comp = scc.component[edge.target];
        if (target_comp != comp) comp_sets[comp] |= comp_sets[target_comp];
      }
    }
  }

  result.table.reserve(rg.nodes.size());
  for (std::uint32_t node = 0; node < rg.nodes.size(); ++node)
    result.table.push_back(comp_sets[scc.component[node]]);
  return result;
}

}  // namespace wincc
