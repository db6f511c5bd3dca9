#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "wincc/petri_net.hpp"

namespace wincc {

inline constexpr std::size_t kDefaultStateCap = 100'000;

// Explicit reachability graph of a bounded net. Nodes are stored in BFS
// discovery order; per-node edges are ordered by transition index, which
// makes construction fully deterministic. canonical_rank[n] is the rank of
// node n among all nodes under the canonical marking order.
struct ReachabilityGraph {
  struct Edge {
    std::uint32_t target;
    TransIdx transition;
  };

  std::vector<Marking> nodes;
  std::vector<std::vector<Edge>> adjacency;
  std::uint32_t root = 0;
  std::vector<std::uint32_t> canonical_rank;
  std::unordered_map<Marking, std::uint32_t, MarkingHash> index;

  std::optional<std::uint32_t> node_of(const Marking& m) const {
    auto it = index.find(m);
    if (it == index.end()) return std::nullopt;
    return it->second;
  }

  std::size_t edge_count() const {
    std::size_t n = 0;
    for (const auto& adj : adjacency) n += adj.size();
    return n;
  }
};

// Breadth-first closure of fire() from the initial marking. Throws
// StateCapExceeded once more than state_cap distinct markings are found;
// the windowed algorithm requires a finite model state space.
ReachabilityGraph build_reachability_graph(const ProcessNet& net,
                                           std::size_t state_cap = kDefaultStateCap);

// Fixed-capacity bitset over the net's label alphabet.
class LabelSet {
 public:
  LabelSet() = default;
  explicit LabelSet(std::size_t bit_count)
      : words_((bit_count + 63) / 64, 0) {}

  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  bool test(std::size_t i) const {
    return (words_[i / 64] >> (i % 64)) & 1;
  }
  LabelSet& operator|=(const LabelSet& other) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= other.words_[w];
    return *this;
  }
  std::size_t count() const;
  friend bool operator==(const LabelSet&, const LabelSet&) = default;

 private:
  std::vector<std::uint64_t> words_;
};

// For each reachability-graph node, the set of non-silent labels occurring
// on some directed path starting at that node (transitions enabled at the
// node included). Silent transitions never appear.
struct LabelReachability {
  std::size_t alphabet_size = 0;
  std::vector<LabelSet> table;  // indexed by node

  bool reachable(std::uint32_t node, LabelIdx label) const {
    return table[node].test(label);
  }
  // String view of one table row, for diagnostics and the spec-level API.
  std::set<std::string> labels_from(std::uint32_t node,
                                    const ProcessNet& net) const;
};

// Strongly connected components of the graph. Components are numbered in
// reverse topological order of the condensation: every edge leaving a
// component points to a lower-numbered one.
struct SccPartition {
  std::vector<std::uint32_t> component;  // node -> component id
  std::uint32_t component_count = 0;
};

SccPartition strongly_connected_components(const ReachabilityGraph& rg);

// Single sweep over the SCC condensation in component order; each node gets
// its component's label union.
LabelReachability reachable_label_sets(const ReachabilityGraph& rg,
                                       const ProcessNet& net);

}  // namespace wincc
