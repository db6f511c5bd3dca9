#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "wincc/errors.hpp"

namespace wincc {

using PlaceIdx = std::uint32_t;
using TransIdx = std::uint32_t;
using LabelIdx = std::uint32_t;

inline constexpr LabelIdx kSilentLabel = UINT32_MAX;

// Multiset of places in canonical form: entries sorted by place index with
// strictly positive counts. Comparison and hashing operate on that form, so
// equal multisets always compare and hash equal, and operator<=> induces the
// canonical marking order used for tie-breaking everywhere downstream.
class Marking {
 public:
  using Entry = std::pair<PlaceIdx, std::uint32_t>;

  Marking() = default;

  // Canonicalizes: sorts, merges duplicates, drops zero counts.
  explicit Marking(std::vector<Entry> entries);

  static Marking from_places(std::span<const PlaceIdx> places);
  static Marking single(PlaceIdx place) { return from_places({&place, 1}); }

  const std::vector<Entry>& entries() const { return entries_; }
  std::uint32_t count_of(PlaceIdx place) const;
  std::uint64_t total_tokens() const;
  bool empty() const { return entries_.empty(); }

  friend bool operator==(const Marking&, const Marking&) = default;
  friend auto operator<=>(const Marking&, const Marking&) = default;

  std::size_t hash() const;

 private:
  std::vector<Entry> entries_;
};

struct MarkingHash {
  std::size_t operator()(const Marking& m) const { return m.hash(); }
};

struct Transition {
  std::string id;
  std::optional<std::string> label;  // nullopt = silent (tau)
  std::vector<PlaceIdx> inputs;      // sorted, distinct
  std::vector<PlaceIdx> outputs;     // sorted, distinct

  bool silent() const { return !label.has_value(); }
};

// Labeled Petri net with initial and final markings. Arc multiplicities are
// fixed at 1: a (place, transition) pair appears at most once per direction,
// duplicates are ignored. Place and transition identifiers must be unique.
//
// Non-silent labels are interned; label_count()/label_index()/label_name()
// expose the alphabet, and transition_label(t) yields the interned index of
// t's label (kSilentLabel for silent transitions).
class ProcessNet {
 public:
  PlaceIdx add_place(std::string id);
  TransIdx add_transition(std::string id, std::optional<std::string> label);
  void add_arc_pt(PlaceIdx place, TransIdx transition);
  void add_arc_tp(TransIdx transition, PlaceIdx place);
  // Endpoint lookup by identifier; direction is deduced. Unknown names throw
  // MalformedInput.
  void add_arc(std::string_view source, std::string_view target);

  void set_initial_marking(Marking m);
  void set_final_marking(Marking m);

  std::size_t place_count() const { return place_ids_.size(); }
  const std::string& place_id(PlaceIdx p) const { return place_ids_[p]; }
  std::optional<PlaceIdx> find_place(std::string_view id) const;

  const std::vector<Transition>& transitions() const { return transitions_; }
  const Transition& transition(TransIdx t) const { return transitions_[t]; }
  std::optional<TransIdx> find_transition(std::string_view id) const;

  std::size_t label_count() const { return labels_.size(); }
  const std::string& label_name(LabelIdx l) const { return labels_[l]; }
  std::optional<LabelIdx> label_index(std::string_view label) const;
  LabelIdx transition_label(TransIdx t) const { return transition_labels_[t]; }

  const Marking& initial_marking() const { return initial_; }
  bool has_final_marking() const { return final_.has_value(); }
  const Marking& final_marking() const;

  // Checks the structural invariants (marking places exist, ids unique by
  // construction) and that both markings are set. Throws MalformedInput.
  void validate() const;

 private:
  void check_place(PlaceIdx p) const;
  void check_transition(TransIdx t) const;

  std::vector<std::string> place_ids_;
  std::unordered_map<std::string, PlaceIdx> place_index_;
  std::vector<Transition> transitions_;
  std::unordered_map<std::string, TransIdx> transition_index_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, LabelIdx> label_index_;
  std::vector<LabelIdx> transition_labels_;
  Marking initial_;
  std::optional<Marking> final_;
};

bool is_enabled(const ProcessNet& net, const Marking& m, TransIdx t);

// Transitions whose full input-place multiset is covered by m, in ascending
// transition order.
std::vector<TransIdx> enabled_transitions(const ProcessNet& net,
                                          const Marking& m);

// m minus t's inputs plus t's outputs, canonicalized. Throws NotEnabled.
Marking fire(const ProcessNet& net, const Marking& m, TransIdx t);

}  // namespace wincc
