#include "wincc/petri_net.hpp"

#include <algorithm>

namespace wincc {

Marking::Marking(std::vector<Entry> entries) : entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end());
  std::size_t out = 0;
  for (std::size_t i = 0; i < entries_.size();) {
    PlaceIdx place = entries_[i].first;
    std::uint64_t count = 0;
    while (i < entries_.size() && entries_[i].first == place) {
      count += entries_[i].second;
      ++i;
    }
    if (count > 0) entries_[out++] = {place, static_cast<std::uint32_t>(count)};
  }
  entries_.resize(out);
}

Marking Marking::from_places(std::span<const PlaceIdx> places) {
  std::vector<Entry> entries;
  entries.reserve(places.size());
  for (PlaceIdx p : places) entries.emplace_back(p, 1);
  return Marking(std::move(entries));
}

std::uint32_t Marking::count_of(PlaceIdx place) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), place,
                             [](const Entry& e, PlaceIdx p) { return e.first < p; });
  return (it != entries_.end() && it->first == place) ? it->second : 0;
}

std::uint64_t Marking::total_tokens() const {
  std::uint64_t total = 0;
  for (const Entry& e : entries_) total += e.second;
  return total;
}

std::size_t Marking::hash() const {
  // FNV-1a over the canonical entry list.
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 0x100000001b3ull;
    }
  };
  for (const Entry& e : entries_) {
    mix(e.first);
    mix(e.second);
  }
  return static_cast<std::size_t>(h);
}

PlaceIdx ProcessNet::add_place(std::string id) {
  if (place_index_.contains(id))
    throw MalformedInput("duplicate place id '" + id + "'");
  PlaceIdx idx = static_cast<PlaceIdx>(place_ids_.size());
  place_index_.emplace(id, idx);
  place_ids_.push_back(std::move(id));
  return idx;
}

TransIdx ProcessNet::add_transition(std::string id,
                                    std::optional<std::string> label) {
  if (transition_index_.contains(id))
    throw MalformedInput("duplicate transition id '" + id + "'");
  TransIdx idx = static_cast<TransIdx>(transitions_.size());
  transition_index_.emplace(id, idx);
  LabelIdx label_idx = kSilentLabel;
  if (label.has_value()) {
    auto it = label_index_.find(*label);
    if (it == label_index_.end()) {
      label_idx = static_cast<LabelIdx>(labels_.size());
      label_index_.emplace(*label, label_idx);
      labels_.push_back(*label);
    } else {
      label_idx = it->second;
    }
  }
  transition_labels_.push_back(label_idx);
  transitions_.push_back(Transition{std::move(id), std::move(label), {}, {}});
  return idx;
}

void ProcessNet::check_place(PlaceIdx p) const {
  if (p >= place_ids_.size())
    throw MalformedInput("arc references unknown place #" + std::to_string(p));
}

void ProcessNet::check_transition(TransIdx t) const {
  if (t >= transitions_.size())
    throw MalformedInput("arc references unknown transition #" +
                         std::to_string(t));
}

namespace {
void insert_sorted_unique(std::vector<PlaceIdx>& v, PlaceIdx p) {
  auto it = std::lower_bound(v.begin(), v.end(), p);
  if (it == v.end() || *it != p) v.insert(it, p);
}
}  // namespace

void ProcessNet::add_arc_pt(PlaceIdx place, TransIdx transition) {
  check_place(place);
  check_transition(transition);
  insert_sorted_unique(transitions_[transition].inputs, place);
}

void ProcessNet::add_arc_tp(TransIdx transition, PlaceIdx place) {
  check_place(place);
  check_transition(transition);
  insert_sorted_unique(transitions_[transition].outputs, place);
}

void ProcessNet::add_arc(std::string_view source, std::string_view target) {
  auto src_place = find_place(source);
  auto dst_place = find_place(target);
  auto src_trans = find_transition(source);
  auto dst_trans = find_transition(target);
  if (src_place && dst_trans) {
    add_arc_pt(*src_place, *dst_trans);
  } else if (src_trans && dst_place) {
    add_arc_tp(*src_trans, *dst_place);
  } else {
    throw MalformedInput("arc endpoints '" + std::string(source) + "' -> '" +
                         std::string(target) +
                         "' do not name a place/transition pair");
  }
}

void ProcessNet::set_initial_marking(Marking m) {
  for (const auto& [place, count] : m.entries()) check_place(place);
  initial_ = std::move(m);
}

void ProcessNet::set_final_marking(Marking m) {
  for (const auto& [place, count] : m.entries()) check_place(place);
  final_ = std::move(m);
}

const Marking& ProcessNet::final_marking() const {
  if (!final_.has_value())
    throw MalformedInput("final marking is not defined for this net");
  return *final_;
}

std::optional<PlaceIdx> ProcessNet::find_place(std::string_view id) const {
  auto it = place_index_.find(std::string(id));
  if (it == place_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<TransIdx> ProcessNet::find_transition(std::string_view id) const {
  auto it = transition_index_.find(std::string(id));
  if (it == transition_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<LabelIdx> ProcessNet::label_index(std::string_view label) const {
  auto it = label_index_.find(std::string(label));
  if (it == label_index_.end()) return std::nullopt;
  return it->second;
}

void ProcessNet::validate() const {
  for (const auto& [place, count] : initial_.entries())
    if (place >= place_ids_.size())
      throw MalformedInput("initial marking references unknown place");
  if (!final_.has_value()) throw MalformedInput("final marking is not set");
  for (const auto& [place, count] : final_->entries())
    if (place >= place_ids_.size())
      throw MalformedInput("final marking references unknown place");
}

bool is_enabled(const ProcessNet& net, const Marking& m, TransIdx t) {
  for (PlaceIdx p : net.transition(t).inputs)
    if (m.count_of(p) == 0) return false;
  return true;
}

std::vector<TransIdx> enabled_transitions(const ProcessNet& net,
                                          const Marking& m) {
  std::vector<TransIdx> result;
  for (TransIdx t = 0; t < net.transitions().size(); ++t)
    if (is_enabled(net, m, t)) result.push_back(t);
  return result;
}

Marking fire(const ProcessNet& net, const Marking& m, TransIdx t) {
  if (!is_enabled(net, m, t))
    throw NotEnabled("transition '" + net.transition(t).id +
                     "' is not enabled");
  std::vector<Marking::Entry> entries(m.entries());
  for (PlaceIdx p : net.transition(t).inputs) {
    auto it = std::lower_bound(
        entries.begin(), entries.end(), p,
        [](const Marking::Entry& e, PlaceIdx place) { return e.first < place; });
    --it->second;  // presence guaranteed by the enabledness check
  }
  for (PlaceIdx p : net.transition(t).outputs) entries.emplace_back(p, 1);
  return Marking(std::move(entries));
}

}  // namespace wincc
