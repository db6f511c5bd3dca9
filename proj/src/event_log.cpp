#include "wincc/event_log.hpp"

namespace wincc {

std::vector<SubtraceView> split_trace(const Trace& trace,
                                      std::uint32_t window_length) {
  if (window_length == 0)
    throw WindowLengthZero("window length must be at least 1");
  std::vector<SubtraceView> windows;
  const std::uint32_t n = static_cast<std::uint32_t>(trace.length());
  for (std::uint32_t start = 0, index = 0; start < n;
       start += window_length, ++index) {
    std::uint32_t end = std::min(n, start + window_length);
    windows.push_back(SubtraceView{&trace, start, end, index});
  }
  return windows;
}

SuffixFrequency SuffixFrequency::build(const Trace& trace) {
  SuffixFrequency sf;
  for (const std::string& a : trace.activities) {
    if (!sf.label_index_.contains(a)) {
      sf.label_index_.emplace(a, static_cast<std::uint32_t>(sf.labels_.size()));
      sf.labels_.push_back(a);
    }
  }
  const std::size_t n = trace.length();
  sf.rows_.assign(n + 1, std::vector<std::uint32_t>(sf.labels_.size(), 0));
  for (std::size_t p = n; p-- > 0;) {
    sf.rows_[p] = sf.rows_[p + 1];
    sf.rows_[p][sf.label_index_.at(trace.activities[p])] += 1;
  }
  return sf;
}

std::uint32_t SuffixFrequency::count(std::size_t position,
                                     std::string_view label) const {
  auto it = label_index_.find(std::string(label));
  if (it == label_index_.end()) return 0;
  return rows_[position][it->second];
}

std::uint64_t SuffixFrequency::total(std::size_t position) const {
  std::uint64_t sum = 0;
  for (std::uint32_t c : rows_[position]) sum += c;
  return sum;
}

SuffixFrequency suffix_frequencies(const Trace& trace) {
  return SuffixFrequency::build(trace);
}

}  // namespace wincc
