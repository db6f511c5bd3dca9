#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "wincc/errors.hpp"

namespace wincc {

struct Trace {
  std::string case_id;
  std::vector<std::string> activities;

  std::size_t length() const { return activities.size(); }
};

struct EventLog {
  std::vector<Trace> traces;
  std::vector<std::string> activity_alphabet;  // first-appearance order
};

// Contiguous slice [start, end) of a trace, produced by split_trace.
// Consecutive windows tile the trace with no gaps or overlaps.
struct SubtraceView {
  const Trace* parent = nullptr;
  std::uint32_t start = 0;
  std::uint32_t end = 0;
  std::uint32_t window_index = 0;

  std::uint32_t length() const { return end - start; }
  std::string_view activity(std::uint32_t absolute_pos) const {
    return parent->activities[absolute_pos];
  }
};

// ceil(|trace| / window_length) windows, all of length window_length except
// possibly the last. The empty trace yields no windows. Throws
// WindowLengthZero for window_length 0.
std::vector<SubtraceView> split_trace(const Trace& trace,
                                      std::uint32_t window_length);

// Per-position label counts over the remaining suffix: count(p, a) is the
// number of occurrences of a in activities[p..), the suffix starting at p.
// There are |trace| + 1 rows; row |trace| is all zeros and
//   count(p, a) = count(p + 1, a) + (activities[p] == a).
class SuffixFrequency {
 public:
  static SuffixFrequency build(const Trace& trace);

  // Number of rows, |trace| + 1.
  std::size_t positions() const { return rows_.size(); }
  std::uint32_t count(std::size_t position, std::string_view label) const;
  // Labels seen anywhere in the trace, in first-appearance order.
  const std::vector<std::string>& labels() const { return labels_; }
  // Dense row over labels() at the given position.
  std::span<const std::uint32_t> row(std::size_t position) const {
    return rows_[position];
  }
  std::uint64_t total(std::size_t position) const;

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::uint32_t> label_index_;
  std::vector<std::vector<std::uint32_t>> rows_;  // positions() x labels()
};

SuffixFrequency suffix_frequencies(const Trace& trace);

}  // namespace wincc
