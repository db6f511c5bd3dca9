#pragma once

#include <stdexcept>
#include <string>

namespace wincc {

// Base class for every error raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Firing a transition whose input places are not covered by the marking.
class NotEnabled : public Error {
 public:
  using Error::Error;
};

// Reachability-graph construction found more markings than the configured cap.
class StateCapExceeded : public Error {
 public:
  using Error::Error;
};

// A search exceeded its expansion budget before producing a usable result.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

// The requested goal marking cannot be reached.
class Unreachable : public Error {
 public:
  using Error::Error;
};

// A window search exhausted its frontier without settling a single goal.
class NoGoalFound : public Error {
 public:
  using Error::Error;
};

// Window length 0 was requested.
class WindowLengthZero : public Error {
 public:
  using Error::Error;
};

// Unparseable input file; the message carries line/element context.
class MalformedInput : public Error {
 public:
  using Error::Error;
};

// A CSV column named in the mapping is absent from the header.
class MissingColumn : public Error {
 public:
  using Error::Error;
};

// Trace simulation did not reach the final marking within its retry budget.
class GenerationFailed : public Error {
 public:
  using Error::Error;
};

}  // namespace wincc
