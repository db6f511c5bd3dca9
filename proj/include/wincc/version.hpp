#pragma once

namespace wincc {

inline constexpr const char* kVersion = "0.1.0";

// Bumped whenever a field in the JSONL report schema changes meaning.
inline constexpr int kReportSchemaVersion = 1;

}  // namespace wincc
