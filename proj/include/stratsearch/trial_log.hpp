// Copyright (c) 2026 stratsearch contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <vector>

#include <nlohmann/json.hpp>

namespace stratsearch {

inline constexpr int kLogSchemaVersion = 1;

// Record event names. Every record carries a monotonic "seq" and a logical
// "ts" (equal to seq): wall-clock stamps would break the byte-identical
// determinism contract for serial runs.
namespace log_event {
inline constexpr const char* kHeader = "header";
inline constexpr const char* kTrialLaunched = "trial_launched";
inline constexpr const char* kTrialFinished = "trial_finished";
inline constexpr const char* kControllerUpdate = "controller_update";
inline constexpr const char* kCheckpoint = "checkpoint";
inline constexpr const char* kRunComplete = "run_complete";
}  // namespace log_event

/// Append-only JSONL writer. Records are written in batches: the coordinator
/// emits all records for one completion event as a single write+flush, so a
/// crash cannot persist half of a completion's consequences.
class TrialLogWriter {
 public:
  /// Creates a fresh log; fails if the file already exists.
  static TrialLogWriter create(const std::filesystem::path& path);

  /// Reopens an existing log for appending; `next_seq` continues numbering.
  static TrialLogWriter append(const std::filesystem::path& path, std::uint64_t next_seq);

  /// Assigns seq/ts to each record in order and writes them as one batch.
  void write_batch(std::vector<nlohmann::json> records);

  std::uint64_t next_seq() const { return next_seq_; }

 private:
  TrialLogWriter(std::ofstream stream, std::uint64_t next_seq)
      : stream_(std::move(stream)), next_seq_(next_seq) {}

  std::ofstream stream_;
  std::uint64_t next_seq_ = 0;
};

struct LogReadResult {
  std::vector<nlohmann::json> records;
  std::uintmax_t clean_size = 0;  // byte offset just past the last complete line
  bool had_partial_tail = false;
};

/// Reads a trial log, tolerating a torn trailing line (the signature of a
/// crash mid-write). Any malformed record before the tail is an error.
LogReadResult read_trial_log(const std::filesystem::path& path);

}  // namespace stratsearch
