// Copyright 2026 The collabnet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "collabnet/common.hpp"

namespace collabnet::ingest {

/// The closed set of contribution types. Order is the column order used by
/// every per-action table in the project.
enum class Action : std::uint8_t {
  kCommit,
  kPullRequestOpen,
  kPullRequestMerged,
  kReviewApproved,
  kReviewCommented,
  kReviewDismissed,
  kIssueOpened,
  kIssueComment,
};
inline constexpr std::size_t kActionCount = 8;

std::string_view action_name(Action action);
std::optional<Action> parse_action(std::string_view text);

enum class ProjectStage : std::uint8_t { kSandbox, kIncubating, kGraduated };
std::string_view stage_name(ProjectStage stage);
std::optional<ProjectStage> parse_stage(std::string_view text);

/// Seconds since the Unix epoch, UTC.
using Timestamp = std::int64_t;

std::optional<Timestamp> parse_rfc3339(std::string_view text);
std::string format_rfc3339(Timestamp ts);

/// Calendar quarter. index() = 4 * year + (quarter - 1) is dense and ordered.
struct Quarter {
  int year = 1970;
  int quarter = 1;  // 1..4

  static Quarter from_timestamp(Timestamp ts);
  static Quarter from_index(std::int64_t index);
  static std::optional<Quarter> parse(std::string_view label);
  std::int64_t index() const { return 4LL * year + (quarter - 1); }
  std::string label() const;  // e.g. "2020Q1"
  auto operator<=>(const Quarter&) const = default;
};

struct EventRecord {
  std::string contributor;
  std::string repo;
  Action action = Action::kCommit;
  std::uint64_t count = 1;
  Timestamp timestamp = 0;
  ProjectStage stage = ProjectStage::kSandbox;

  bool operator==(const EventRecord&) const = default;
};

enum class Format { kCsv, kJsonl };
std::optional<Format> parse_format(std::string_view text);

struct RowError {
  std::size_t line = 0;  // 1-based line in the input file
  std::string message;
};

struct ParseOptions {
  std::optional<Timestamp> range_begin;  // inclusive
  std::optional<Timestamp> range_end;    // exclusive
  /// Maximum fraction of malformed rows before parsing aborts.
  double malformed_cap = 0.02;
};

struct ParseResult {
  std::vector<EventRecord> records;
  std::vector<RowError> errors;
  std::size_t rows = 0;

  double error_ratio() const { return rows == 0 ? 0.0 : static_cast<double>(errors.size()) / rows; }
};

/// Throws kIo when the file cannot be read, kSchema on a bad header, and kParse
/// when the malformed-row ratio exceeds options.malformed_cap.
ParseResult parse_events(const std::filesystem::path& path, Format format, const ParseOptions& options = {});
ParseResult parse_events_text(std::string_view text, Format format, const ParseOptions& options = {});

enum class MergeEvidence : std::uint8_t { kSelf, kEmailExact, kUsernameSimilarity };
std::string_view evidence_name(MergeEvidence evidence);

/// alias -> canonical id. Canonical ids map to themselves; the canonical id of a
/// merged group is its lexicographically smallest alias.
struct IdentityMap {
  std::map<std::string, std::string> canonical;
  std::map<std::string, MergeEvidence> evidence;

  const std::string& resolve(const std::string& alias) const;
  std::size_t merged_aliases() const;
};

/// 1 - levenshtein(a, b) / max(|a|, |b|), compared case-insensitively.
double username_similarity(std::string_view a, std::string_view b);

struct IdentityResult {
  std::vector<EventRecord> records;
  IdentityMap identities;
};

IdentityResult resolve_identities(std::vector<EventRecord> records,
                                  const std::map<std::string, std::string>& email_index,
                                  double similarity_threshold = 0.9);

/// Glob with `*` and `?` only; every other character (including brackets) is literal.
bool glob_match(std::string_view pattern, std::string_view text);

struct BotFilterOptions {
  std::vector<std::string> name_patterns = {"*[bot]", "*-bot", "dependabot*", "renovate*"};
  /// Mean actions per active UTC day above which an account counts as automation.
  double activity_rate_cap = 500.0;
};

struct BotFilterResult {
  std::vector<EventRecord> kept;
  std::vector<std::string> removed;  // sorted contributor ids
  std::size_t removed_records = 0;
};

BotFilterResult filter_bots(std::vector<EventRecord> records, const BotFilterOptions& options = {});

/// Linear interpolation between order statistics: h = (n - 1) p.
double quantile_linear(const std::vector<double>& sorted, double p);

struct OutlierResult {
  std::vector<EventRecord> kept;
  std::vector<std::string> flagged;  // sorted contributor ids
  std::size_t removed_records = 0;
  bool applied = false;  // false when fewer than 4 contributors
  double lower = 0.0;
  double upper = 0.0;
};

/// Flags contributors whose total action count falls outside [Q1 - k IQR, Q3 + k IQR].
OutlierResult remove_outliers_iqr(std::vector<EventRecord> records, double k = 1.5);

struct Provenance {
  std::size_t input_rows = 0;
  std::size_t malformed_rows = 0;
  std::size_t merged_aliases = 0;
  std::size_t bot_contributors = 0;
  std::size_t bot_records = 0;
  std::size_t outlier_contributors = 0;
  std::size_t outlier_records = 0;
  std::size_t kept_records = 0;
};

/// Post-filter event log aligned to quarters. Immutable once built.
struct CleanDataset {
  std::vector<EventRecord> records;
  std::vector<std::uint32_t> record_window;  // index into windows, per record
  std::vector<Quarter> windows;              // contiguous, strictly increasing
  double retention_ratio = 1.0;
  Provenance provenance;

  std::optional<std::size_t> window_index(const Quarter& q) const;
  std::vector<std::string> contributors() const;  // sorted, unique
};

/// Labels records with their calendar quarter. The windows list covers
/// min..max inclusive, empty quarters included. Records must be non-empty.
CleanDataset align_quarters(std::vector<EventRecord> records);

struct PrepareOptions {
  ParseOptions parse;
  std::map<std::string, std::string> email_index;
  double similarity_threshold = 0.9;
  BotFilterOptions bots;
  double iqr_k = 1.5;
};

/// parse -> identities -> bots -> outliers -> quarters, with per-stage provenance.
CleanDataset prepare_dataset(const ParseResult& parsed, const PrepareOptions& options);

/// Reads a two-column alias,email CSV (header `alias,email`).
std::map<std::string, std::string> read_email_index(const std::filesystem::path& path);

void write_clean_jsonl(const CleanDataset& dataset, const std::filesystem::path& path);
void write_provenance_json(const CleanDataset& dataset, const std::filesystem::path& path);
/// Reloads a dataset written by write_clean_jsonl (+ optional provenance.json beside it).
CleanDataset read_clean_jsonl(const std::filesystem::path& path);

void write_events_csv(const std::vector<EventRecord>& records, const std::filesystem::path& path);

}  // namespace collabnet::ingest
