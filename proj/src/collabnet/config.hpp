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

// Pipeline configuration: an INI file with one section per stage. Every key
// has a default, so an empty file is a valid config.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "collabnet/graph.hpp"
#include "collabnet/neural.hpp"
#include "collabnet/roles.hpp"
#include "collabnet/synth.hpp"

namespace collabnet::config {

/// Dependency order. Enabling a stage also runs the stages it needs.
inline constexpr std::string_view kStages[] = {"synth", "ingest",  "graph", "metrics", "cohesion",
                                               "bursts", "roles", "neural", "stats",  "resilience"};

struct PipelineConfig {
  // [run]
  std::uint64_t seed = 42;
  std::string out = "out";
  int threads = 1;
  std::string stages = "all";  // comma separated names or "all"

  // [input]
  std::string events;  // ignored when the synth stage runs
  std::string format = "csv";
  std::string email_index;
  std::string window_begin;  // quarter label, inclusive
  std::string window_end;    // quarter label, inclusive

  // [synth]
  synth::EventCorpusOptions corpus;

  // [ingest]
  double malformed_cap = 0.02;
  double similarity_threshold = 0.9;
  double bot_rate_cap = 500.0;
  double iqr_k = 1.5;

  // [graph]
  std::string dampening = "raw";
  graph::WeightPolicy weights;

  // [centrality]
  double damping = 0.85;
  double pagerank_eps = 1e-6;
  std::size_t betweenness_exact_cap = 5000;
  std::size_t betweenness_sources = 500;  // used above the cap
  bool betweenness_weighted = false;
  std::size_t top_k = 10;

  // [burst]
  double theta = 2.0;

  // [changepoint]
  std::size_t cp_window = 3;
  double cp_tau = 1.5;

  // [roles]
  roles::RoleThresholds thresholds;

  // [stats]
  double alpha = 0.05;
  std::string target = "pagerank";
  bool log_transform = false;
  std::size_t powerlaw_bootstrap = 200;
  std::size_t powerlaw_min_tail = 50;

  // [resilience]
  std::size_t removal_count = 20;
  std::size_t removal_trials = 30;
  std::size_t curve_steps = 21;

  // [neural]
  neural::LstmConfig lstm;
  std::size_t lstm_max_series = 300;
  neural::GcnConfig gcn;

  /// Directory relative input paths resolve against (the config file's).
  std::filesystem::path base_dir;
};

struct ConfigIssue {
  std::string field;  // section.key
  std::string message;
};

struct LoadResult {
  PipelineConfig config;
  std::vector<ConfigIssue> issues;  // unknown keys and unparsable values
};

/// Throws kParse when the file is not INI (a single error); field-level
/// problems are returned, not thrown.
LoadResult load_config(const std::filesystem::path& path);
LoadResult load_config_text(std::string_view text, const std::filesystem::path& base_dir = {});

/// Sets one field by its section.key path; returns an issue on failure.
std::vector<ConfigIssue> set_field(PipelineConfig& config, std::string_view field, std::string_view value);

/// Every range, enum and path violation at once.
std::vector<ConfigIssue> validate(const PipelineConfig& config, bool check_paths = true);

/// Sorted section.key = value lines covering every field.
std::string canonical_text(const PipelineConfig& config);
/// Hash of canonical_text with run.out and run.threads left out.
std::uint64_t config_hash(const PipelineConfig& config);

/// Enabled stages plus their prerequisites, in dependency order.
std::vector<std::string> resolve_stages(const PipelineConfig& config);

std::filesystem::path resolve_path(const PipelineConfig& config, const std::string& path);

}  // namespace collabnet::config
