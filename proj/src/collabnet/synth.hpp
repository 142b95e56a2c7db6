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

// Seeded generators with planted ground truth. Every generator is a pure
// function of its arguments and returns a manifest describing what it planted.

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "collabnet/graph.hpp"
#include "collabnet/ingest.hpp"
#include "collabnet/roles.hpp"
#include "collabnet/temporal.hpp"

namespace collabnet::synth {

/// Zero-padded node names so that name order equals id order.
std::vector<std::string> node_names(std::size_t n, const std::string& prefix = "v");

struct GraphSample {
  graph::TemporalGraph graph;
  std::vector<std::uint32_t> labels;  // planted block per node (planted partition only)
  nlohmann::json manifest;
};

/// Barabasi-Albert: seed clique K_{m+1}, then each new node attaches to m
/// distinct existing nodes chosen with probability proportional to degree.
GraphSample gen_preferential_attachment(std::size_t n, std::size_t m, std::uint64_t seed);

/// Independent Bernoulli edges, p_in inside a block and p_out across blocks.
GraphSample gen_planted_partition(const std::vector<std::size_t>& sizes, double p_in, double p_out, std::uint64_t seed);

struct PlantedBurst {
  std::size_t contributor = 0;  // index into series
  std::size_t quarter = 0;
};

struct BurstCorpus {
  std::vector<temporal::ActivitySeries> series;
  std::vector<PlantedBurst> registry;
  nlohmann::json manifest;
};

/// Poisson(baseline) activity; with probability burst_rate a contributor gets
/// one spike at a uniform quarter, set to baseline + amplitude * sqrt(baseline).
BurstCorpus gen_burst_corpus(std::size_t contributors, std::size_t quarters, double burst_rate, double amplitude,
                             std::uint64_t seed, double baseline = 3.0);

struct ActionCorpus {
  std::vector<std::array<double, ingest::kActionCount>> counts;  // per contributor
  std::vector<double> target;
  std::array<double, ingest::kActionCount> betas{};
  double noise_sd = 0.0;
  double realized_r2 = 0.0;  // 1 - SS(noise) / SS(target about its mean)
  nlohmann::json manifest;
};

struct ActionCorpusOptions {
  double log_mean = 1.5;
  double log_sd = 0.8;
  double correlation = 0.3;  // equicorrelation of the latent normals
  /// When set, noise_sd is chosen so that the signal explains this share of the
  /// target variance in the generated sample.
  std::optional<double> target_r2;
};

/// Counts are round(exp(log_mean + log_sd * z)) with z equicorrelated normals.
/// target = sum_j beta_j * standardised(count_j) + N(0, noise_sd^2).
ActionCorpus gen_action_corpus(std::size_t n, const std::array<double, ingest::kActionCount>& betas, double noise_sd,
                               std::uint64_t seed, const ActionCorpusOptions& options = {});

using RoleMatrix = std::array<std::array<double, roles::kRoleCount>, roles::kRoleCount>;

/// Independent chains from a uniform initial role. Throws on a non-stochastic matrix.
std::vector<std::vector<roles::Role>> gen_markov_roles(const RoleMatrix& matrix, std::size_t contributors,
                                                       std::size_t length, std::uint64_t seed);

struct EventCorpusOptions {
  std::size_t contributors = 2000;
  std::size_t quarters = 12;
  ingest::Quarter start{2021, 1};
  std::size_t groups = 20;           // repository clusters
  std::size_t repos_per_group = 10;
  double active_probability = 0.75;  // per contributor per quarter
  double cross_group_probability = 0.08;
  double burst_rate = 0.2;           // contributors with one planted high-activity quarter
  double burst_multiplier = 3.0;
};

struct EventCorpus {
  std::vector<ingest::EventRecord> records;
  std::vector<std::pair<std::string, std::string>> planted_bursts;  // (contributor, quarter label)
  nlohmann::json manifest;
};

/// Contribution log for end-to-end runs. Contributors have a home group of
/// repositories, a few hubs touch many repositories, and activity counts are
/// narrow enough that no contributor is an IQR outlier.
EventCorpus gen_event_corpus(const EventCorpusOptions& options, std::uint64_t seed);

void write_manifest(const nlohmann::json& manifest, const std::filesystem::path& path);
void write_series_csv(const std::vector<temporal::ActivitySeries>& series, const std::filesystem::path& path);

}  // namespace collabnet::synth
