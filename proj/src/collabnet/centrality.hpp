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

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "collabnet/graph.hpp"

namespace collabnet::centrality {

enum class Metric {
  kPageRank,
  kDegree,
  kStrength,
  kBetweenness,
  kCloseness,
  kHarmonicCloseness,
  kEigenvector,
  kClustering,
};

std::string_view metric_name(Metric metric);
std::optional<Metric> parse_metric(std::string_view text);

struct MetricVector {
  Metric metric = Metric::kDegree;
  std::string window;
  std::vector<double> values;
  bool exact = true;
  bool converged = true;
  /// Eigenvector only: scores outside the largest component were set to 0.
  bool lcc_only = false;
  std::size_t iterations = 0;
  std::map<std::string, double> params;
};

struct PageRankOptions {
  double damping = 0.85;
  double eps = 1e-6;  // L1 change between iterates
  int max_iter = 100;
};

/// Weighted PageRank on the symmetrised graph: a node's mass flows to its
/// neighbours in proportion to edge weight. Isolated nodes spread their mass
/// uniformly. Non-convergence returns the last iterate with exact = converged = false.
MetricVector pagerank(const graph::TemporalGraph& graph, const PageRankOptions& options = {});

/// deg(i)/(N-1); N < 2 gives zeros.
MetricVector degree_centrality(const graph::TemporalGraph& graph);
MetricVector strength(const graph::TemporalGraph& graph);

struct BetweennessOptions {
  bool weighted = false;  // distance = 1/w when true
  std::size_t exact_cap = 5000;
};

/// Brandes. Sums dependencies over ordered (s, t) pairs and halves, so the
/// centre of a path a-b-c scores 1. Throws kInvalidArgument above exact_cap.
MetricVector betweenness_exact(const graph::TemporalGraph& graph, const BetweennessOptions& options = {});

/// Brandes from `sources` distinct sampled sources, rescaled by N / sources.
MetricVector betweenness_sampled(const graph::TemporalGraph& graph, std::size_t sources, std::uint64_t seed,
                                 bool weighted = false);

/// Exact below the cap, 500-source sampling above it (seeded).
MetricVector betweenness(const graph::TemporalGraph& graph, const BetweennessOptions& options, std::uint64_t seed);

/// Standard closeness is (n_c - 1) / sum of distances inside the node's own
/// component of size n_c; harmonic closeness sums 1/d over reachable nodes.
/// Isolated nodes score 0 in both.
MetricVector closeness(const graph::TemporalGraph& graph, bool harmonic, bool weighted = false);

struct EigenvectorOptions {
  double eps = 1e-8;  // L2 change between normalised iterates
  int max_iter = 1000;
};

/// Power iteration on A + I restricted to the largest component, L2-normalised
/// and nonnegative. Other components get 0 and lcc_only is set.
MetricVector eigenvector_centrality(const graph::TemporalGraph& graph, const EigenvectorOptions& options = {});

/// Node ids of the k highest scores; ties go to the smaller id.
std::vector<NodeId> top_k(const MetricVector& metric, std::size_t k);

/// `node_id<TAB>score` rows, preceded by a `node_id\tscore` header.
void write_metric_tsv(const MetricVector& metric, const std::filesystem::path& path);
MetricVector read_metric_tsv(const std::filesystem::path& path, Metric metric, std::string window);

}  // namespace collabnet::centrality
