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
#include <optional>
#include <ostream>
#include <vector>

#include "collabnet/centrality.hpp"
#include "collabnet/graph.hpp"

namespace collabnet::cohesion {

/// C_i = 2 T_i / (k_i (k_i - 1)), unweighted; nodes with k_i < 2 score 0.
centrality::MetricVector local_clustering(const graph::TemporalGraph& graph);

/// Mean of local clustering. With exclude_low_degree, nodes with k < 2 are left
/// out of the average instead of counting as 0.
double average_clustering(const centrality::MetricVector& clustering, const graph::TemporalGraph& graph,
                          bool exclude_low_degree = false);

/// 3 * triangles / connected triples; 0 when there are no triples.
double transitivity(const graph::TemporalGraph& graph);

/// 2|E| / (N (N - 1)); 0 when N < 2.
double density(const graph::TemporalGraph& graph);

struct Partition {
  std::vector<std::uint32_t> community;  // dense ids, numbered by smallest member
  std::size_t count = 0;
  double modularity = 0.0;
  std::vector<double> level_modularity;  // Q after each aggregation level
};

/// Weighted modularity of an arbitrary labelling (labels need not be dense).
double modularity(const graph::TemporalGraph& graph, const std::vector<std::uint32_t>& labels,
                  double resolution = 1.0);

/// Louvain: local moves in ascending node order, ties between equally good
/// target communities broken by the seeded stream, then aggregation until a
/// level makes no move. An edgeless graph gives singletons and Q = 0.
Partition louvain(const graph::TemporalGraph& graph, std::uint64_t seed, double resolution = 1.0);

/// Pearson correlation of endpoint degrees over both orientations of every
/// edge. nullopt when there are no edges or the endpoint degrees do not vary.
std::optional<double> assortativity(const graph::TemporalGraph& graph);

struct CohesionSummary {
  std::string window;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  double density = 0.0;
  double avg_clustering = 0.0;
  double transitivity = 0.0;
  double modularity = 0.0;
  std::size_t community_count = 0;
  std::optional<double> assortativity;
};

CohesionSummary cohesion_summary(const graph::TemporalGraph& graph, std::uint64_t seed, Partition* partition = nullptr);

void write_cohesion_header(std::ostream& out);
void write_cohesion_row(std::ostream& out, const CohesionSummary& summary);
/// `node_id<TAB>contributor<TAB>community`.
void write_communities(const graph::TemporalGraph& graph, const Partition& partition, const std::filesystem::path& path);

}  // namespace collabnet::cohesion
