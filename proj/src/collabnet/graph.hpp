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
#include <span>
#include <string>
#include <vector>

#include "collabnet/common.hpp"
#include "collabnet/ingest.hpp"

namespace collabnet::graph {

struct WeightedEdge {
  NodeId u = 0;
  NodeId v = 0;
  double weight = 1.0;
};

/// Weighted undirected graph for one window, stored as compressed neighbor lists.
///
/// Invariants: no self-loops, w(i,j) == w(j,i) > 0, neighbor lists sorted by id.
/// Node ids are dense 0..N-1 in sorted contributor-name order.
class TemporalGraph {
 public:
  TemporalGraph() : offsets_{0} {}

  /// Validates and assembles a graph. Each undirected edge must appear once
  /// (either orientation); duplicates, self-loops and non-positive weights throw.
  static TemporalGraph from_edges(std::string window, std::vector<std::string> names,
                                  const std::vector<WeightedEdge>& edges);
  /// Adopts prebuilt CSR arrays (rows sorted, symmetric). Checked in debug builds only.
  static TemporalGraph from_csr(std::string window, std::vector<std::string> names, std::vector<std::size_t> offsets,
                                std::vector<NodeId> targets, std::vector<double> weights);

  std::size_t node_count() const { return names_.size(); }
  std::size_t edge_count() const { return targets_.size() / 2; }
  bool empty() const { return names_.empty(); }

  std::span<const NodeId> neighbors(NodeId i) const {
    return {targets_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  std::span<const double> weights(NodeId i) const {
    return {weights_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  std::size_t degree(NodeId i) const { return offsets_[i + 1] - offsets_[i]; }
  std::optional<double> weight(NodeId i, NodeId j) const;

  const std::string& window() const { return window_; }
  const std::string& name(NodeId i) const { return names_[i]; }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<NodeId> find(const std::string& name) const;

  /// Each undirected edge once, u < v, in (u, v) order.
  std::vector<WeightedEdge> edges() const;

  bool operator==(const TemporalGraph&) const = default;

 private:
  std::string window_;
  std::vector<std::string> names_;
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> targets_;
  std::vector<double> weights_;
};

enum class Dampening { kRaw, kLog1p };

struct WeightPolicy {
  Dampening dampening = Dampening::kRaw;
  bool decay = false;
  double decay_lambda = 0.1;  // per quarter
  int decay_horizon = 4;      // quarters of lookback
  double decay_floor = 0.05;  // decayed weights below this are dropped
};

/// Co-contribution graph for dataset.windows[window]. An edge joins two
/// contributors that touched the same repository in the window; its raw weight
/// is the number of such repositories. With decay on, co-membership from the
/// previous decay_horizon windows adds exp(-lambda * age) per shared repository.
/// Dampening is applied last. A window without records yields an empty graph.
TemporalGraph build_window_graph(const ingest::CleanDataset& dataset, std::size_t window, const WeightPolicy& policy = {});
TemporalGraph build_window_graph(const ingest::CleanDataset& dataset, const ingest::Quarter& window,
                                 const WeightPolicy& policy = {});

/// Sum over repositories active in the window of |C(r,t)| choose 2.
std::uint64_t repo_clique_expansion_count(const ingest::CleanDataset& dataset, std::size_t window);

struct Component {
  std::size_t size = 0;
  std::vector<NodeId> members;  // sorted
};

/// Largest component by node count; ties go to the component holding the smallest id.
Component largest_connected_component(const TemporalGraph& graph);

/// LCC size of the graph with the flagged nodes (and their edges) deleted.
std::size_t lcc_size_without(const TemporalGraph& graph, const std::vector<char>& removed);

/// Dense component label per node, numbered in order of smallest member id.
std::vector<std::uint32_t> component_labels(const TemporalGraph& graph);

/// `src dst weight` lines (u < v, weight printed with 17 significant digits) and
/// a `nodes.tsv` (id<TAB>contributor). The window label goes in a leading comment.
void write_edge_list(const TemporalGraph& graph, const std::filesystem::path& edges_path,
                     const std::filesystem::path& nodes_path);
TemporalGraph read_edge_list(const std::filesystem::path& edges_path, const std::filesystem::path& nodes_path);

}  // namespace collabnet::graph
