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

// Small graph builders shared by the unit tests.

#pragma once

#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "collabnet/graph.hpp"
#include "collabnet/rng.hpp"

namespace fixtures {

using collabnet::NodeId;
using collabnet::graph::TemporalGraph;
using collabnet::graph::WeightedEdge;

inline std::vector<std::string> node_names(std::size_t n) {
  std::vector<std::string> names;
  char buf[32];
  for (std::size_t i = 0; i < n; ++i) {
    std::snprintf(buf, sizeof buf, "n%06zu", i);
    names.emplace_back(buf);
  }
  return names;
}

inline TemporalGraph make_graph(std::size_t n, const std::vector<WeightedEdge>& edges) {
  return TemporalGraph::from_edges("2020Q1", node_names(n), edges);
}

inline TemporalGraph unweighted(std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& pairs) {
  std::vector<WeightedEdge> edges;
  for (auto [u, v] : pairs) edges.push_back({u, v, 1.0});
  return make_graph(n, edges);
}

inline TemporalGraph path(std::size_t n) {
  std::vector<std::pair<NodeId, NodeId>> e;
  for (NodeId i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
  return unweighted(n, e);
}

inline TemporalGraph star(std::size_t leaves) {
  std::vector<std::pair<NodeId, NodeId>> e;
  for (NodeId i = 1; i <= leaves; ++i) e.push_back({0, i});
  return unweighted(leaves + 1, e);
}

inline TemporalGraph complete(std::size_t n) {
  std::vector<std::pair<NodeId, NodeId>> e;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j) e.push_back({i, j});
  return unweighted(n, e);
}

inline TemporalGraph cycle(std::size_t n) {
  std::vector<std::pair<NodeId, NodeId>> e;
  for (NodeId i = 0; i < n; ++i) e.push_back({i, static_cast<NodeId>((i + 1) % n)});
  return unweighted(n, e);
}

// Two triangles {0,1,2} and {2,3,4} sharing node 2.
inline TemporalGraph bowtie() { return unweighted(5, {{0, 1}, {0, 2}, {1, 2}, {2, 3}, {2, 4}, {3, 4}}); }

// G(n, p); integer weights in [1, max_weight] when max_weight > 1.
inline TemporalGraph random_graph(std::size_t n, double p, std::uint64_t seed, int max_weight = 1) {
  collabnet::CounterRng rng(seed, 77);
  std::vector<WeightedEdge> e;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j)
      if (rng.bernoulli(p)) {
        double w = max_weight > 1 ? 1.0 + static_cast<double>(rng.uniform_index(max_weight)) : 1.0;
        e.push_back({i, j, w});
      }
  return make_graph(n, e);
}

inline TemporalGraph scaled(const TemporalGraph& g, double c) {
  auto e = g.edges();
  for (auto& x : e) x.weight *= c;
  return TemporalGraph::from_edges(g.window(), g.names(), e);
}

}  // namespace fixtures
