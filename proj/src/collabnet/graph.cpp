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

#include "collabnet/graph.hpp"

#include <algorithm>
#include <cassert>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "collabnet/parallel.hpp"

namespace collabnet::graph {

TemporalGraph TemporalGraph::from_edges(std::string window, std::vector<std::string> names,
                                        const std::vector<WeightedEdge>& edges) {
  const std::size_t n = names.size();
  std::vector<WeightedEdge> both;
  both.reserve(edges.size() * 2);
  for (const auto& e : edges) {
    require(e.u < n && e.v < n, ErrorCode::kInvalidArgument, "edge endpoint out of range");
    require(e.u != e.v, ErrorCode::kInvalidArgument, "self-loop on node " + std::to_string(e.u));
    require(e.weight > 0.0 && std::isfinite(e.weight), ErrorCode::kInvalidArgument, "edge weights must be finite and > 0");
    both.push_back(e);
    both.push_back({e.v, e.u, e.weight});
  }
  std::sort(both.begin(), both.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  for (std::size_t k = 1; k < both.size(); ++k) {
    require(!(both[k].u == both[k - 1].u && both[k].v == both[k - 1].v), ErrorCode::kInvalidArgument,
            "duplicate edge " + std::to_string(both[k].u) + "-" + std::to_string(both[k].v));
  }
  TemporalGraph g;
  g.window_ = std::move(window);
  g.names_ = std::move(names);
  g.offsets_.assign(n + 1, 0);
  g.targets_.reserve(both.size());
  g.weights_.reserve(both.size());
  for (const auto& e : both) {
    ++g.offsets_[e.u + 1];
    g.targets_.push_back(e.v);
    g.weights_.push_back(e.weight);
  }
  for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];
  return g;
}

TemporalGraph TemporalGraph::from_csr(std::string window, std::vector<std::string> names,
                                      std::vector<std::size_t> offsets, std::vector<NodeId> targets,
                                      std::vector<double> weights) {
  assert(offsets.size() == names.size() + 1);
  assert(targets.size() == weights.size() && offsets.back() == targets.size());
  TemporalGraph g;
  g.window_ = std::move(window);
  g.names_ = std::move(names);
  g.offsets_ = std::move(offsets);
  g.targets_ = std::move(targets);
  g.weights_ = std::move(weights);
  return g;
}

std::optional<double> TemporalGraph::weight(NodeId i, NodeId j) const {
  auto nb = neighbors(i);
  auto it = std::lower_bound(nb.begin(), nb.end(), j);
  if (it == nb.end() || *it != j) return std::nullopt;
  return weights(i)[static_cast<std::size_t>(it - nb.begin())];
}

std::optional<NodeId> TemporalGraph::find(const std::string& name) const {
  auto it = std::lower_bound(names_.begin(), names_.end(), name);
  if (it == names_.end() || *it != name) return std::nullopt;
  return static_cast<NodeId>(it - names_.begin());
}

std::vector<WeightedEdge> TemporalGraph::edges() const {
  std::vector<WeightedEdge> out;
  out.reserve(edge_count());
  for (NodeId u = 0; u < node_count(); ++u) {
    auto nb = neighbors(u);
    auto w = weights(u);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      if (u < nb[k]) out.push_back({u, nb[k], w[k]});
    }
  }
  return out;
}

namespace {

// repo -> sorted unique contributor names, for one window.
std::map<std::string, std::vector<std::string>> repo_members(const ingest::CleanDataset& dataset, std::size_t window) {
  std::map<std::string, std::set<std::string>> sets;
  for (std::size_t i = 0; i < dataset.records.size(); ++i) {
    if (dataset.record_window[i] != window) continue;
    sets[dataset.records[i].repo].insert(dataset.records[i].contributor);
  }
  std::map<std::string, std::vector<std::string>> out;
  for (auto& [repo, members] : sets) out.emplace(repo, std::vector<std::string>(members.begin(), members.end()));
  return out;
}

constexpr std::size_t kRowBlock = 64;

}  // namespace

TemporalGraph build_window_graph(const ingest::CleanDataset& dataset, std::size_t window, const WeightPolicy& policy) {
  require(window < dataset.windows.size(), ErrorCode::kInvalidArgument, "window index out of range");
  require(policy.decay_lambda >= 0.0 && policy.decay_horizon >= 0, ErrorCode::kInvalidArgument,
          "decay parameters must be non-negative");
  const std::size_t horizon = policy.decay ? std::min<std::size_t>(policy.decay_horizon, window) : 0;

  // Groups[age] = member lists of every repository active at window - age.
  std::vector<std::vector<std::vector<std::string>>> groups_by_age(horizon + 1);
  std::set<std::string> node_set;
  for (std::size_t age = 0; age <= horizon; ++age) {
    for (auto& [repo, members] : repo_members(dataset, window - age)) {
      node_set.insert(members.begin(), members.end());
      groups_by_age[age].push_back(std::move(members));
    }
  }
  std::vector<std::string> names(node_set.begin(), node_set.end());
  const std::size_t n = names.size();
  const std::string label = dataset.windows[window].label();
  if (n == 0) return TemporalGraph::from_csr(label, {}, {0}, {}, {});

  auto id_of = [&](const std::string& s) {
    return static_cast<NodeId>(std::lower_bound(names.begin(), names.end(), s) - names.begin());
  };
  // Flattened groups: members as ids, tagged with their age.
  struct Group {
    std::size_t age;
    std::vector<NodeId> members;
  };
  std::vector<Group> groups;
  for (std::size_t age = 0; age <= horizon; ++age) {
    for (const auto& members : groups_by_age[age]) {
      Group g{age, {}};
      g.members.reserve(members.size());
      for (const auto& m : members) g.members.push_back(id_of(m));
      groups.push_back(std::move(g));
    }
  }
  std::vector<std::vector<std::uint32_t>> groups_of(n);
  for (std::uint32_t gi = 0; gi < groups.size(); ++gi) {
    for (NodeId m : groups[gi].members) groups_of[m].push_back(gi);
  }
  std::vector<double> age_factor(horizon + 1);
  for (std::size_t age = 0; age <= horizon; ++age) age_factor[age] = std::exp(-policy.decay_lambda * static_cast<double>(age));

  // Row-wise accumulation: row i counts shared repositories per (neighbor, age)
  // as integers, so w(i,j) and w(j,i) are computed from identical inputs.
  std::vector<std::vector<NodeId>> row_targets(n);
  std::vector<std::vector<double>> row_weights(n);
  const std::size_t blocks = (n + kRowBlock - 1) / kRowBlock;
  const std::size_t ages = horizon + 1;
  parallel_for(0, blocks, [&](std::size_t b) {
    std::vector<std::uint32_t> counts(n * ages, 0);
    std::vector<char> seen(n, 0);
    std::vector<NodeId> touched;
    const std::size_t lo = b * kRowBlock, hi = std::min(n, lo + kRowBlock);
    for (std::size_t i = lo; i < hi; ++i) {
      touched.clear();
      for (std::uint32_t gi : groups_of[i]) {
        const auto& g = groups[gi];
        for (NodeId j : g.members) {
          if (j == i) continue;
          if (!seen[j]) {
            seen[j] = 1;
            touched.push_back(j);
          }
          ++counts[j * ages + g.age];
        }
      }
      std::sort(touched.begin(), touched.end());
      auto& tg = row_targets[i];
      auto& wt = row_weights[i];
      tg.reserve(touched.size());
      wt.reserve(touched.size());
      for (NodeId j : touched) {
        double w = 0.0;
        for (std::size_t age = 0; age < ages; ++age) {
          w += static_cast<double>(counts[j * ages + age]) * age_factor[age];
          counts[j * ages + age] = 0;
        }
        seen[j] = 0;
        if (policy.decay && w < policy.decay_floor) continue;
        if (policy.dampening == Dampening::kLog1p) w = std::log1p(w);
        tg.push_back(j);
        wt.push_back(w);
      }
    }
  });

  std::vector<std::size_t> offsets(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) offsets[i + 1] = offsets[i] + row_targets[i].size();
  std::vector<NodeId> targets;
  std::vector<double> weights;
  targets.reserve(offsets[n]);
  weights.reserve(offsets[n]);
  for (std::size_t i = 0; i < n; ++i) {
    targets.insert(targets.end(), row_targets[i].begin(), row_targets[i].end());
    weights.insert(weights.end(), row_weights[i].begin(), row_weights[i].end());
  }
  return TemporalGraph::from_csr(label, std::move(names), std::move(offsets), std::move(targets), std::move(weights));
}

TemporalGraph build_window_graph(const ingest::CleanDataset& dataset, const ingest::Quarter& window,
                                 const WeightPolicy& policy) {
  auto idx = dataset.window_index(window);
  if (!idx) fail(ErrorCode::kNotFound, "window " + window.label() + " is not in the dataset");
  return build_window_graph(dataset, *idx, policy);
}

std::uint64_t repo_clique_expansion_count(const ingest::CleanDataset& dataset, std::size_t window) {
  std::uint64_t total = 0;
  for (const auto& [repo, members] : repo_members(dataset, window)) {
    std::uint64_t c = members.size();
    total += c * (c - 1) / 2;
  }
  return total;
}

std::vector<std::uint32_t> component_labels(const TemporalGraph& graph) {
  const std::size_t n = graph.node_count();
  constexpr std::uint32_t kUnset = UINT32_MAX;
  std::vector<std::uint32_t> label(n, kUnset);
  std::vector<NodeId> stack;
  std::uint32_t next = 0;
  for (NodeId s = 0; s < n; ++s) {
    if (label[s] != kUnset) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      NodeId u = stack.back();
      stack.pop_back();
      for (NodeId v : graph.neighbors(u)) {
        if (label[v] == kUnset) {
          label[v] = next;
          stack.push_back(v);
        }
      }
    }
    ++next;
  }
  return label;
}

Component largest_connected_component(const TemporalGraph& graph) {
  Component best;
  if (graph.empty()) return best;
  auto labels = component_labels(graph);
  std::uint32_t count = *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<std::size_t> sizes(count, 0);
  for (auto l : labels) ++sizes[l];
  std::uint32_t winner = static_cast<std::uint32_t>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  best.size = sizes[winner];
  for (NodeId i = 0; i < graph.node_count(); ++i) {
    if (labels[i] == winner) best.members.push_back(i);
  }
  return best;
}

std::size_t lcc_size_without(const TemporalGraph& graph, const std::vector<char>& removed) {
  const std::size_t n = graph.node_count();
  require(removed.size() == n, ErrorCode::kInvalidArgument, "removal mask size mismatch");
  std::vector<char> visited(removed.begin(), removed.end());
  std::vector<NodeId> stack;
  std::size_t best = 0;
  for (NodeId s = 0; s < n; ++s) {
    if (visited[s]) continue;
    visited[s] = 1;
    stack.push_back(s);
    std::size_t size = 0;
    while (!stack.empty()) {
      NodeId u = stack.back();
      stack.pop_back();
      ++size;
      for (NodeId v : graph.neighbors(u)) {
        if (!visited[v]) {
          visited[v] = 1;
          stack.push_back(v);
        }
      }
    }
    best = std::max(best, size);
  }
  return best;
}

void write_edge_list(const TemporalGraph& graph, const std::filesystem::path& edges_path,
                     const std::filesystem::path& nodes_path) {
  std::ofstream edges(edges_path, std::ios::binary);
  std::ofstream nodes(nodes_path, std::ios::binary);
  if (!edges || !nodes) fail(ErrorCode::kIo, "cannot write graph export to " + edges_path.string());
  edges << "# window=" << graph.window() << '\n';
  char buf[64];
  for (const auto& e : graph.edges()) {
    std::snprintf(buf, sizeof buf, "%.17g", e.weight);
    edges << e.u << ' ' << e.v << ' ' << buf << '\n';
  }
  nodes << "id\tcontributor\n";
  for (NodeId i = 0; i < graph.node_count(); ++i) nodes << i << '\t' << graph.name(i) << '\n';
}

TemporalGraph read_edge_list(const std::filesystem::path& edges_path, const std::filesystem::path& nodes_path) {
  std::ifstream nodes(nodes_path);
  if (!nodes) fail(ErrorCode::kIo, "cannot read " + nodes_path.string());
  std::vector<std::string> names;
  std::string line;
  std::getline(nodes, line);  // header
  while (std::getline(nodes, line)) {
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) fail(ErrorCode::kParse, "bad nodes.tsv row: " + line);
    std::size_t id = std::stoul(line.substr(0, tab));
    if (id != names.size()) fail(ErrorCode::kParse, "nodes.tsv ids must be dense and ordered");
    names.push_back(line.substr(tab + 1));
  }
  std::ifstream edges(edges_path);
  if (!edges) fail(ErrorCode::kIo, "cannot read " + edges_path.string());
  std::string window;
  std::vector<WeightedEdge> list;
  while (std::getline(edges, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind("# window=", 0) == 0) window = line.substr(9);
      continue;
    }
    std::istringstream row(line);
    WeightedEdge e;
    if (!(row >> e.u >> e.v >> e.weight)) fail(ErrorCode::kParse, "bad edge row: " + line);
    list.push_back(e);
  }
  return TemporalGraph::from_edges(std::move(window), std::move(names), list);
}

}  // namespace collabnet::graph
