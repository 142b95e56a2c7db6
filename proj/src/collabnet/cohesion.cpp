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

#include "collabnet/cohesion.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "collabnet/parallel.hpp"
#include "collabnet/rng.hpp"

namespace collabnet::cohesion {

using graph::TemporalGraph;

namespace {

// Triangles whose smallest vertex is i.
std::uint64_t triangles_at(const TemporalGraph& g, NodeId i) {
  auto ni = g.neighbors(i);
  std::uint64_t t = 0;
  for (NodeId j : ni) {
    if (j <= i) continue;
    auto nj = g.neighbors(j);
    auto a = std::upper_bound(ni.begin(), ni.end(), j);
    auto b = std::upper_bound(nj.begin(), nj.end(), j);
    while (a != ni.end() && b != nj.end()) {
      if (*a < *b) {
        ++a;
      } else if (*b < *a) {
        ++b;
      } else {
        ++t;
        ++a;
        ++b;
      }
    }
  }
  return t;
}

// Edges among the neighbours of i.
std::uint64_t neighbor_links(const TemporalGraph& g, NodeId i) {
  auto ni = g.neighbors(i);
  std::uint64_t links = 0;
  for (NodeId j : ni) {
    auto nj = g.neighbors(j);
    auto a = ni.begin();
    auto b = nj.begin();
    while (a != ni.end() && b != nj.end()) {
      if (*a < *b) {
        ++a;
      } else if (*b < *a) {
        ++b;
      } else {
        ++links;
        ++a;
        ++b;
      }
    }
  }
  return links / 2;
}

// Weighted graph with self-loops for the aggregation levels. loop[i] is A_ii,
// i.e. twice the internal weight folded into node i.
struct LevelGraph {
  std::vector<std::vector<std::pair<std::uint32_t, double>>> adj;
  std::vector<double> loop;

  std::size_t size() const { return adj.size(); }
  double strength(std::size_t i) const {
    double s = loop[i];
    for (const auto& [j, w] : adj[i]) s += w;
    return s;
  }
};

LevelGraph from_graph(const TemporalGraph& g) {
  LevelGraph lg;
  lg.adj.resize(g.node_count());
  lg.loop.assign(g.node_count(), 0.0);
  for (NodeId i = 0; i < g.node_count(); ++i) {
    auto nb = g.neighbors(i);
    auto ws = g.weights(i);
    for (std::size_t k = 0; k < nb.size(); ++k) lg.adj[i].push_back({nb[k], ws[k]});
  }
  return lg;
}

// One round of local moves. Returns dense community labels and whether any
// node changed community.
bool local_moves(const LevelGraph& g, double resolution, CounterRng& rng, std::vector<std::uint32_t>& comm) {
  const std::size_t n = g.size();
  std::vector<double> k(n), tot(n);
  double m2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    k[i] = g.strength(i);
    m2 += k[i];
  }
  comm.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    comm[i] = static_cast<std::uint32_t>(i);
    tot[i] = k[i];
  }
  const double tol = 1e-12 * m2;
  std::vector<double> link(n, 0.0);
  std::vector<std::uint32_t> touched, ties;
  bool any_move = false;
  for (bool moved = true; moved;) {
    moved = false;
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint32_t own = comm[i];
      touched.clear();
      for (const auto& [j, w] : g.adj[i]) {
        std::uint32_t c = comm[j];
        if (link[c] == 0.0) touched.push_back(c);
        link[c] += w;
      }
      tot[own] -= k[i];
      auto gain = [&](std::uint32_t c) { return link[c] - resolution * tot[c] * k[i] / m2; };
      double best = gain(own);
      ties.assign(1, own);
      for (std::uint32_t c : touched) {
        if (c == own) continue;
        double gc = gain(c);
        if (gc > best + tol) {
          best = gc;
          ties.assign(1, c);
        } else if (std::abs(gc - best) <= tol) {
          ties.push_back(c);
        }
      }
      std::uint32_t target = own;
      if (ties[0] != own) {
        std::sort(ties.begin(), ties.end());
        target = ties.size() == 1 ? ties[0] : ties[rng.uniform_index(ties.size())];
      }
      tot[target] += k[i];
      for (std::uint32_t c : touched) link[c] = 0.0;
      if (target != own) {
        comm[i] = target;
        moved = true;
        any_move = true;
      }
    }
  }
  return any_move;
}

// Renumbers labels densely in order of smallest member; returns the count.
std::size_t renumber(std::vector<std::uint32_t>& labels) {
  std::map<std::uint32_t, std::uint32_t> remap;
  for (auto& l : labels) {
    auto [it, fresh] = remap.emplace(l, static_cast<std::uint32_t>(remap.size()));
    l = it->second;
  }
  return remap.size();
}

LevelGraph aggregate(const LevelGraph& g, const std::vector<std::uint32_t>& comm, std::size_t count) {
  LevelGraph out;
  out.adj.resize(count);
  out.loop.assign(count, 0.0);
  std::vector<std::map<std::uint32_t, double>> rows(count);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const std::uint32_t ci = comm[i];
    out.loop[ci] += g.loop[i];
    for (const auto& [j, w] : g.adj[i]) {
      if (comm[j] == ci) {
        out.loop[ci] += w;
      } else {
        rows[ci][comm[j]] += w;
      }
    }
  }
  for (std::size_t c = 0; c < count; ++c) out.adj[c].assign(rows[c].begin(), rows[c].end());
  return out;
}

}  // namespace

centrality::MetricVector local_clustering(const TemporalGraph& g) {
  centrality::MetricVector m;
  m.metric = centrality::Metric::kClustering;
  m.window = g.window();
  m.values.assign(g.node_count(), 0.0);
  parallel_for(0, g.node_count(), [&](std::size_t i) {
    const double k = static_cast<double>(g.degree(static_cast<NodeId>(i)));
    if (k < 2) return;
    m.values[i] = 2.0 * static_cast<double>(neighbor_links(g, static_cast<NodeId>(i))) / (k * (k - 1.0));
  });
  return m;
}

double average_clustering(const centrality::MetricVector& clustering, const TemporalGraph& g, bool exclude_low_degree) {
  double sum = 0.0;
  std::size_t counted = 0;
  for (NodeId i = 0; i < g.node_count(); ++i) {
    if (exclude_low_degree && g.degree(i) < 2) continue;
    sum += clustering.values[i];
    ++counted;
  }
  return counted == 0 ? 0.0 : sum / static_cast<double>(counted);
}

double transitivity(const TemporalGraph& g) {
  std::vector<std::uint64_t> tri(g.node_count());
  parallel_for(0, g.node_count(), [&](std::size_t i) { tri[i] = triangles_at(g, static_cast<NodeId>(i)); });
  std::uint64_t triangles = 0, triples = 0;
  for (NodeId i = 0; i < g.node_count(); ++i) {
    triangles += tri[i];
    std::uint64_t k = g.degree(i);
    triples += k * (k - 1) / 2;
  }
  return triples == 0 ? 0.0 : 3.0 * static_cast<double>(triangles) / static_cast<double>(triples);
}

double density(const TemporalGraph& g) {
  const double n = static_cast<double>(g.node_count());
  if (g.node_count() < 2) return 0.0;
  return 2.0 * static_cast<double>(g.edge_count()) / (n * (n - 1.0));
}

double modularity(const TemporalGraph& g, const std::vector<std::uint32_t>& labels, double resolution) {
  require(labels.size() == g.node_count(), ErrorCode::kInvalidArgument, "label vector size mismatch");
  std::map<std::uint32_t, std::pair<double, double>> per;  // label -> (internal, total)
  double m2 = 0.0;
  for (NodeId i = 0; i < g.node_count(); ++i) {
    auto nb = g.neighbors(i);
    auto ws = g.weights(i);
    auto& slot = per[labels[i]];
    for (std::size_t k = 0; k < nb.size(); ++k) {
      slot.second += ws[k];
      m2 += ws[k];
      if (labels[nb[k]] == labels[i]) slot.first += ws[k];
    }
  }
  if (m2 == 0.0) return 0.0;
  double q = 0.0;
  for (const auto& [label, s] : per) q += s.first / m2 - resolution * (s.second / m2) * (s.second / m2);
  return q;
}

Partition louvain(const TemporalGraph& g, std::uint64_t seed, double resolution) {
  require(resolution > 0.0, ErrorCode::kInvalidArgument, "resolution must be positive");
  Partition p;
  p.community.resize(g.node_count());
  for (NodeId i = 0; i < g.node_count(); ++i) p.community[i] = i;
  p.count = g.node_count();
  if (g.edge_count() == 0) return p;
  CounterRng rng(seed, fnv1a64("louvain"));
  LevelGraph level = from_graph(g);
  std::vector<std::uint32_t> comm;
  while (local_moves(level, resolution, rng, comm)) {
    std::size_t count = renumber(comm);
    for (auto& c : p.community) c = comm[c];
    level = aggregate(level, comm, count);
    p.level_modularity.push_back(modularity(g, p.community, resolution));
    if (count == 1) break;
  }
  p.count = renumber(p.community);
  p.modularity = modularity(g, p.community, resolution);
  return p;
}

std::optional<double> assortativity(const TemporalGraph& g) {
  if (g.edge_count() == 0) return std::nullopt;
  double sx = 0, sxx = 0, sxy = 0, count = 0;
  for (NodeId i = 0; i < g.node_count(); ++i) {
    const double di = static_cast<double>(g.degree(i));
    for (NodeId j : g.neighbors(i)) {
      const double dj = static_cast<double>(g.degree(j));
      sx += di;
      sxx += di * di;
      sxy += di * dj;
      count += 1;
    }
  }
  // Both orientations are present, so the two endpoint marginals coincide.
  const double mean = sx / count;
  const double var = sxx / count - mean * mean;
  if (var <= 1e-12 * std::max(1.0, mean * mean)) return std::nullopt;
  return (sxy / count - mean * mean) / var;
}

CohesionSummary cohesion_summary(const TemporalGraph& g, std::uint64_t seed, Partition* partition) {
  CohesionSummary s;
  s.window = g.window();
  s.nodes = g.node_count();
  s.edges = g.edge_count();
  s.density = density(g);
  s.avg_clustering = average_clustering(local_clustering(g), g);
  s.transitivity = transitivity(g);
  auto p = louvain(g, seed);
  s.modularity = p.modularity;
  s.community_count = p.count;
  s.assortativity = assortativity(g);
  if (partition) *partition = std::move(p);
  return s;
}

void write_cohesion_header(std::ostream& out) {
  out << "window,nodes,edges,density,avg_clustering,transitivity,modularity,community_count,assortativity\n";
}

void write_cohesion_row(std::ostream& out, const CohesionSummary& s) {
  out << s.window << ',' << s.nodes << ',' << s.edges << ',' << format_real(s.density) << ','
      << format_real(s.avg_clustering) << ',' << format_real(s.transitivity) << ',' << format_real(s.modularity) << ','
      << s.community_count << ',' << (s.assortativity ? format_real(*s.assortativity) : std::string("undefined"))
      << '\n';
}

void write_communities(const TemporalGraph& g, const Partition& partition, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  out << "node_id\tcontributor\tcommunity\n";
  for (NodeId i = 0; i < g.node_count(); ++i) out << i << '\t' << g.name(i) << '\t' << partition.community[i] << '\n';
}

}  // namespace collabnet::cohesion
