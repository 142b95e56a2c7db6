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

#include "collabnet/centrality.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <queue>
#include <sstream>

#include "collabnet/parallel.hpp"
#include "collabnet/rng.hpp"

namespace collabnet::centrality {

using graph::TemporalGraph;

namespace {

constexpr std::array<std::string_view, 8> kMetricNames = {
    "pagerank", "degree", "strength", "betweenness", "closeness", "harmonic_closeness", "eigenvector", "clustering"};

constexpr double kInf = std::numeric_limits<double>::infinity();

// Relative tolerance for treating two weighted path lengths as equal.
constexpr double kTieTol = 1e-12;

bool same_length(double a, double b) { return std::abs(a - b) <= kTieTol * std::max(a, b); }

MetricVector blank(Metric metric, const TemporalGraph& g) {
  MetricVector m;
  m.metric = metric;
  m.window = g.window();
  m.values.assign(g.node_count(), 0.0);
  return m;
}

// Single-source shortest paths plus the Brandes dependency pass.
struct Brandes {
  std::vector<double> sigma, delta, dist;
  std::vector<std::vector<NodeId>> pred;
  std::vector<NodeId> order;
  std::vector<NodeId> queue;

  explicit Brandes(std::size_t n) : sigma(n), delta(n), dist(n), pred(n) {}

  void search(const TemporalGraph& g, NodeId s, bool weighted) {
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(dist.begin(), dist.end(), kInf);
    for (auto& p : pred) p.clear();
    order.clear();
    sigma[s] = 1.0;
    dist[s] = 0.0;
    if (!weighted) {
      queue.clear();
      queue.push_back(s);
      for (std::size_t head = 0; head < queue.size(); ++head) {
        NodeId u = queue[head];
        order.push_back(u);
        for (NodeId v : g.neighbors(u)) {
          if (dist[v] == kInf) {
            dist[v] = dist[u] + 1.0;
            queue.push_back(v);
          }
          if (dist[v] == dist[u] + 1.0) {
            sigma[v] += sigma[u];
            pred[v].push_back(u);
          }
        }
      }
      return;
    }
    using Item = std::pair<double, NodeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    std::vector<char>& done = scratch_done(g.node_count());
    heap.push({0.0, s});
    while (!heap.empty()) {
      auto [d, u] = heap.top();
      heap.pop();
      if (done[u] || d > dist[u]) continue;
      done[u] = 1;
      order.push_back(u);
      auto nb = g.neighbors(u);
      auto ws = g.weights(u);
      for (std::size_t k = 0; k < nb.size(); ++k) {
        NodeId v = nb[k];
        if (done[v]) continue;
        double alt = dist[u] + 1.0 / ws[k];
        if (dist[v] == kInf || (alt < dist[v] && !same_length(alt, dist[v]))) {
          dist[v] = alt;
          sigma[v] = sigma[u];
          pred[v].assign(1, u);
          heap.push({alt, v});
        } else if (same_length(alt, dist[v])) {
          sigma[v] += sigma[u];
          pred[v].push_back(u);
        }
      }
    }
    for (NodeId u : order) done[u] = 0;
  }

  void accumulate(NodeId s, std::vector<double>& out) {
    for (NodeId u : order) delta[u] = 0.0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      NodeId w = *it;
      for (NodeId v : pred[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      if (w != s) out[w] += delta[w];
    }
  }

 private:
  std::vector<char> done_;
  std::vector<char>& scratch_done(std::size_t n) {
    if (done_.size() != n) done_.assign(n, 0);
    return done_;
  }
};

// Fixed partition of the source list into blocks; block sums are merged in
// block order so the result does not depend on the worker count.
constexpr std::size_t kBrandesBlocks = 64;

std::vector<double> brandes_sum(const TemporalGraph& g, const std::vector<NodeId>& sources, bool weighted) {
  const std::size_t n = g.node_count();
  const std::size_t blocks = std::min(kBrandesBlocks, std::max<std::size_t>(sources.size(), 1));
  std::vector<std::vector<double>> partial(blocks);
  parallel_for(0, blocks, [&](std::size_t b) {
    const std::size_t lo = b * sources.size() / blocks, hi = (b + 1) * sources.size() / blocks;
    partial[b].assign(n, 0.0);
    if (lo == hi) return;
    Brandes work(n);
    for (std::size_t k = lo; k < hi; ++k) {
      work.search(g, sources[k], weighted);
      work.accumulate(sources[k], partial[b]);
    }
  });
  std::vector<double> total(n, 0.0);
  for (const auto& p : partial)
    for (std::size_t i = 0; i < n; ++i) total[i] += p[i];
  return total;
}

void check_weights(const TemporalGraph& g) {
  for (NodeId i = 0; i < g.node_count(); ++i)
    for (double w : g.weights(i))
      require(w > 0.0, ErrorCode::kInvalidArgument, "shortest paths need positive edge weights");
}

}  // namespace

std::string_view metric_name(Metric metric) { return kMetricNames[static_cast<std::size_t>(metric)]; }

std::optional<Metric> parse_metric(std::string_view text) {
  for (std::size_t i = 0; i < kMetricNames.size(); ++i)
    if (kMetricNames[i] == text) return static_cast<Metric>(i);
  return std::nullopt;
}

MetricVector pagerank(const TemporalGraph& g, const PageRankOptions& opt) {
  require(opt.damping > 0.0 && opt.damping < 1.0, ErrorCode::kInvalidArgument, "damping must be in (0,1)");
  require(opt.eps > 0.0 && opt.max_iter > 0, ErrorCode::kInvalidArgument, "eps and max_iter must be positive");
  MetricVector m = blank(Metric::kPageRank, g);
  m.params = {{"damping", opt.damping}, {"eps", opt.eps}, {"max_iter", static_cast<double>(opt.max_iter)}};
  const std::size_t n = g.node_count();
  if (n == 0) return m;
  std::vector<double> s(n, 0.0);
  for (NodeId i = 0; i < n; ++i)
    for (double w : g.weights(i)) s[i] += w;
  std::vector<double> pr(n, 1.0 / static_cast<double>(n)), share(n), next(n);
  const double d = opt.damping;
  m.converged = false;
  for (int it = 1; it <= opt.max_iter; ++it) {
    double dangling = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (s[j] > 0.0) {
        share[j] = pr[j] / s[j];
      } else {
        share[j] = 0.0;
        dangling += pr[j];
      }
    }
    const double base = (1.0 - d) / static_cast<double>(n) + d * dangling / static_cast<double>(n);
    parallel_for(0, n, [&](std::size_t i) {
      double acc = 0.0;
      auto nb = g.neighbors(static_cast<NodeId>(i));
      auto ws = g.weights(static_cast<NodeId>(i));
      for (std::size_t k = 0; k < nb.size(); ++k) acc += ws[k] * share[nb[k]];
      next[i] = base + d * acc;
    });
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) change += std::abs(next[i] - pr[i]);
    pr.swap(next);
    m.iterations = static_cast<std::size_t>(it);
    if (change < opt.eps) {
      m.converged = true;
      break;
    }
  }
  m.exact = m.converged;
  m.values = std::move(pr);
  return m;
}

MetricVector degree_centrality(const TemporalGraph& g) {
  MetricVector m = blank(Metric::kDegree, g);
  const std::size_t n = g.node_count();
  if (n < 2) return m;
  for (NodeId i = 0; i < n; ++i) m.values[i] = static_cast<double>(g.degree(i)) / static_cast<double>(n - 1);
  return m;
}

MetricVector strength(const TemporalGraph& g) {
  MetricVector m = blank(Metric::kStrength, g);
  for (NodeId i = 0; i < g.node_count(); ++i)
    for (double w : g.weights(i)) m.values[i] += w;
  return m;
}

MetricVector betweenness_exact(const TemporalGraph& g, const BetweennessOptions& opt) {
  const std::size_t n = g.node_count();
  require(n <= opt.exact_cap, ErrorCode::kInvalidArgument,
          "graph has " + std::to_string(n) + " nodes, above the exact betweenness cap of " + std::to_string(opt.exact_cap));
  if (opt.weighted) check_weights(g);
  MetricVector m = blank(Metric::kBetweenness, g);
  m.params = {{"weighted", opt.weighted ? 1.0 : 0.0}, {"sources", static_cast<double>(n)}};
  std::vector<NodeId> sources(n);
  for (NodeId i = 0; i < n; ++i) sources[i] = i;
  auto total = brandes_sum(g, sources, opt.weighted);
  for (std::size_t i = 0; i < n; ++i) m.values[i] = total[i] / 2.0;
  return m;
}

MetricVector betweenness_sampled(const TemporalGraph& g, std::size_t sources, std::uint64_t seed, bool weighted) {
  const std::size_t n = g.node_count();
  require(sources >= 1 && sources <= n, ErrorCode::kInvalidArgument, "sources must be in [1, N]");
  if (weighted) check_weights(g);
  CounterRng rng(seed, fnv1a64("betweenness_sampled"));
  auto drawn = rng.sample_without_replacement(n, sources);
  std::vector<NodeId> list(drawn.begin(), drawn.end());
  std::sort(list.begin(), list.end());
  MetricVector m = blank(Metric::kBetweenness, g);
  m.exact = false;
  m.params = {{"weighted", weighted ? 1.0 : 0.0}, {"sources", static_cast<double>(sources)},
              {"seed", static_cast<double>(seed)}};
  auto total = brandes_sum(g, list, weighted);
  const double scale = static_cast<double>(n) / static_cast<double>(sources);
  for (std::size_t i = 0; i < n; ++i) m.values[i] = total[i] * scale / 2.0;
  return m;
}

MetricVector betweenness(const TemporalGraph& g, const BetweennessOptions& opt, std::uint64_t seed) {
  if (g.node_count() <= opt.exact_cap) return betweenness_exact(g, opt);
  return betweenness_sampled(g, std::min<std::size_t>(500, g.node_count()), seed, opt.weighted);
}

MetricVector closeness(const TemporalGraph& g, bool harmonic, bool weighted) {
  if (weighted) check_weights(g);
  MetricVector m = blank(harmonic ? Metric::kHarmonicCloseness : Metric::kCloseness, g);
  m.params = {{"weighted", weighted ? 1.0 : 0.0}};
  const std::size_t n = g.node_count();
  constexpr std::size_t kBlock = 64;
  parallel_for(0, (n + kBlock - 1) / kBlock, [&](std::size_t b) {
    Brandes work(n);
    for (std::size_t i = b * kBlock; i < std::min(n, (b + 1) * kBlock); ++i) {
      work.search(g, static_cast<NodeId>(i), weighted);
      double sum = 0.0;
      for (NodeId v : work.order) {
        if (v == i) continue;
        sum += harmonic ? 1.0 / work.dist[v] : work.dist[v];
      }
      if (harmonic) {
        m.values[i] = sum;
      } else {
        m.values[i] = sum > 0.0 ? static_cast<double>(work.order.size() - 1) / sum : 0.0;
      }
    }
  });
  return m;
}

MetricVector eigenvector_centrality(const TemporalGraph& g, const EigenvectorOptions& opt) {
  require(!g.empty(), ErrorCode::kInvalidArgument, "eigenvector centrality needs a non-empty graph");
  MetricVector m = blank(Metric::kEigenvector, g);
  m.params = {{"eps", opt.eps}, {"max_iter", static_cast<double>(opt.max_iter)}};
  auto lcc = graph::largest_connected_component(g);
  m.lcc_only = lcc.size < g.node_count();
  const std::size_t c = lcc.size;
  std::vector<double> x(g.node_count(), 0.0), y(g.node_count(), 0.0);
  for (NodeId i : lcc.members) x[i] = 1.0 / std::sqrt(static_cast<double>(c));
  m.converged = false;
  for (int it = 1; it <= opt.max_iter; ++it) {
    parallel_for(0, c, [&](std::size_t k) {
      NodeId i = lcc.members[k];
      double acc = x[i];
      auto nb = g.neighbors(i);
      auto ws = g.weights(i);
      for (std::size_t e = 0; e < nb.size(); ++e) acc += ws[e] * x[nb[e]];
      y[i] = acc;
    });
    double norm = 0.0;
    for (NodeId i : lcc.members) norm += y[i] * y[i];
    norm = std::sqrt(norm);
    double change = 0.0;
    for (NodeId i : lcc.members) {
      y[i] /= norm;
      change += (y[i] - x[i]) * (y[i] - x[i]);
    }
    x.swap(y);
    m.iterations = static_cast<std::size_t>(it);
    if (std::sqrt(change) < opt.eps) {
      m.converged = true;
      break;
    }
  }
  m.exact = m.converged;
  m.values = std::move(x);
  return m;
}

std::vector<NodeId> top_k(const MetricVector& metric, std::size_t k) {
  std::vector<NodeId> ids(metric.values.size());
  for (NodeId i = 0; i < ids.size(); ++i) ids[i] = i;
  k = std::min(k, ids.size());
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(k), ids.end(), [&](NodeId a, NodeId b) {
    return metric.values[a] != metric.values[b] ? metric.values[a] > metric.values[b] : a < b;
  });
  ids.resize(k);
  return ids;
}

void write_metric_tsv(const MetricVector& metric, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  out << "node_id\tscore\n";
  char buf[64];
  for (std::size_t i = 0; i < metric.values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", metric.values[i]);
    out << i << '\t' << buf << '\n';
  }
}

MetricVector read_metric_tsv(const std::filesystem::path& path, Metric metric, std::string window) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot read " + path.string());
  MetricVector m;
  m.metric = metric;
  m.window = std::move(window);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::size_t id;
    double v;
    if (!(row >> id >> v) || id != m.values.size()) fail(ErrorCode::kParse, "bad metric row in " + path.string());
    m.values.push_back(v);
  }
  return m;
}

}  // namespace collabnet::centrality
