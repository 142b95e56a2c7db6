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

// Independent reference implementations used as test oracles. They share no
// code with the library beyond the graph container.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <vector>

#include "collabnet/graph.hpp"

namespace oracles {

using collabnet::NodeId;
using collabnet::graph::TemporalGraph;

inline std::vector<std::vector<double>> dense_weights(const TemporalGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  for (const auto& e : g.edges()) a[e.u][e.v] = a[e.v][e.u] = e.weight;
  return a;
}

// Gaussian elimination with partial pivoting; solves a x = b in place.
inline std::vector<double> solve(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = c + 1; r < n; ++r) {
      double f = a[r][c] / a[c][c];
      if (f == 0.0) continue;
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double acc = b[i];
    for (std::size_t k = i + 1; k < n; ++k) acc -= a[i][k] * x[k];
    x[i] = acc / a[i][i];
  }
  return x;
}

// (I - d M) x = (1 - d)/N 1, with M column-stochastic and isolated columns uniform.
inline std::vector<double> pagerank_dense(const TemporalGraph& g, double d) {
  const std::size_t n = g.node_count();
  auto w = dense_weights(g);
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  for (std::size_t j = 0; j < n; ++j) {
    double s = std::accumulate(w[j].begin(), w[j].end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double m = s > 0.0 ? w[i][j] / s : 1.0 / static_cast<double>(n);
      a[i][j] = (i == j ? 1.0 : 0.0) - d * m;
    }
  }
  return solve(a, std::vector<double>(n, (1.0 - d) / static_cast<double>(n)));
}

// All-pairs distances (Floyd-Warshall) plus shortest-path counts, then
// sum over unordered pairs s < t of sigma_si * sigma_it / sigma_st for every
// intermediate i on a shortest s-t path.
inline std::vector<double> betweenness_enumerate(const TemporalGraph& g, bool weighted) {
  const std::size_t n = g.node_count();
  const double inf = std::numeric_limits<double>::infinity();
  auto w = dense_weights(g);
  std::vector<std::vector<double>> dist(n, std::vector<double>(n, inf));
  for (std::size_t i = 0; i < n; ++i) {
    dist[i][i] = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (w[i][j] > 0.0) dist[i][j] = weighted ? 1.0 / w[i][j] : 1.0;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (dist[i][k] + dist[k][j] < dist[i][j]) dist[i][j] = dist[i][k] + dist[k][j];
  std::vector<std::vector<double>> sigma(n, std::vector<double>(n, 0.0));
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dist[s][a] < dist[s][b]; });
    sigma[s][s] = 1.0;
    for (std::size_t t : order) {
      if (t == s || dist[s][t] == inf) continue;
      for (std::size_t u = 0; u < n; ++u) {
        if (w[u][t] <= 0.0) continue;
        double len = weighted ? 1.0 / w[u][t] : 1.0;
        if (dist[s][u] + len == dist[s][t]) sigma[s][t] += sigma[s][u];
      }
    }
  }
  std::vector<double> bc(n, 0.0);
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = s + 1; t < n; ++t) {
      if (dist[s][t] == inf) continue;
      for (std::size_t i = 0; i < n; ++i) {
        if (i == s || i == t) continue;
        if (dist[s][i] + dist[i][t] == dist[s][t]) bc[i] += sigma[s][i] * sigma[i][t] / sigma[s][t];
      }
    }
  return bc;
}

// Largest component by union-find (ties to the smallest id).
inline std::vector<std::size_t> largest_component(const TemporalGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : g.edges()) {
    auto a = find(e.u), b = find(e.v);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::size_t> size(n, 0);
  for (std::size_t i = 0; i < n; ++i) ++size[find(i)];
  std::size_t best = 0;
  for (std::size_t r = 0; r < n; ++r)
    if (size[r] > size[best]) best = r;
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < n; ++i)
    if (find(i) == best) members.push_back(i);
  return members;
}

// Perron vector of the largest component via a dense symmetric eigensolve.
inline std::vector<double> eigenvector_dense(const TemporalGraph& g) {
  auto members = largest_component(g);
  auto w = dense_weights(g);
  const auto c = static_cast<Eigen::Index>(members.size());
  Eigen::MatrixXd a(c, c);
  for (Eigen::Index i = 0; i < c; ++i)
    for (Eigen::Index j = 0; j < c; ++j) a(i, j) = w[members[i]][members[j]];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  Eigen::VectorXd v = es.eigenvectors().col(c - 1);
  if (v.sum() < 0) v = -v;
  v /= v.norm();
  std::vector<double> out(g.node_count(), 0.0);
  for (Eigen::Index i = 0; i < c; ++i) out[members[i]] = v(i);
  return out;
}

inline std::vector<double> average_ranks(const std::vector<double>& x) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) ++j;
    double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
    i = j + 1;
  }
  return r;
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / n, my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  return pearson(average_ranks(x), average_ranks(y));
}

}  // namespace oracles

namespace oracles {

// Q = 1/(2m) sum_ij [A_ij - k_i k_j / 2m] delta(c_i, c_j), as a direct double sum.
inline double modularity_direct(const TemporalGraph& g, const std::vector<std::uint32_t>& c) {
  auto a = dense_weights(g);
  const std::size_t n = g.node_count();
  std::vector<double> k(n, 0.0);
  double m2 = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      k[i] += a[i][j];
      m2 += a[i][j];
    }
  if (m2 == 0.0) return 0.0;
  double q = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (c[i] == c[j]) q += a[i][j] - k[i] * k[j] / m2;
  return q / m2;
}

// Every set partition of n elements as restricted growth strings.
inline std::vector<std::vector<std::uint32_t>> all_partitions(std::size_t n) {
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::uint32_t> a(n, 0);
  auto rec = [&](auto&& self, std::size_t i, std::uint32_t max_label) -> void {
    if (i == n) {
      out.push_back(a);
      return;
    }
    for (std::uint32_t l = 0; l <= max_label + 1; ++l) {
      a[i] = l;
      self(self, i + 1, std::max(max_label, l));
    }
  };
  if (n == 0) return {{}};
  a[0] = 0;
  rec(rec, 1, 0);
  return out;
}

inline double adjusted_rand(const std::vector<std::uint32_t>& x, const std::vector<std::uint32_t>& y) {
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> nij;
  std::map<std::uint32_t, double> a, b;
  for (std::size_t i = 0; i < x.size(); ++i) {
    nij[{x[i], y[i]}] += 1;
    a[x[i]] += 1;
    b[y[i]] += 1;
  }
  auto c2 = [](double v) { return v * (v - 1) / 2; };
  double sij = 0, sa = 0, sb = 0;
  for (auto& [k, v] : nij) sij += c2(v);
  for (auto& [k, v] : a) sa += c2(v);
  for (auto& [k, v] : b) sb += c2(v);
  const double expected = sa * sb / c2(static_cast<double>(x.size()));
  const double max_index = (sa + sb) / 2;
  if (max_index == expected) return 1.0;
  return (sij - expected) / (max_index - expected);
}

// Connected triples (paths of length two, counted once per centre and
// unordered end pair) and triangles, by brute force over vertex triples.
inline std::pair<std::size_t, std::size_t> triples_and_triangles(const TemporalGraph& g) {
  auto a = dense_weights(g);
  const std::size_t n = g.node_count();
  std::size_t triples = 0, triangles = 0;
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = i + 1; k < n; ++k)
        if (i != c && k != c && a[c][i] > 0 && a[c][k] > 0) ++triples;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        if (a[i][j] > 0 && a[j][k] > 0 && a[i][k] > 0) ++triangles;
  return {triples, triangles};
}

inline std::optional<double> assortativity_pairs(const TemporalGraph& g) {
  std::vector<double> x, y;
  for (const auto& e : g.edges()) {
    double du = static_cast<double>(g.degree(e.u)), dv = static_cast<double>(g.degree(e.v));
    x.push_back(du);
    y.push_back(dv);
    x.push_back(dv);
    y.push_back(du);
  }
  if (x.empty()) return std::nullopt;
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  double var = 0;
  for (double v : x) var += (v - mx) * (v - mx);
  if (var == 0.0) return std::nullopt;
  return pearson(x, y);
}

}  // namespace oracles
