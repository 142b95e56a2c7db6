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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <filesystem>
#include <limits>

#include "collabnet/centrality.hpp"
#include "collabnet/parallel.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace collabnet;
using namespace collabnet::centrality;
using fixtures::make_graph;

TEST_CASE("pagerank on symmetric and trivial graphs") {
  auto tri = fixtures::complete(3);
  auto pr = pagerank(tri);
  for (double v : pr.values) CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  auto one = make_graph(1, std::vector<graph::WeightedEdge>{});
  CHECK(pagerank(one).values == std::vector<double>{1.0});
  CHECK(pagerank(graph::TemporalGraph{}).values.empty());
}

TEST_CASE("pagerank of a 4-node path matches the dense linear solve") {
  auto g = fixtures::path(4);
  PageRankOptions opt;
  opt.eps = 1e-13;
  opt.max_iter = 1000;
  auto pr = pagerank(g, opt);
  CHECK(pr.converged);
  auto oracle = oracles::pagerank_dense(g, 0.85);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(pr.values[i] - oracle[i]) < 1e-8);
  CHECK(pr.values[1] > pr.values[0]);
}

TEST_CASE("pagerank non-convergence is reported") {
  PageRankOptions opt;
  opt.max_iter = 1;
  opt.eps = 1e-15;
  auto pr = pagerank(fixtures::path(5), opt);
  CHECK_FALSE(pr.converged);
  CHECK_FALSE(pr.exact);
}

TEST_CASE("pagerank contract and dense oracle on random graphs with isolated nodes") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    std::size_t n = 20 + seed * 9;
    auto g = fixtures::random_graph(n, 2.5 / static_cast<double>(n), seed, 4);
    PageRankOptions opt;
    opt.eps = 1e-12;
    opt.max_iter = 2000;
    auto pr = pagerank(g, opt);
    double sum = 0.0;
    for (double v : pr.values) {
      sum += v;
      CHECK(v >= 0.15 / static_cast<double>(n) - 1e-15);
    }
    CHECK(std::abs(sum - 1.0) < 1e-9);
    auto oracle = oracles::pagerank_dense(g, 0.85);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(pr.values[i] - oracle[i]));
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("degree and strength") {
  auto s = fixtures::star(4);
  auto d = degree_centrality(s);
  CHECK(d.values[0] == 1.0);
  CHECK(d.values[1] == 0.25);
  auto g = make_graph(3, std::vector<graph::WeightedEdge>{{0, 1, 2.0}, {0, 2, 3.0}});
  CHECK(strength(g).values[0] == 5.0);
  for (double v : degree_centrality(fixtures::complete(7)).values) CHECK(v == 1.0);
  CHECK(degree_centrality(make_graph(1, std::vector<graph::WeightedEdge>{})).values[0] == 0.0);
}

TEST_CASE("betweenness hand cases") {
  CHECK(betweenness_exact(fixtures::path(3)).values == std::vector<double>{0.0, 1.0, 0.0});
  for (double v : betweenness_exact(fixtures::complete(4)).values) CHECK(v == 0.0);
  auto bt = betweenness_exact(fixtures::bowtie());
  CHECK(bt.values[2] == 4.0);
  CHECK(bt.values[0] == 0.0);
  BetweennessOptions tight;
  tight.exact_cap = 2;
  CHECK_THROWS_AS(betweenness_exact(fixtures::path(3), tight), Error);
}

TEST_CASE("betweenness matches all-pairs enumeration, unweighted and weighted") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    std::size_t n = 15 + 10 * seed;
    auto g = fixtures::random_graph(n, 3.0 / static_cast<double>(n), seed);
    auto exact = betweenness_exact(g);
    auto oracle = oracles::betweenness_enumerate(g, false);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(exact.values[i] - oracle[i]) <= 1e-9 * std::max(1.0, oracle[i]));
    // Weights in {1, 2, 4} keep 1/w path sums exact in binary.
    auto e = g.edges();
    CounterRng rng(seed, 5);
    for (auto& x : e) x.weight = std::ldexp(1.0, static_cast<int>(rng.uniform_index(3)));
    auto gw = graph::TemporalGraph::from_edges(g.window(), g.names(), e);
    BetweennessOptions w;
    w.weighted = true;
    auto exact_w = betweenness_exact(gw, w);
    auto oracle_w = oracles::betweenness_enumerate(gw, true);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(std::abs(exact_w.values[i] - oracle_w[i]) <= 1e-9 * std::max(1.0, oracle_w[i]));
  }
}

TEST_CASE("sampled betweenness") {
  auto g = fixtures::random_graph(120, 0.05, 9);
  auto exact = betweenness_exact(g);
  auto full = betweenness_sampled(g, g.node_count(), 3);
  CHECK_FALSE(full.exact);
  for (std::size_t i = 0; i < g.node_count(); ++i) CHECK(std::abs(full.values[i] - exact.values[i]) <= 1e-12);
  auto a = betweenness_sampled(g, 40, 11);
  auto b = betweenness_sampled(g, 40, 11);
  CHECK(a.values == b.values);
  CHECK(oracles::spearman(a.values, exact.values) > 0.8);
}

TEST_CASE("betweenness is identical across thread counts") {
  auto g = fixtures::random_graph(150, 0.04, 21, 3);
  set_thread_count(1);
  auto one = betweenness_exact(g, {true, 5000});
  set_thread_count(8);
  auto eight = betweenness_exact(g, {true, 5000});
  auto pr8 = pagerank(g);
  set_thread_count(1);
  CHECK(one.values == eight.values);
  CHECK(pagerank(g).values == pr8.values);
}

TEST_CASE("closeness") {
  auto s = fixtures::star(4);
  CHECK(closeness(s, false).values[0] == 1.0);
  CHECK(closeness(fixtures::path(3), true).values[0] == 1.5);
  // 0-1-2 and 3-4: standard closeness is computed inside each component.
  auto g = fixtures::unweighted(6, {{0, 1}, {1, 2}, {3, 4}});
  auto c = closeness(g, false);
  CHECK(c.values[0] == doctest::Approx(2.0 / 3.0));
  CHECK(c.values[3] == 1.0);
  CHECK(c.values[5] == 0.0);
  auto h = closeness(g, true);
  CHECK(h.values[0] == 1.5);
  CHECK(h.values[3] == 1.0);
  CHECK(h.values[5] == 0.0);
  auto gw = make_graph(3, std::vector<graph::WeightedEdge>{{0, 1, 2.0}, {1, 2, 4.0}});
  CHECK(closeness(gw, true, true).values[0] == doctest::Approx(2.0 + 1.0 / 0.75));
}

TEST_CASE("eigenvector centrality") {
  auto k3 = eigenvector_centrality(fixtures::complete(3));
  for (double v : k3.values) CHECK(v == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-10));
  auto s = eigenvector_centrality(fixtures::star(3));
  for (int i = 1; i <= 3; ++i) CHECK(s.values[0] > s.values[i]);
  // Weighted path with w_ab = 3, w_bc = 1: eigenvalue sqrt(10), vector (3, sqrt 10, 1)/sqrt 20.
  auto p = make_graph(3, std::vector<graph::WeightedEdge>{{0, 1, 3.0}, {1, 2, 1.0}});
  auto e = eigenvector_centrality(p);
  CHECK(e.converged);
  CHECK(std::abs(e.values[0] - 3.0 / std::sqrt(20.0)) < 1e-6);
  CHECK(std::abs(e.values[1] - std::sqrt(10.0) / std::sqrt(20.0)) < 1e-6);
  CHECK(std::abs(e.values[2] - 1.0 / std::sqrt(20.0)) < 1e-6);
  auto split = eigenvector_centrality(fixtures::unweighted(5, {{0, 1}, {2, 3}, {3, 4}}));
  CHECK(split.lcc_only);
  CHECK(split.values[0] == 0.0);
  CHECK(split.values[3] > 0.0);
  CHECK_THROWS_AS(eigenvector_centrality(graph::TemporalGraph{}), Error);
}

TEST_CASE("eigenvector matches a dense symmetric eigensolve") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto g = fixtures::random_graph(60, 0.08, seed, 3);
    EigenvectorOptions opt;
    opt.eps = 1e-13;
    opt.max_iter = 200000;
    auto e = eigenvector_centrality(g, opt);
    auto oracle = oracles::eigenvector_dense(g);
    for (std::size_t i = 0; i < g.node_count(); ++i) CHECK(std::abs(e.values[i] - oracle[i]) < 1e-6);
  }
}

TEST_CASE("uniform weight scaling leaves rankings unchanged") {
  auto g = fixtures::random_graph(80, 0.07, 4, 4);
  auto g3 = fixtures::scaled(g, 3.0);
  PageRankOptions opt;
  opt.eps = 1e-13;
  opt.max_iter = 1000;
  auto a = pagerank(g, opt), b = pagerank(g3, opt);
  for (std::size_t i = 0; i < g.node_count(); ++i) CHECK(std::abs(a.values[i] - b.values[i]) < 1e-12);
  CHECK(top_k(eigenvector_centrality(g), 80) == top_k(eigenvector_centrality(g3), 80));
  BetweennessOptions w{true, 5000};
  auto ba = betweenness_exact(g, w), bb = betweenness_exact(g3, w);
  for (std::size_t i = 0; i < g.node_count(); ++i) CHECK(std::abs(ba.values[i] - bb.values[i]) < 1e-9);
}

TEST_CASE("top_k breaks ties by id and metric tsv round-trips") {
  MetricVector m;
  m.values = {0.5, 0.9, 0.5, 0.1};
  CHECK(top_k(m, 3) == std::vector<NodeId>{1, 0, 2});
  auto g = fixtures::random_graph(30, 0.2, 2);
  auto pr = pagerank(g);
  auto file = std::filesystem::temp_directory_path() / "collabnet_pr.tsv";
  write_metric_tsv(pr, file);
  auto back = read_metric_tsv(file, Metric::kPageRank, pr.window);
  CHECK(back.values == pr.values);
  std::filesystem::remove(file);
  CHECK(parse_metric("harmonic_closeness") == Metric::kHarmonicCloseness);
  CHECK_FALSE(parse_metric("katz").has_value());
}
