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

#include <cmath>
#include <sstream>

#include "collabnet/cohesion.hpp"
#include "collabnet/parallel.hpp"
#include "collabnet/synth.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace collabnet;
using namespace collabnet::cohesion;

namespace {

// Two K4 cliques {0..3} and {4..7} joined by the bridge 3-4.
graph::TemporalGraph two_k4() {
  std::vector<std::pair<NodeId, NodeId>> e;
  for (NodeId base : {0u, 4u})
    for (NodeId i = 0; i < 4; ++i)
      for (NodeId j = i + 1; j < 4; ++j) e.push_back({base + i, base + j});
  e.push_back({3, 4});
  return fixtures::unweighted(8, e);
}

}  // namespace

TEST_CASE("local clustering") {
  for (double c : local_clustering(fixtures::complete(4)).values) CHECK(c == 1.0);
  auto star = local_clustering(fixtures::star(4));
  CHECK(star.values[0] == 0.0);
  CHECK(star.values[1] == 0.0);  // degree 1
  auto bt = local_clustering(fixtures::bowtie());
  CHECK(bt.values[2] == doctest::Approx(2.0 / 6.0));
  CHECK(bt.values[0] == 1.0);
  auto g = fixtures::star(3);
  CHECK(average_clustering(local_clustering(g), g, true) == 0.0);
}

TEST_CASE("transitivity against brute-force triple enumeration") {
  CHECK(transitivity(fixtures::complete(3)) == 1.0);
  CHECK(transitivity(fixtures::path(3)) == 0.0);
  CHECK(transitivity(fixtures::path(2)) == 0.0);
  auto [triples, triangles] = oracles::triples_and_triangles(fixtures::bowtie());
  CHECK(triangles == 2);
  CHECK(triples == 10);
  CHECK(transitivity(fixtures::bowtie()) == doctest::Approx(3.0 * 2 / 10));
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    auto g = fixtures::random_graph(40, 0.15, seed);
    auto [tr, tt] = oracles::triples_and_triangles(g);
    CHECK(transitivity(g) == doctest::Approx(tr ? 3.0 * tt / tr : 0.0).epsilon(1e-14));
  }
}

TEST_CASE("transitivity equals average clustering on vertex-transitive graphs") {
  for (std::size_t n : {5u, 8u}) {
    auto c = fixtures::cycle(n);
    CHECK(transitivity(c) == average_clustering(local_clustering(c), c));
    auto k = fixtures::complete(n);
    CHECK(transitivity(k) == doctest::Approx(average_clustering(local_clustering(k), k)));
  }
}

TEST_CASE("density") {
  CHECK(density(fixtures::complete(5)) == 1.0);
  CHECK(density(fixtures::make_graph(5, std::vector<graph::WeightedEdge>{})) == 0.0);
  CHECK(density(fixtures::path(4)) == 0.5);
  CHECK(density(fixtures::make_graph(1, std::vector<graph::WeightedEdge>{})) == 0.0);
}

TEST_CASE("modularity formula matches the direct double sum") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto g = fixtures::random_graph(30, 0.2, seed, 3);
    CounterRng rng(seed, 9);
    std::vector<std::uint32_t> labels(30);
    for (auto& l : labels) l = static_cast<std::uint32_t>(rng.uniform_index(4)) * 7;
    CHECK(std::abs(modularity(g, labels) - oracles::modularity_direct(g, labels)) < 1e-12);
  }
}

TEST_CASE("louvain finds the best partition of two bridged K4s") {
  auto g = two_k4();
  auto parts = oracles::all_partitions(8);
  REQUIRE(parts.size() == 4140);
  double best = -1.0;
  std::vector<std::uint32_t> arg;
  for (const auto& p : parts) {
    double q = oracles::modularity_direct(g, p);
    if (q > best) {
      best = q;
      arg = p;
    }
  }
  auto result = louvain(g, 1);
  CHECK(result.count == 2);
  CHECK(result.community == arg);
  CHECK(std::abs(result.modularity - best) < 1e-12);
  CHECK(std::abs(result.modularity - oracles::modularity_direct(g, result.community)) < 1e-12);
}

TEST_CASE("louvain trivial cases") {
  auto k5 = louvain(fixtures::complete(5), 3);
  CHECK(k5.count == 1);
  CHECK(std::abs(k5.modularity) < 1e-15);
  auto empty = louvain(fixtures::make_graph(4, std::vector<graph::WeightedEdge>{}), 3);
  CHECK(empty.count == 4);
  CHECK(empty.modularity == 0.0);
}

TEST_CASE("louvain recovers a planted partition") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto s = synth::gen_planted_partition({30, 30}, 0.3, 0.01, seed);
    auto p = louvain(s.graph, seed);
    CHECK(oracles::adjusted_rand(p.community, s.labels) >= 0.9);
    CHECK(std::abs(p.modularity - oracles::modularity_direct(s.graph, p.community)) < 1e-12);
    auto summary = cohesion_summary(s.graph, seed);
    CHECK(summary.community_count == 2);
  }
  auto noise = synth::gen_planted_partition({30, 30}, 0.1, 0.1, 4);
  CHECK(std::abs(oracles::adjusted_rand(louvain(noise.graph, 1).community, noise.labels)) < 0.2);
}

TEST_CASE("property: louvain levels never lose modularity and the partition is valid") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto g = fixtures::random_graph(80, 0.06, seed, 3);
    auto p = louvain(g, seed);
    for (std::size_t k = 1; k < p.level_modularity.size(); ++k)
      CHECK(p.level_modularity[k] >= p.level_modularity[k - 1] - 1e-12);
    CHECK(p.count >= 1);
    CHECK(p.count <= g.node_count());
    CHECK(p.community.size() == g.node_count());
    std::vector<char> seen(p.count, 0);
    for (auto c : p.community) {
      REQUIRE(c < p.count);
      seen[c] = 1;
    }
    CHECK(std::count(seen.begin(), seen.end(), 1) == static_cast<long>(p.count));
    CHECK(p.modularity >= -0.5);
    CHECK(p.modularity <= 1.0);
    auto again = louvain(g, seed);
    CHECK(again.community == p.community);
  }
}

TEST_CASE("assortativity") {
  CHECK_FALSE(assortativity(fixtures::cycle(5)).has_value());
  CHECK(*assortativity(fixtures::star(4)) == doctest::Approx(-1.0));
  auto k2k3 = fixtures::unweighted(5, {{0, 1}, {2, 3}, {3, 4}, {2, 4}});
  auto oracle = oracles::assortativity_pairs(k2k3);
  REQUIRE(oracle.has_value());
  CHECK(*assortativity(k2k3) == doctest::Approx(*oracle).epsilon(1e-12));
  CHECK(*oracle == doctest::Approx(1.0));
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    auto g = fixtures::random_graph(50, 0.1, seed);
    CHECK(*assortativity(g) == doctest::Approx(*oracles::assortativity_pairs(g)).epsilon(1e-10));
  }
  CHECK_FALSE(assortativity(fixtures::make_graph(3, std::vector<graph::WeightedEdge>{})).has_value());
}

TEST_CASE("cohesion summary") {
  auto s = cohesion_summary(fixtures::complete(4), 1);
  CHECK(s.density == 1.0);
  CHECK(s.avg_clustering == 1.0);
  CHECK(s.transitivity == 1.0);
  CHECK(std::abs(s.modularity) < 1e-15);
  CHECK(s.community_count == 1);
  CHECK_FALSE(s.assortativity.has_value());
  auto e = cohesion_summary(graph::TemporalGraph{}, 1);
  CHECK(e.nodes == 0);
  CHECK(e.density == 0.0);
  CHECK(e.community_count == 0);
  CHECK_FALSE(e.assortativity.has_value());
  std::ostringstream out;
  write_cohesion_header(out);
  write_cohesion_row(out, s);
  CHECK(out.str().find("undefined") != std::string::npos);
}

TEST_CASE("clustering and transitivity are identical across thread counts") {
  auto g = fixtures::random_graph(200, 0.05, 3);
  set_thread_count(8);
  auto c8 = local_clustering(g);
  auto t8 = transitivity(g);
  set_thread_count(1);
  CHECK(local_clustering(g).values == c8.values);
  CHECK(transitivity(g) == t8);
}
