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

#include "collabnet/resilience.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "collabnet/parallel.hpp"
#include "collabnet/rng.hpp"

namespace collabnet::resilience {

namespace {

std::vector<NodeId> holders(const graph::TemporalGraph& g, const std::vector<roles::RoleAssignment>& a, roles::Role role) {
  require(a.size() == g.node_count(), ErrorCode::kInvalidArgument, "one role assignment per node is required");
  std::vector<NodeId> out;
  for (NodeId i = 0; i < a.size(); ++i)
    if (a[i].role == role) out.push_back(i);
  require(!out.empty(), ErrorCode::kInvalidArgument,
          "no node holds role " + std::string(roles::role_name(role)));
  return out;
}

}  // namespace

RemovalExperiment remove_by_role(const graph::TemporalGraph& g, const std::vector<roles::RoleAssignment>& assignments,
                                 roles::Role role, std::size_t count, std::size_t trials, std::uint64_t seed) {
  const auto pool = holders(g, assignments, role);
  require(count >= 1 && count <= pool.size(), ErrorCode::kInvalidArgument,
          "cannot remove " + std::to_string(count) + " of " + std::to_string(pool.size()) + " " +
              std::string(roles::role_name(role)) + " nodes");
  require(trials >= 1, ErrorCode::kInvalidArgument, "trials must be >= 1");
  RemovalExperiment ex;
  ex.role = role;
  ex.count = count;
  ex.trials = trials;
  ex.seed = seed;
  ex.lcc_before = graph::largest_connected_component(g).size;
  ex.lcc_after.assign(trials, 0);
  const std::uint64_t base = derive_seed(seed, "resilience.remove_by_role");
  parallel_for(0, trials, [&](std::size_t t) {
    CounterRng rng(base, t);
    std::vector<char> removed(g.node_count(), 0);
    for (auto k : rng.sample_without_replacement(pool.size(), count)) removed[pool[k]] = 1;
    ex.lcc_after[t] = graph::lcc_size_without(g, removed);
  });
  for (std::size_t t = 0; t < trials; ++t) {
    ex.impact.push_back(static_cast<double>(ex.lcc_before - ex.lcc_after[t]) / static_cast<double>(count));
    ex.lcc_after_mean += static_cast<double>(ex.lcc_after[t]);
    ex.mean_impact += ex.impact.back();
  }
  ex.lcc_after_mean /= static_cast<double>(trials);
  ex.mean_impact /= static_cast<double>(trials);
  if (trials > 1) {
    double ss = 0.0;
    for (double v : ex.impact) ss += (v - ex.mean_impact) * (v - ex.mean_impact);
    ex.sd_impact = std::sqrt(ss / static_cast<double>(trials - 1));
  }
  return ex;
}

double remove_all_of_role(const graph::TemporalGraph& g, const std::vector<roles::RoleAssignment>& assignments,
                          roles::Role role) {
  const auto pool = holders(g, assignments, role);
  const std::size_t before = graph::largest_connected_component(g).size;
  std::vector<char> removed(g.node_count(), 0);
  for (NodeId i : pool) removed[i] = 1;
  return static_cast<double>(graph::lcc_size_without(g, removed)) / static_cast<double>(before);
}

std::string_view ordering_name(Ordering o) { return o == Ordering::kByDegreeDesc ? "by_degree_desc" : "random"; }

std::optional<Ordering> parse_ordering(std::string_view text) {
  if (text == "by_degree_desc") return Ordering::kByDegreeDesc;
  if (text == "random") return Ordering::kRandom;
  return std::nullopt;
}

std::vector<CurvePoint> removal_curve(const graph::TemporalGraph& g, Ordering ordering, std::size_t steps,
                                      std::uint64_t seed) {
  require(steps >= 2, ErrorCode::kInvalidArgument, "removal curve needs at least 2 steps");
  const std::size_t n = g.node_count();
  require(n > 0, ErrorCode::kInvalidArgument, "removal curve needs a non-empty graph");
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), 0);
  if (ordering == Ordering::kByDegreeDesc) {
    std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return g.degree(a) > g.degree(b); });
  } else {
    CounterRng rng(derive_seed(seed, "resilience.removal_curve"), 0);
    rng.shuffle(std::span<NodeId>(order));
  }
  const std::size_t lcc0 = graph::largest_connected_component(g).size;
  std::vector<CurvePoint> curve;
  std::vector<char> removed(n, 0);
  std::size_t done = 0;
  for (std::size_t s = 0; s < steps; ++s) {
    const auto target = static_cast<std::size_t>(std::llround(static_cast<double>(n) * static_cast<double>(s) / static_cast<double>(steps - 1)));
    for (; done < target; ++done) removed[order[done]] = 1;
    CurvePoint p;
    p.removed = target;
    p.removed_fraction = static_cast<double>(target) / static_cast<double>(n);
    p.lcc = graph::lcc_size_without(g, removed);
    p.lcc_fraction = static_cast<double>(p.lcc) / static_cast<double>(lcc0);
    curve.push_back(p);
  }
  return curve;
}

void write_resilience_csv(const std::vector<RemovalExperiment>& experiments, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  out << "role,removed,trials,mean_impact,sd,lcc_before,lcc_after_mean\n";
  for (const auto& e : experiments)
    out << roles::role_name(e.role) << ',' << e.count << ',' << e.trials << ',' << format_real(e.mean_impact) << ','
        << format_real(e.sd_impact) << ',' << e.lcc_before << ',' << format_real(e.lcc_after_mean) << '\n';
}

}  // namespace collabnet::resilience
