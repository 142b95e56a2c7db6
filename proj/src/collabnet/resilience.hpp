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

// Node-removal experiments measured on the largest connected component.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "collabnet/graph.hpp"
#include "collabnet/roles.hpp"

namespace collabnet::resilience {

struct RemovalExperiment {
  roles::Role role = roles::Role::kRegular;
  std::size_t count = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::size_t lcc_before = 0;
  std::vector<std::size_t> lcc_after;  // per trial
  std::vector<double> impact;          // (lcc_before - lcc_after) / count, per trial
  double mean_impact = 0.0;
  double sd_impact = 0.0;  // sample sd over trials, 0 for one trial
  double lcc_after_mean = 0.0;
};

/// assignments[i] is node i's role. Each trial removes `count` holders of the
/// role sampled without replacement. Throws when fewer than `count` nodes hold it.
RemovalExperiment remove_by_role(const graph::TemporalGraph& graph, const std::vector<roles::RoleAssignment>& assignments,
                                 roles::Role role, std::size_t count, std::size_t trials, std::uint64_t seed);

/// LCC after deleting every holder of the role, over the LCC before. Throws when
/// nobody holds the role; 0 when the graph had no nodes left.
double remove_all_of_role(const graph::TemporalGraph& graph, const std::vector<roles::RoleAssignment>& assignments,
                          roles::Role role);

enum class Ordering : std::uint8_t { kByDegreeDesc, kRandom };
std::string_view ordering_name(Ordering ordering);
std::optional<Ordering> parse_ordering(std::string_view text);

struct CurvePoint {
  std::size_t removed = 0;
  double removed_fraction = 0.0;
  std::size_t lcc = 0;
  double lcc_fraction = 0.0;  // over the initial LCC
};

/// `steps` evenly spaced removal levels from none to all nodes. Degree order
/// uses the initial degrees, ties to the smaller id.
std::vector<CurvePoint> removal_curve(const graph::TemporalGraph& graph, Ordering ordering, std::size_t steps,
                                      std::uint64_t seed);

void write_resilience_csv(const std::vector<RemovalExperiment>& experiments, const std::filesystem::path& path);

}  // namespace collabnet::resilience
