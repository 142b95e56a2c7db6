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

#include <array>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "collabnet/centrality.hpp"

namespace collabnet::roles {

enum class Role : std::uint8_t { kCore, kBridge, kConnector, kRegular, kPeripheral };
inline constexpr std::size_t kRoleCount = 5;

std::string_view role_name(Role role);
std::optional<Role> parse_role(std::string_view text);

struct RoleThresholds {
  double core_degree = 1.0;
  double core_pagerank = 1.0;
  double bridge_betweenness = 1.5;
  double bridge_degree_max = 1.0;
  double connector_degree = 0.5;
  double connector_clustering = 0.0;
  double peripheral_degree = -0.5;
};

struct RoleAssignment {
  std::string contributor;
  std::string window;
  Role role = Role::kRegular;
  double z_degree = 0.0;
  double z_pagerank = 0.0;
  double z_betweenness = 0.0;
  double z_clustering = 0.0;
};

/// Core > Bridge > Connector > Peripheral > Regular, first rule that holds wins.
Role classify(double z_degree, double z_pagerank, double z_betweenness, double z_clustering,
              const RoleThresholds& thresholds = {});

/// (x - mean) / sd with the population sd. All zeros when sd == 0.
std::vector<double> zscores(const std::vector<double>& values, bool* degenerate = nullptr);

struct RoleResult {
  std::vector<RoleAssignment> assignments;  // node id order
  std::vector<std::string> degenerate_metrics;
};

/// Metric vectors must share a window and length; names gives contributor ids.
RoleResult classify_roles(const std::vector<std::string>& names, const centrality::MetricVector& degree,
                          const centrality::MetricVector& pagerank, const centrality::MetricVector& betweenness,
                          const centrality::MetricVector& clustering, const RoleThresholds& thresholds = {});

/// Role -> fraction of assignments. Roles with no holders are omitted.
std::map<Role, double> role_distribution(const std::vector<RoleAssignment>& assignments);

struct TransitionMatrix {
  std::array<std::array<double, kRoleCount>, kRoleCount> p{};
  std::array<std::array<std::size_t, kRoleCount>, kRoleCount> support{};
  std::array<bool, kRoleCount> row_supported{};
  std::size_t transitions = 0;
};

/// MLE over contributors present in consecutive windows (windows[k] and
/// windows[k+1]). Contributors missing from the next window are skipped.
/// Throws kInvalidArgument when no contributor spans two consecutive windows.
TransitionMatrix transition_matrix(const std::vector<std::vector<RoleAssignment>>& windows);
/// Same estimator over explicit per-contributor role sequences.
TransitionMatrix transition_matrix(const std::vector<std::vector<Role>>& sequences);

void write_roles_csv(const std::vector<RoleAssignment>& assignments, const std::filesystem::path& path);
void write_transitions_csv(const TransitionMatrix& matrix, const std::filesystem::path& path);

}  // namespace collabnet::roles
