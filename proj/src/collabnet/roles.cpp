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

#include "collabnet/roles.hpp"

#include <cmath>
#include <fstream>

namespace collabnet::roles {

namespace {

constexpr std::array<std::string_view, kRoleCount> kRoleNames = {"Core", "Bridge", "Connector", "Regular",
                                                                  "Peripheral"};

std::size_t idx(Role r) { return static_cast<std::size_t>(r); }

TransitionMatrix finish(TransitionMatrix m) {
  for (std::size_t a = 0; a < kRoleCount; ++a) {
    std::size_t row = 0;
    for (std::size_t b = 0; b < kRoleCount; ++b) row += m.support[a][b];
    m.row_supported[a] = row > 0;
    for (std::size_t b = 0; b < kRoleCount; ++b)
      m.p[a][b] = row > 0 ? static_cast<double>(m.support[a][b]) / static_cast<double>(row) : 0.0;
    m.transitions += row;
  }
  require(m.transitions > 0, ErrorCode::kInvalidArgument, "no contributor appears in two consecutive windows");
  return m;
}

}  // namespace

std::string_view role_name(Role role) { return kRoleNames[idx(role)]; }

std::optional<Role> parse_role(std::string_view text) {
  for (std::size_t i = 0; i < kRoleCount; ++i)
    if (kRoleNames[i] == text) return static_cast<Role>(i);
  return std::nullopt;
}

Role classify(double zd, double zp, double zb, double zc, const RoleThresholds& t) {
  if (zd > t.core_degree && zp > t.core_pagerank) return Role::kCore;
  if (zb > t.bridge_betweenness && zd <= t.bridge_degree_max) return Role::kBridge;
  if (zd > t.connector_degree && zc < t.connector_clustering) return Role::kConnector;
  if (zd < t.peripheral_degree) return Role::kPeripheral;
  return Role::kRegular;
}

std::vector<double> zscores(const std::vector<double>& values, bool* degenerate) {
  std::vector<double> z(values.size(), 0.0);
  if (degenerate) *degenerate = true;
  if (values.empty()) return z;
  const double n = static_cast<double>(values.size());
  double mu = 0.0;
  for (double v : values) mu += v;
  mu /= n;
  double ss = 0.0;
  for (double v : values) ss += (v - mu) * (v - mu);
  const double sd = std::sqrt(ss / n);
  // Spread below rounding noise of the mean counts as no spread.
  if (!(sd > 1e-12 * std::max(1.0, std::abs(mu)))) return z;
  if (degenerate) *degenerate = false;
  for (std::size_t i = 0; i < values.size(); ++i) z[i] = (values[i] - mu) / sd;
  return z;
}

RoleResult classify_roles(const std::vector<std::string>& names, const centrality::MetricVector& degree,
                          const centrality::MetricVector& pagerank, const centrality::MetricVector& betweenness,
                          const centrality::MetricVector& clustering, const RoleThresholds& thresholds) {
  const std::size_t n = names.size();
  for (const auto* m : {&degree, &pagerank, &betweenness, &clustering})
    require(m->values.size() == n, ErrorCode::kInvalidArgument,
            "metric " + std::string(centrality::metric_name(m->metric)) + " has the wrong length");
  RoleResult r;
  std::array<std::vector<double>, 4> z;
  const std::array<const centrality::MetricVector*, 4> ms = {&degree, &pagerank, &betweenness, &clustering};
  for (std::size_t k = 0; k < 4; ++k) {
    bool degenerate = false;
    z[k] = zscores(ms[k]->values, &degenerate);
    if (degenerate && n > 0) r.degenerate_metrics.emplace_back(centrality::metric_name(ms[k]->metric));
  }
  r.assignments.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    RoleAssignment a{names[i], degree.window, Role::kRegular, z[0][i], z[1][i], z[2][i], z[3][i]};
    a.role = classify(a.z_degree, a.z_pagerank, a.z_betweenness, a.z_clustering, thresholds);
    r.assignments.push_back(std::move(a));
  }
  return r;
}

std::map<Role, double> role_distribution(const std::vector<RoleAssignment>& assignments) {
  require(!assignments.empty(), ErrorCode::kInvalidArgument, "role distribution needs assignments");
  std::map<Role, std::size_t> counts;
  for (const auto& a : assignments) ++counts[a.role];
  std::map<Role, double> out;
  for (auto [role, c] : counts) out[role] = static_cast<double>(c) / static_cast<double>(assignments.size());
  return out;
}

TransitionMatrix transition_matrix(const std::vector<std::vector<RoleAssignment>>& windows) {
  TransitionMatrix m;
  for (std::size_t k = 0; k + 1 < windows.size(); ++k) {
    std::map<std::string, Role> next;
    for (const auto& a : windows[k + 1]) next.emplace(a.contributor, a.role);
    for (const auto& a : windows[k]) {
      auto it = next.find(a.contributor);
      if (it != next.end()) ++m.support[idx(a.role)][idx(it->second)];
    }
  }
  return finish(m);
}

TransitionMatrix transition_matrix(const std::vector<std::vector<Role>>& sequences) {
  TransitionMatrix m;
  for (const auto& s : sequences)
    for (std::size_t t = 1; t < s.size(); ++t) ++m.support[idx(s[t - 1])][idx(s[t])];
  return finish(m);
}

void write_roles_csv(const std::vector<RoleAssignment>& assignments, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  out << "contributor,window,role,z_degree,z_pagerank,z_betweenness,z_clustering\n";
  for (const auto& a : assignments)
    out << a.contributor << ',' << a.window << ',' << role_name(a.role) << ',' << format_real(a.z_degree) << ','
        << format_real(a.z_pagerank) << ',' << format_real(a.z_betweenness) << ',' << format_real(a.z_clustering)
        << '\n';
}

void write_transitions_csv(const TransitionMatrix& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  out << "from,to,probability,support,row_supported\n";
  for (std::size_t a = 0; a < kRoleCount; ++a)
    for (std::size_t b = 0; b < kRoleCount; ++b)
      out << kRoleNames[a] << ',' << kRoleNames[b] << ',' << format_real(m.p[a][b]) << ',' << m.support[a][b] << ','
          << (m.row_supported[a] ? 1 : 0) << '\n';
}

}  // namespace collabnet::roles
