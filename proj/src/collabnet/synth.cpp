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

#include "collabnet/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "collabnet/rng.hpp"

namespace collabnet::synth {

using nlohmann::json;

namespace {

constexpr std::array<double, ingest::kActionCount> kActionMix = {0.35, 0.12, 0.10, 0.10, 0.12, 0.02, 0.08, 0.11};

std::size_t pick_weighted(CounterRng& rng, const double* weights, std::size_t n) {
  double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    acc += weights[i];
    if (u < acc) return i;
  }
  return n - 1;
}

ingest::Timestamp quarter_start(const ingest::Quarter& q) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%04d-%02d-01T00:00:00Z", q.year, 3 * (q.quarter - 1) + 1);
  return *ingest::parse_rfc3339(buf);
}

}  // namespace

std::vector<std::string> node_names(std::size_t n, const std::string& prefix) {
  std::vector<std::string> names;
  names.reserve(n);
  char buf[32];
  for (std::size_t i = 0; i < n; ++i) {
    std::snprintf(buf, sizeof buf, "%06zu", i);
    names.push_back(prefix + buf);
  }
  return names;
}

GraphSample gen_preferential_attachment(std::size_t n, std::size_t m, std::uint64_t seed) {
  require(m >= 1 && n > m, ErrorCode::kInvalidArgument, "preferential attachment needs n > m >= 1");
  CounterRng rng(seed, fnv1a64("synth.preferential_attachment"));
  std::vector<graph::WeightedEdge> edges;
  std::vector<NodeId> endpoints;
  for (NodeId i = 0; i <= m; ++i)
    for (NodeId j = i + 1; j <= m; ++j) {
      edges.push_back({i, j, 1.0});
      endpoints.push_back(i);
      endpoints.push_back(j);
    }
  std::vector<NodeId> chosen;
  for (NodeId v = static_cast<NodeId>(m + 1); v < n; ++v) {
    chosen.clear();
    while (chosen.size() < m) {
      NodeId t = endpoints[rng.uniform_index(endpoints.size())];
      if (std::find(chosen.begin(), chosen.end(), t) == chosen.end()) chosen.push_back(t);
    }
    for (NodeId t : chosen) {
      edges.push_back({t, v, 1.0});
      endpoints.push_back(t);
      endpoints.push_back(v);
    }
  }
  GraphSample s;
  s.graph = graph::TemporalGraph::from_edges("synthetic", node_names(n), edges);
  std::vector<std::size_t> degrees(n);
  for (NodeId i = 0; i < n; ++i) degrees[i] = s.graph.degree(i);
  s.manifest = {{"generator", "preferential_attachment"},
                {"n", n},
                {"m", m},
                {"seed", seed},
                {"seed_graph", "complete K_{m+1}"},
                {"edges", s.graph.edge_count()},
                {"degrees", degrees}};
  return s;
}

GraphSample gen_planted_partition(const std::vector<std::size_t>& sizes, double p_in, double p_out, std::uint64_t seed) {
  require(!sizes.empty(), ErrorCode::kInvalidArgument, "planted partition needs at least one block");
  require(p_in >= 0 && p_in <= 1 && p_out >= 0 && p_out <= 1, ErrorCode::kInvalidArgument,
          "probabilities must be in [0,1]");
  require(p_in >= p_out, ErrorCode::kInvalidArgument, "planted partition needs p_in >= p_out");
  std::vector<std::uint32_t> labels;
  for (std::size_t b = 0; b < sizes.size(); ++b) {
    require(sizes[b] > 0, ErrorCode::kInvalidArgument, "block sizes must be positive");
    labels.insert(labels.end(), sizes[b], static_cast<std::uint32_t>(b));
  }
  const std::size_t n = labels.size();
  CounterRng rng(seed, fnv1a64("synth.planted_partition"));
  std::vector<graph::WeightedEdge> edges;
  std::size_t within = 0;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j) {
      const bool same = labels[i] == labels[j];
      if (rng.bernoulli(same ? p_in : p_out)) {
        edges.push_back({i, j, 1.0});
        within += same ? 1 : 0;
      }
    }
  GraphSample s;
  s.graph = graph::TemporalGraph::from_edges("synthetic", node_names(n), edges);
  s.labels = labels;
  s.manifest = {{"generator", "planted_partition"}, {"sizes", sizes},       {"p_in", p_in},
                {"p_out", p_out},                   {"seed", seed},         {"edges", edges.size()},
                {"within_edges", within},           {"labels", labels}};
  return s;
}

BurstCorpus gen_burst_corpus(std::size_t contributors, std::size_t quarters, double burst_rate, double amplitude,
                             std::uint64_t seed, double baseline) {
  require(burst_rate >= 0 && burst_rate <= 1, ErrorCode::kInvalidArgument, "burst_rate must be in [0,1]");
  require(amplitude >= 0 && baseline > 0 && quarters >= 1, ErrorCode::kInvalidArgument, "bad burst corpus parameters");
  CounterRng rng(seed, fnv1a64("synth.burst_corpus"));
  BurstCorpus c;
  std::vector<std::string> windows;
  for (std::size_t q = 0; q < quarters; ++q) windows.push_back("t" + std::to_string(q));
  auto names = node_names(contributors, "c");
  json registry = json::array();
  for (std::size_t i = 0; i < contributors; ++i) {
    temporal::ActivitySeries s{names[i], windows, std::vector<double>(quarters)};
    for (auto& v : s.values) v = static_cast<double>(rng.poisson(baseline));
    if (rng.bernoulli(burst_rate)) {
      std::size_t q = static_cast<std::size_t>(rng.uniform_index(quarters));
      s.values[q] = baseline + amplitude * std::sqrt(baseline);
      c.registry.push_back({i, q});
      registry.push_back({{"contributor", names[i]}, {"quarter", q}});
    }
    c.series.push_back(std::move(s));
  }
  c.manifest = {{"generator", "burst_corpus"}, {"contributors", contributors}, {"quarters", quarters},
                {"burst_rate", burst_rate},     {"amplitude", amplitude},       {"baseline", baseline},
                {"seed", seed},                 {"registry", registry}};
  return c;
}

ActionCorpus gen_action_corpus(std::size_t n, const std::array<double, ingest::kActionCount>& betas, double noise_sd,
                               std::uint64_t seed, const ActionCorpusOptions& opt) {
  require(n >= 3, ErrorCode::kInvalidArgument, "action corpus needs n >= 3");
  require(opt.correlation >= 0 && opt.correlation < 1, ErrorCode::kInvalidArgument, "correlation must be in [0,1)");
  require(noise_sd >= 0, ErrorCode::kInvalidArgument, "noise sd must be >= 0");
  constexpr std::size_t p = ingest::kActionCount;
  CounterRng rng(seed, fnv1a64("synth.action_corpus"));
  ActionCorpus c;
  c.betas = betas;
  c.counts.resize(n);
  const double shared = std::sqrt(opt.correlation), own = std::sqrt(1.0 - opt.correlation);
  for (auto& row : c.counts) {
    const double g = rng.normal();
    for (std::size_t j = 0; j < p; ++j)
      row[j] = std::round(std::exp(opt.log_mean + opt.log_sd * (shared * g + own * rng.normal())));
  }
  std::vector<double> signal(n, 0.0);
  for (std::size_t j = 0; j < p; ++j) {
    double mu = 0.0;
    for (const auto& row : c.counts) mu += row[j];
    mu /= static_cast<double>(n);
    double ss = 0.0;
    for (const auto& row : c.counts) ss += (row[j] - mu) * (row[j] - mu);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (sd == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) signal[i] += betas[j] * (c.counts[i][j] - mu) / sd;
  }
  if (opt.target_r2) {
    const double r2 = *opt.target_r2;
    require(r2 > 0 && r2 <= 1, ErrorCode::kInvalidArgument, "target R^2 must be in (0,1]");
    double mu = 0.0, ss = 0.0;
    for (double s : signal) mu += s;
    mu /= static_cast<double>(n);
    for (double s : signal) ss += (s - mu) * (s - mu);
    noise_sd = std::sqrt(ss / static_cast<double>(n) * (1.0 - r2) / r2);
  }
  c.noise_sd = noise_sd;
  c.target.resize(n);
  std::vector<double> noise(n);
  for (std::size_t i = 0; i < n; ++i) {
    noise[i] = noise_sd * rng.normal();
    c.target[i] = signal[i] + noise[i];
  }
  double ymu = 0.0;
  for (double y : c.target) ymu += y;
  ymu /= static_cast<double>(n);
  double sst = 0.0, sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sst += (c.target[i] - ymu) * (c.target[i] - ymu);
    sse += noise[i] * noise[i];
  }
  c.realized_r2 = sst > 0 ? 1.0 - sse / sst : 0.0;
  c.manifest = {{"generator", "action_corpus"},
                {"n", n},
                {"betas", betas},
                {"noise_sd", noise_sd},
                {"realized_r2", c.realized_r2},
                {"log_mean", opt.log_mean},
                {"log_sd", opt.log_sd},
                {"latent_correlation", opt.correlation},
                {"seed", seed}};
  return c;
}

std::vector<std::vector<roles::Role>> gen_markov_roles(const RoleMatrix& matrix, std::size_t contributors,
                                                       std::size_t length, std::uint64_t seed) {
  for (const auto& row : matrix) {
    double s = 0.0;
    for (double v : row) {
      require(v >= 0.0 && v <= 1.0, ErrorCode::kInvalidArgument, "transition probabilities must be in [0,1]");
      s += v;
    }
    require(std::abs(s - 1.0) < 1e-9, ErrorCode::kInvalidArgument, "transition matrix rows must sum to 1");
  }
  CounterRng rng(seed, fnv1a64("synth.markov_roles"));
  std::vector<std::vector<roles::Role>> out(contributors);
  for (auto& seq : out) {
    if (length == 0) continue;
    seq.reserve(length);
    auto r = static_cast<std::size_t>(rng.uniform_index(roles::kRoleCount));
    seq.push_back(static_cast<roles::Role>(r));
    for (std::size_t t = 1; t < length; ++t) {
      r = pick_weighted(rng, matrix[r].data(), roles::kRoleCount);
      seq.push_back(static_cast<roles::Role>(r));
    }
  }
  return out;
}

EventCorpus gen_event_corpus(const EventCorpusOptions& opt, std::uint64_t seed) {
  require(opt.contributors >= 1 && opt.quarters >= 1 && opt.groups >= 1 && opt.repos_per_group >= 2,
          ErrorCode::kInvalidArgument, "bad event corpus parameters");
  CounterRng rng(seed, fnv1a64("synth.event_corpus"));
  const std::size_t repo_count = opt.groups * opt.repos_per_group;
  std::vector<std::string> repos;
  char buf[48];
  for (std::size_t g = 0; g < opt.groups; ++g)
    for (std::size_t r = 0; r < opt.repos_per_group; ++r) {
      std::snprintf(buf, sizeof buf, "g%02zu-repo%02zu", g, r);
      repos.emplace_back(buf);
    }
  auto stage_of = [&](std::size_t repo) { return static_cast<ingest::ProjectStage>((repo / opt.repos_per_group) % 3); };
  std::vector<ingest::Timestamp> starts;
  for (std::size_t q = 0; q <= opt.quarters; ++q)
    starts.push_back(quarter_start(ingest::Quarter::from_index(opt.start.index() + static_cast<std::int64_t>(q))));

  EventCorpus c;
  std::size_t hubs = 0;
  for (std::size_t i = 0; i < opt.contributors; ++i) {
    std::snprintf(buf, sizeof buf, "c%08zu", i);
    const std::string who = buf;
    const std::size_t group = static_cast<std::size_t>(rng.uniform_index(opt.groups));
    auto home = rng.sample_without_replacement(opt.repos_per_group, 2);
    const bool hub = rng.bernoulli(0.03);
    hubs += hub ? 1 : 0;
    std::optional<std::size_t> burst_q;
    if (rng.bernoulli(opt.burst_rate)) burst_q = static_cast<std::size_t>(rng.uniform_index(opt.quarters));
    for (std::size_t q = 0; q < opt.quarters; ++q) {
      if (!rng.bernoulli(hub ? 0.95 : opt.active_probability)) continue;
      std::vector<std::size_t> touched;
      for (auto h : home)
        if (rng.bernoulli(0.7)) touched.push_back(group * opt.repos_per_group + static_cast<std::size_t>(h));
      if (touched.empty()) touched.push_back(group * opt.repos_per_group + static_cast<std::size_t>(home[0]));
      if (rng.bernoulli(opt.cross_group_probability)) touched.push_back(rng.uniform_index(repo_count));
      if (hub)
        for (int k = 0; k < 5; ++k) touched.push_back(rng.uniform_index(repo_count));
      std::sort(touched.begin(), touched.end());
      touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
      // Events are spread over the touched repositories, so breadth does not
      // change a contributor's total volume.
      std::size_t events = 3 + rng.poisson(3.0);
      if (burst_q && *burst_q == q) events = static_cast<std::size_t>(std::round(events * opt.burst_multiplier));
      events = std::max(events, touched.size());
      const auto span = static_cast<std::uint64_t>(starts[q + 1] - starts[q]);
      for (std::size_t e = 0; e < events; ++e) {
        const std::size_t repo = e < touched.size() ? touched[e] : touched[rng.uniform_index(touched.size())];
        ingest::EventRecord r;
        r.contributor = who;
        r.repo = repos[repo];
        r.action = static_cast<ingest::Action>(pick_weighted(rng, kActionMix.data(), kActionMix.size()));
        r.count = 1 + rng.poisson(1.0);
        r.timestamp = starts[q] + static_cast<ingest::Timestamp>(rng.uniform_index(span));
        r.stage = stage_of(repo);
        c.records.push_back(std::move(r));
      }
    }
    if (burst_q) {
      c.planted_bursts.push_back(
          {who, ingest::Quarter::from_index(opt.start.index() + static_cast<std::int64_t>(*burst_q)).label()});
    }
  }
  json bursts = json::array();
  for (const auto& [who, q] : c.planted_bursts) bursts.push_back({{"contributor", who}, {"quarter", q}});
  c.manifest = {{"generator", "event_corpus"},
                {"contributors", opt.contributors},
                {"quarters", opt.quarters},
                {"start", opt.start.label()},
                {"groups", opt.groups},
                {"repos_per_group", opt.repos_per_group},
                {"active_probability", opt.active_probability},
                {"cross_group_probability", opt.cross_group_probability},
                {"burst_rate", opt.burst_rate},
                {"burst_multiplier", opt.burst_multiplier},
                {"hubs", hubs},
                {"records", c.records.size()},
                {"seed", seed},
                {"planted_bursts", bursts}};
  return c;
}

void write_manifest(const json& manifest, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  out << manifest.dump(2) << '\n';
}

void write_series_csv(const std::vector<temporal::ActivitySeries>& series, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  out << "contributor,window,value\n";
  for (const auto& s : series)
    for (std::size_t t = 0; t < s.values.size(); ++t)
      out << s.contributor << ',' << s.windows[t] << ',' << format_real(s.values[t]) << '\n';
}

}  // namespace collabnet::synth
