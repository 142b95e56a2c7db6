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

#include "collabnet/collabnet.h"

#include <cmath>
#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "collabnet/centrality.hpp"
#include "collabnet/cohesion.hpp"
#include "collabnet/config.hpp"
#include "collabnet/neural.hpp"
#include "collabnet/parallel.hpp"
#include "collabnet/pipeline.hpp"
#include "collabnet/resilience.hpp"
#include "collabnet/roles.hpp"
#include "collabnet/stats.hpp"
#include "collabnet/synth.hpp"
#include "collabnet/temporal.hpp"

using namespace collabnet;

struct cn_config {
  config::PipelineConfig config;
  std::vector<config::ConfigIssue> load_issues;
  std::vector<config::ConfigIssue> issues;
  std::string report;
};

struct cn_graph {
  graph::TemporalGraph graph;
};

namespace {

thread_local std::string t_error;

template <class F>
cn_status guarded(F&& body) {
  t_error.clear();
  try {
    body();
    return CN_OK;
  } catch (const Error& e) {
    t_error = e.what();
    return static_cast<cn_status>(e.code());
  } catch (const std::bad_alloc&) {
    t_error = "out of memory";
  } catch (const std::exception& e) {
    t_error = e.what();
  } catch (...) {
    t_error = "unknown error";
  }
  return CN_ERR_INTERNAL;
}

void need(const void* p, const char* what) {
  require(p != nullptr, ErrorCode::kInvalidArgument, std::string(what) + " is NULL");
}

const graph::TemporalGraph& graph_of(const cn_graph* g) {
  need(g, "graph");
  return g->graph;
}

void copy_out(const std::vector<double>& v, double* out) {
  need(out, "output array");
  std::copy(v.begin(), v.end(), out);
}

std::vector<double> to_vec(const double* p, size_t n) {
  if (n > 0) need(p, "input array");
  return n ? std::vector<double>(p, p + n) : std::vector<double>{};
}

std::vector<roles::RoleAssignment> assignments(const graph::TemporalGraph& g, const int* roles) {
  need(roles, "roles");
  std::vector<roles::RoleAssignment> a(g.node_count());
  for (size_t i = 0; i < a.size(); ++i) {
    require(roles[i] >= 0 && roles[i] < CN_ROLE_COUNT, ErrorCode::kInvalidArgument,
            "role code " + std::to_string(roles[i]) + " at node " + std::to_string(i) + " is out of range");
    a[i].contributor = g.name(static_cast<NodeId>(i));
    a[i].window = g.window();
    a[i].role = static_cast<roles::Role>(roles[i]);
  }
  return a;
}

}  // namespace

extern "C" {

const char* cn_version(void) { return "0.1.0"; }

const char* cn_last_error(void) { return t_error.c_str(); }

const char* cn_status_name(cn_status s) {
  switch (s) {
    case CN_OK: return "ok";
    case CN_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case CN_ERR_IO: return "io";
    case CN_ERR_PARSE: return "parse";
    case CN_ERR_SCHEMA: return "schema";
    case CN_ERR_CONFIG: return "config";
    case CN_ERR_NUMERIC: return "numeric";
    case CN_ERR_NOT_FOUND: return "not_found";
    case CN_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* cn_role_name(int role) {
  if (role < 0 || role >= CN_ROLE_COUNT) return nullptr;
  return roles::role_name(static_cast<roles::Role>(role)).data();
}

cn_status cn_set_threads(int threads) {
  return guarded([&] {
    require(threads >= 1, ErrorCode::kInvalidArgument, "threads must be >= 1");
    set_thread_count(threads);
  });
}

// ---- configuration ------------------------------------------------------

cn_status cn_config_new(cn_config** out) {
  return guarded([&] {
    need(out, "out");
    *out = new cn_config();
  });
}

cn_status cn_config_load(const char* path, cn_config** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    auto loaded = config::load_config(path);
    *out = new cn_config{std::move(loaded.config), loaded.issues, loaded.issues, {}};
  });
}

void cn_config_free(cn_config* c) { delete c; }

cn_status cn_config_set(cn_config* c, const char* field, const char* value) {
  return guarded([&] {
    need(c, "config");
    need(field, "field");
    need(value, "value");
    auto issues = config::set_field(c->config, field, value);
    if (!issues.empty()) fail(ErrorCode::kConfig, issues.front().field + ": " + issues.front().message);
  });
}

cn_status cn_config_validate(cn_config* c, size_t* count) {
  return guarded([&] {
    need(c, "config");
    need(count, "issue_count");
    c->issues = c->load_issues;
    for (auto& i : config::validate(c->config)) c->issues.push_back(std::move(i));
    *count = c->issues.size();
  });
}

cn_status cn_config_issue(const cn_config* c, size_t index, const char** field, const char** message) {
  return guarded([&] {
    need(c, "config");
    require(index < c->issues.size(), ErrorCode::kNotFound, "issue index out of range");
    if (field) *field = c->issues[index].field.c_str();
    if (message) *message = c->issues[index].message.c_str();
  });
}

cn_status cn_config_hash(const cn_config* c, uint64_t* out) {
  return guarded([&] {
    need(c, "config");
    need(out, "out");
    *out = config::config_hash(c->config);
  });
}

cn_status cn_config_canonical(const cn_config* c, char* buffer, size_t capacity, size_t* needed) {
  return guarded([&] {
    need(c, "config");
    const std::string text = config::canonical_text(c->config);
    if (needed) *needed = text.size() + 1;
    if (buffer && capacity > 0) {
      const size_t n = std::min(capacity - 1, text.size());
      std::memcpy(buffer, text.data(), n);
      buffer[n] = '\0';
    }
  });
}

cn_status cn_run(cn_config* c) {
  cn_status status = CN_OK;
  const cn_status outer = guarded([&] {
    need(c, "config");
    c->issues = c->load_issues;
    if (!c->issues.empty()) {
      status = CN_ERR_CONFIG;
      t_error = c->issues.front().field + ": " + c->issues.front().message;
      return;
    }
    auto result = pipeline::run_pipeline(c->config);
    c->issues = result.issues;
    c->report = result.report.dump(2);
    status = static_cast<cn_status>(result.exit_code);
    if (!c->issues.empty())
      t_error = c->issues.front().field + ": " + c->issues.front().message;
    else if (result.report.contains("failure"))
      t_error = result.report["failure"]["stage"].get<std::string>() + ": " +
                result.report["failure"]["message"].get<std::string>();
  });
  return outer != CN_OK ? outer : status;
}

cn_status cn_config_report(const cn_config* c, const char** json) {
  return guarded([&] {
    need(c, "config");
    need(json, "json");
    require(!c->report.empty(), ErrorCode::kNotFound, "no pipeline run recorded");
    *json = c->report.c_str();
  });
}

// ---- graphs ---------------------------------------------------------------

cn_status cn_graph_from_edges(size_t nodes, size_t edges, const uint32_t* src, const uint32_t* dst,
                              const double* weight, cn_graph** out) {
  return guarded([&] {
    need(out, "out");
    if (edges > 0) {
      need(src, "src");
      need(dst, "dst");
    }
    std::vector<graph::WeightedEdge> list;
    for (size_t e = 0; e < edges; ++e) list.push_back({src[e], dst[e], weight ? weight[e] : 1.0});
    *out = new cn_graph{graph::TemporalGraph::from_edges("", synth::node_names(nodes), list)};
  });
}

cn_status cn_graph_load(const char* edges_path, const char* nodes_path, cn_graph** out) {
  return guarded([&] {
    need(edges_path, "edges_path");
    need(nodes_path, "nodes_path");
    need(out, "out");
    *out = new cn_graph{graph::read_edge_list(edges_path, nodes_path)};
  });
}

cn_status cn_graph_save(const cn_graph* g, const char* edges_path, const char* nodes_path) {
  return guarded([&] {
    need(edges_path, "edges_path");
    need(nodes_path, "nodes_path");
    graph::write_edge_list(graph_of(g), edges_path, nodes_path);
  });
}

cn_status cn_graph_barabasi_albert(size_t nodes, size_t m, uint64_t seed, cn_graph** out) {
  return guarded([&] {
    need(out, "out");
    *out = new cn_graph{synth::gen_preferential_attachment(nodes, m, seed).graph};
  });
}

cn_status cn_graph_planted_partition(size_t blocks, size_t block_size, double p_in, double p_out, uint64_t seed,
                                     cn_graph** out, uint32_t* labels) {
  return guarded([&] {
    need(out, "out");
    auto s = synth::gen_planted_partition(std::vector<std::size_t>(blocks, block_size), p_in, p_out, seed);
    if (labels) std::copy(s.labels.begin(), s.labels.end(), labels);
    *out = new cn_graph{std::move(s.graph)};
  });
}

void cn_graph_free(cn_graph* g) { delete g; }

cn_status cn_graph_node_count(const cn_graph* g, size_t* out) {
  return guarded([&] {
    const auto& gr = graph_of(g);
    need(out, "out");
    *out = gr.node_count();
  });
}

cn_status cn_graph_edge_count(const cn_graph* g, size_t* out) {
  return guarded([&] {
    const auto& gr = graph_of(g);
    need(out, "out");
    *out = gr.edge_count();
  });
}

cn_status cn_graph_node_name(const cn_graph* g, size_t node, const char** name) {
  return guarded([&] {
    const auto& gr = graph_of(g);
    need(name, "name");
    require(node < gr.node_count(), ErrorCode::kNotFound, "node " + std::to_string(node) + " does not exist");
    *name = gr.name(static_cast<NodeId>(node)).c_str();
  });
}

cn_status cn_graph_largest_component(const cn_graph* g, size_t* size) {
  return guarded([&] {
    const auto& gr = graph_of(g);
    need(size, "size");
    *size = graph::largest_connected_component(gr).size;
  });
}

// ---- centrality and cohesion ---------------------------------------------

cn_status cn_pagerank(const cn_graph* g, double damping, double* out) {
  return guarded([&] { copy_out(centrality::pagerank(graph_of(g), {damping, 1e-10, 1000}).values, out); });
}

cn_status cn_degree_centrality(const cn_graph* g, double* out) {
  return guarded([&] { copy_out(centrality::degree_centrality(graph_of(g)).values, out); });
}

cn_status cn_betweenness_exact(const cn_graph* g, double* out) {
  return guarded([&] { copy_out(centrality::betweenness_exact(graph_of(g)).values, out); });
}

cn_status cn_betweenness_sampled(const cn_graph* g, size_t sources, uint64_t seed, double* out) {
  return guarded([&] { copy_out(centrality::betweenness_sampled(graph_of(g), sources, seed).values, out); });
}

cn_status cn_closeness(const cn_graph* g, int harmonic, double* out) {
  return guarded([&] { copy_out(centrality::closeness(graph_of(g), harmonic != 0).values, out); });
}

cn_status cn_eigenvector(const cn_graph* g, double* out) {
  return guarded([&] { copy_out(centrality::eigenvector_centrality(graph_of(g)).values, out); });
}

cn_status cn_local_clustering(const cn_graph* g, double* out) {
  return guarded([&] { copy_out(cohesion::local_clustering(graph_of(g)).values, out); });
}

cn_status cn_density(const cn_graph* g, double* out) {
  return guarded([&] {
    const auto& gr = graph_of(g);
    need(out, "out");
    *out = cohesion::density(gr);
  });
}

cn_status cn_transitivity(const cn_graph* g, double* out) {
  return guarded([&] {
    const auto& gr = graph_of(g);
    need(out, "out");
    *out = cohesion::transitivity(gr);
  });
}

cn_status cn_assortativity(const cn_graph* g, double* out, int* defined) {
  return guarded([&] {
    const auto& gr = graph_of(g);
    need(out, "out");
    const auto r = cohesion::assortativity(gr);
    *out = r.value_or(std::nan(""));
    if (defined) *defined = r.has_value();
  });
}

cn_status cn_louvain(const cn_graph* g, uint64_t seed, uint32_t* labels, size_t* communities, double* modularity) {
  return guarded([&] {
    const auto p = cohesion::louvain(graph_of(g), seed);
    if (labels) std::copy(p.community.begin(), p.community.end(), labels);
    if (communities) *communities = p.count;
    if (modularity) *modularity = p.modularity;
  });
}

cn_status cn_modularity(const cn_graph* g, const uint32_t* labels, double* out) {
  return guarded([&] {
    const auto& gr = graph_of(g);
    need(labels, "labels");
    need(out, "out");
    *out = cohesion::modularity(gr, std::vector<std::uint32_t>(labels, labels + gr.node_count()));
  });
}

// ---- roles and resilience -------------------------------------------------

cn_status cn_classify_roles(const cn_graph* g, uint64_t seed, int* roles_out) {
  return guarded([&] {
    const auto& gr = graph_of(g);
    need(roles_out, "roles");
    const auto r = roles::classify_roles(gr.names(), centrality::degree_centrality(gr), centrality::pagerank(gr),
                                         centrality::betweenness(gr, {}, seed), cohesion::local_clustering(gr));
    for (size_t i = 0; i < r.assignments.size(); ++i) roles_out[i] = static_cast<int>(r.assignments[i].role);
  });
}

cn_status cn_transition_matrix(const int* sequences, size_t contributors, size_t length,
                               double probabilities[CN_ROLE_COUNT * CN_ROLE_COUNT], int row_supported[CN_ROLE_COUNT]) {
  return guarded([&] {
    need(sequences, "sequences");
    need(probabilities, "probabilities");
    // Absence (-1) splits a contributor's history into separate runs.
    std::vector<std::vector<roles::Role>> runs;
    for (size_t c = 0; c < contributors; ++c) {
      std::vector<roles::Role> run;
      for (size_t t = 0; t < length; ++t) {
        const int v = sequences[c * length + t];
        if (v < 0) {
          if (run.size() > 1) runs.push_back(run);
          run.clear();
          continue;
        }
        require(v < CN_ROLE_COUNT, ErrorCode::kInvalidArgument, "role code out of range");
        run.push_back(static_cast<roles::Role>(v));
      }
      if (run.size() > 1) runs.push_back(std::move(run));
    }
    const auto m = roles::transition_matrix(runs);
    for (size_t a = 0; a < CN_ROLE_COUNT; ++a) {
      for (size_t b = 0; b < CN_ROLE_COUNT; ++b) probabilities[a * CN_ROLE_COUNT + b] = m.p[a][b];
      if (row_supported) row_supported[a] = m.row_supported[a];
    }
  });
}

cn_status cn_remove_by_role(const cn_graph* g, const int* roles_in, int role, size_t count, size_t trials,
                            uint64_t seed, double* mean_impact, double* sd_impact) {
  return guarded([&] {
    const auto& gr = graph_of(g);
    require(role >= 0 && role < CN_ROLE_COUNT, ErrorCode::kInvalidArgument, "role code out of range");
    const auto ex =
        resilience::remove_by_role(gr, assignments(gr, roles_in), static_cast<roles::Role>(role), count, trials, seed);
    if (mean_impact) *mean_impact = ex.mean_impact;
    if (sd_impact) *sd_impact = ex.sd_impact;
  });
}

// ---- time series and statistics -------------------------------------------

cn_status cn_detect_bursts(const double* values, size_t n, double theta, size_t* indices, size_t capacity,
                           size_t* count) {
  return guarded([&] {
    temporal::ActivitySeries s;
    s.values = to_vec(values, n);
    for (size_t i = 0; i < n; ++i) s.windows.push_back(std::to_string(i));
    const auto r = temporal::detect_bursts(s, theta);
    if (count) *count = r.events.size();
    for (size_t k = 0; k < r.events.size() && k < capacity; ++k) {
      need(indices, "indices");
      indices[k] = r.events[k].index;
    }
  });
}

cn_status cn_pearson(const double* x, const double* y, size_t n, double* r, double* p) {
  return guarded([&] {
    const auto res = stats::pearson(to_vec(x, n), to_vec(y, n));
    require(res.defined, ErrorCode::kNumeric, "correlation is undefined for a constant input");
    if (r) *r = res.r;
    if (p) *p = res.p;
  });
}

cn_status cn_gini(const double* values, size_t n, double* out) {
  return guarded([&] {
    need(out, "out");
    const auto g = stats::gini(to_vec(values, n));
    require(g.has_value(), ErrorCode::kNumeric, "gini is undefined for an empty or all-zero input");
    *out = *g;
  });
}

cn_status cn_power_law_fit(const double* values, size_t n, uint64_t seed, size_t bootstrap, double* alpha,
                           double* x_min, double* p) {
  return guarded([&] {
    stats::PowerLawOptions opt;
    opt.bootstrap = bootstrap;
    const auto fit = stats::fit_power_law(to_vec(values, n), seed, opt);
    if (alpha) *alpha = fit.alpha;
    if (x_min) *x_min = fit.x_min;
    if (p) *p = fit.p;
  });
}

cn_status cn_mann_whitney(const double* a, size_t na, const double* b, size_t nb, double* u, double* p) {
  return guarded([&] {
    const auto r = stats::mann_whitney_u(to_vec(a, na), to_vec(b, nb));
    if (u) *u = r.u;
    if (p) *p = r.p;
  });
}

// ---- neural ------------------------------------------------------------------

cn_status cn_gcn_train(const cn_graph* g, const int* labels, uint64_t seed, size_t epochs, double* accuracy,
                       double* macro_f1) {
  return guarded([&] {
    const auto& gr = graph_of(g);
    need(labels, "labels");
    neural::GcnConfig cfg;
    cfg.epochs = epochs;
    const auto m = neural::gcn_train(cfg, neural::normalized_adjacency(gr), neural::gcn_features(gr),
                                     std::vector<int>(labels, labels + gr.node_count()), seed);
    if (accuracy) *accuracy = m.report.metrics["accuracy"].get<double>();
    if (macro_f1) *macro_f1 = m.report.metrics["macro_f1"].get<double>();
  });
}

}  // extern "C"
