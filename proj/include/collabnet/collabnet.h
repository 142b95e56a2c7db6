/*
 * Copyright 2026 The collabnet Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to libcollabnet.
 *
 * Every function returns a cn_status. On failure cn_last_error() describes
 * the problem; the message is per thread and stays valid until the next call
 * on that thread. Output arrays sized "n" hold one entry per graph node in
 * node id order and are owned by the caller. Handles are not thread safe;
 * distinct handles may be used from distinct threads.
 */

#ifndef COLLABNET_COLLABNET_H
#define COLLABNET_COLLABNET_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CN_API __declspec(dllexport)
#else
#define CN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cn_status {
  CN_OK = 0,
  CN_ERR_INVALID_ARGUMENT = 1,
  CN_ERR_IO = 2,
  CN_ERR_PARSE = 3,
  CN_ERR_SCHEMA = 4,
  CN_ERR_CONFIG = 5,
  CN_ERR_NUMERIC = 6,
  CN_ERR_NOT_FOUND = 7,
  CN_ERR_INTERNAL = 8
} cn_status;

typedef enum cn_role {
  CN_ROLE_CORE = 0,
  CN_ROLE_BRIDGE = 1,
  CN_ROLE_CONNECTOR = 2,
  CN_ROLE_REGULAR = 3,
  CN_ROLE_PERIPHERAL = 4
} cn_role;

#define CN_ROLE_COUNT 5

typedef struct cn_config cn_config;
typedef struct cn_graph cn_graph;

CN_API const char* cn_version(void);
CN_API const char* cn_last_error(void);
CN_API const char* cn_status_name(cn_status status);
CN_API const char* cn_role_name(int role);
/* Worker threads for parallel kernels (>= 1). Results do not depend on it. */
CN_API cn_status cn_set_threads(int threads);

/* ---- configuration and pipeline ------------------------------------- */

CN_API cn_status cn_config_new(cn_config** out);
/* Unknown keys and unparsable values are kept as issues, not errors; a file
 * that is not INI at all fails with CN_ERR_PARSE. */
CN_API cn_status cn_config_load(const char* path, cn_config** out);
CN_API void cn_config_free(cn_config* config);
/* field is "section.key", e.g. "burst.theta". */
CN_API cn_status cn_config_set(cn_config* config, const char* field, const char* value);
/* Recomputes the issue list: load issues plus every validation violation. */
CN_API cn_status cn_config_validate(cn_config* config, size_t* issue_count);
/* Pointers stay valid until the next validate, set, run or free. */
CN_API cn_status cn_config_issue(const cn_config* config, size_t index, const char** field, const char** message);
CN_API cn_status cn_config_hash(const cn_config* config, uint64_t* out);
/* Copies the canonical "section.key = value" text; *needed includes the NUL. */
CN_API cn_status cn_config_canonical(const cn_config* config, char* buffer, size_t capacity, size_t* needed);
/* Runs the resolved stages. Returns CN_ERR_CONFIG with issues recorded when
 * validation fails, or the failing stage's status. */
CN_API cn_status cn_run(cn_config* config);
/* JSON of the last run's report. Valid until the next run or free. */
CN_API cn_status cn_config_report(const cn_config* config, const char** json);

/* ---- graphs ---------------------------------------------------------- */

/* Undirected; weight may be NULL for unit weights. Duplicate pairs add up. */
CN_API cn_status cn_graph_from_edges(size_t nodes, size_t edges, const uint32_t* src, const uint32_t* dst,
                                     const double* weight, cn_graph** out);
CN_API cn_status cn_graph_load(const char* edges_path, const char* nodes_path, cn_graph** out);
CN_API cn_status cn_graph_save(const cn_graph* graph, const char* edges_path, const char* nodes_path);
CN_API cn_status cn_graph_barabasi_albert(size_t nodes, size_t m, uint64_t seed, cn_graph** out);
/* labels may be NULL; otherwise receives the planted block of each node. */
CN_API cn_status cn_graph_planted_partition(size_t blocks, size_t block_size, double p_in, double p_out,
                                            uint64_t seed, cn_graph** out, uint32_t* labels);
CN_API void cn_graph_free(cn_graph* graph);
CN_API cn_status cn_graph_node_count(const cn_graph* graph, size_t* out);
CN_API cn_status cn_graph_edge_count(const cn_graph* graph, size_t* out);
CN_API cn_status cn_graph_node_name(const cn_graph* graph, size_t node, const char** name);
CN_API cn_status cn_graph_largest_component(const cn_graph* graph, size_t* size);

/* ---- centrality and cohesion --------------------------------------- */

CN_API cn_status cn_pagerank(const cn_graph* graph, double damping, double* out);
CN_API cn_status cn_degree_centrality(const cn_graph* graph, double* out);
CN_API cn_status cn_betweenness_exact(const cn_graph* graph, double* out);
CN_API cn_status cn_betweenness_sampled(const cn_graph* graph, size_t sources, uint64_t seed, double* out);
CN_API cn_status cn_closeness(const cn_graph* graph, int harmonic, double* out);
CN_API cn_status cn_eigenvector(const cn_graph* graph, double* out);
CN_API cn_status cn_local_clustering(const cn_graph* graph, double* out);
CN_API cn_status cn_density(const cn_graph* graph, double* out);
CN_API cn_status cn_transitivity(const cn_graph* graph, double* out);
/* *defined is 0 when every edge joins nodes of equal degree. */
CN_API cn_status cn_assortativity(const cn_graph* graph, double* out, int* defined);
CN_API cn_status cn_louvain(const cn_graph* graph, uint64_t seed, uint32_t* labels, size_t* communities,
                            double* modularity);
CN_API cn_status cn_modularity(const cn_graph* graph, const uint32_t* labels, double* out);

/* ---- roles and resilience ------------------------------------------ */

/* Default thresholds; betweenness is exact up to 5000 nodes. */
CN_API cn_status cn_classify_roles(const cn_graph* graph, uint64_t seed, int* roles);
/* sequences is contributors x length, row major, role codes; -1 marks absence. */
CN_API cn_status cn_transition_matrix(const int* sequences, size_t contributors, size_t length,
                                      double probabilities[CN_ROLE_COUNT * CN_ROLE_COUNT],
                                      int row_supported[CN_ROLE_COUNT]);
CN_API cn_status cn_remove_by_role(const cn_graph* graph, const int* roles, int role, size_t count, size_t trials,
                                   uint64_t seed, double* mean_impact, double* sd_impact);

/* ---- time series and statistics ------------------------------------ */

/* Writes up to capacity burst indices; *count is the total found. */
CN_API cn_status cn_detect_bursts(const double* values, size_t n, double theta, size_t* indices, size_t capacity,
                                  size_t* count);
CN_API cn_status cn_pearson(const double* x, const double* y, size_t n, double* r, double* p);
CN_API cn_status cn_gini(const double* values, size_t n, double* out);
/* bootstrap = 0 skips the goodness-of-fit p (returned as NaN). */
CN_API cn_status cn_power_law_fit(const double* values, size_t n, uint64_t seed, size_t bootstrap, double* alpha,
                                  double* x_min, double* p);
CN_API cn_status cn_mann_whitney(const double* a, size_t na, const double* b, size_t nb, double* u, double* p);

/* ---- neural --------------------------------------------------------- */

/* Trains the role GCN on the graph's own features; metrics on the test split. */
CN_API cn_status cn_gcn_train(const cn_graph* graph, const int* labels, uint64_t seed, size_t epochs,
                              double* accuracy, double* macro_f1);

#ifdef __cplusplus
}
#endif

#endif /* COLLABNET_COLLABNET_H */
