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

// Acceptance checks. One line per criterion:
//   criterion <n> PASS|FAIL  <measured values>
// Exit status is the number of failing criteria.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../unit/fixtures.hpp"
#include "../unit/oracles.hpp"
#include "collabnet/centrality.hpp"
#include "collabnet/cohesion.hpp"
#include "collabnet/config.hpp"
#include "collabnet/neural.hpp"
#include "collabnet/parallel.hpp"
#include "collabnet/pipeline.hpp"
#include "collabnet/resilience.hpp"
#include "collabnet/rng.hpp"
#include "collabnet/roles.hpp"
#include "collabnet/stats.hpp"
#include "collabnet/synth.hpp"
#include "collabnet/temporal.hpp"

using namespace collabnet;
namespace fs = std::filesystem;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Detail {
 public:
  template <class T>
  Detail& add(const std::string& key, const T& v) {
    if (!out_.str().empty()) out_ << ' ';
    out_ << key << '=' << v;
    return *this;
  }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int prec = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, v);
  return buf;
}

struct Options {
  std::string config;
  std::string work;
};

// ---- 1: centralities against dense and enumerating oracles ----------------

Outcome centrality_oracles() {
  const auto t0 = Clock::now();
  double pr_worst = 0, bt_worst = 0, ev_worst = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    CounterRng rng(seed, 77);
    const std::size_t n = 20 + rng.uniform_index(181);  // 20..200
    const double p = (1.5 + 3.0 * rng.uniform()) / static_cast<double>(n);
    auto g = fixtures::random_graph(n, p, seed);

    centrality::PageRankOptions po;
    po.eps = 1e-12;
    po.max_iter = 5000;
    const auto pr = centrality::pagerank(g, po).values;
    const auto pr_ref = oracles::pagerank_dense(g, 0.85);
    for (std::size_t i = 0; i < n; ++i) pr_worst = std::max(pr_worst, std::abs(pr[i] - pr_ref[i]));

    const auto bt = centrality::betweenness_exact(g).values;
    const auto bt_ref = oracles::betweenness_enumerate(g, false);
    for (std::size_t i = 0; i < n; ++i)
      bt_worst = std::max(bt_worst, std::abs(bt[i] - bt_ref[i]) / std::max(1.0, bt_ref[i]));

    const auto ev = centrality::eigenvector_centrality(g, {1e-13, 100000}).values;
    auto ev_ref = oracles::eigenvector_dense(g);
    // align sign and norm before comparing
    const double dot = std::inner_product(ev.begin(), ev.end(), ev_ref.begin(), 0.0);
    const double nrm = std::sqrt(std::inner_product(ev.begin(), ev.end(), ev.begin(), 0.0));
    const double nrm_ref = std::sqrt(std::inner_product(ev_ref.begin(), ev_ref.end(), ev_ref.begin(), 0.0));
    const double s = (dot < 0 ? -1.0 : 1.0) * (nrm_ref > 0 ? nrm / nrm_ref : 1.0);
    for (std::size_t i = 0; i < n; ++i) ev_worst = std::max(ev_worst, std::abs(ev[i] - s * ev_ref[i]));
  }
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = pr_worst <= 1e-6 && bt_worst <= 1e-9 && ev_worst <= 1e-6 && secs < 60;
  o.detail = Detail()
                 .add("graphs", 50)
                 .add("pagerank_linf", fmt(pr_worst))
                 .add("betweenness_rel", fmt(bt_worst))
                 .add("eigenvector_linf", fmt(ev_worst))
                 .add("seconds", fmt(secs, 3))
                 .str();
  return o;
}

// ---- 2: pagerank mass and floor --------------------------------------------

Outcome pagerank_contract() {
  std::size_t graphs = 0;
  double worst_sum = 0, worst_floor = 0;  // floor: largest amount below (1-d)/N
  auto check = [&](const graph::TemporalGraph& g) {
    const auto pr = centrality::pagerank(g).values;
    const double n = static_cast<double>(g.node_count());
    const double sum = std::accumulate(pr.begin(), pr.end(), 0.0);
    worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
    for (double v : pr) worst_floor = std::max(worst_floor, 0.15 / n - v);
    ++graphs;
  };
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    CounterRng rng(seed, 77);
    const std::size_t n = 20 + rng.uniform_index(181);
    check(fixtures::random_graph(n, (1.5 + 3.0 * rng.uniform()) / static_cast<double>(n), seed, 4));
  }
  for (std::uint64_t seed = 1; seed <= 10; ++seed) check(synth::gen_preferential_attachment(500, 3, seed).graph);
  for (std::uint64_t seed = 1; seed <= 10; ++seed)
    check(synth::gen_planted_partition({30, 30}, 0.3, 0.01, seed).graph);
  check(fixtures::star(10));
  check(fixtures::path(7));
  check(fixtures::make_graph(5, std::vector<graph::WeightedEdge>{{0, 1, 1.0}}));
  Outcome o;
  o.pass = worst_sum <= 1e-9 && worst_floor <= 0.0;
  o.detail = Detail()
                 .add("graphs", graphs)
                 .add("max_abs_sum_err", fmt(worst_sum))
                 .add("max_below_floor", fmt(std::max(0.0, worst_floor)))
                 .str();
  return o;
}

// ---- 3: sampled betweenness rank agreement -----------------------------------

Outcome sampled_betweenness() {
  auto g = synth::gen_preferential_attachment(300, 3, 1).graph;
  const auto exact = centrality::betweenness_exact(g).values;
  const auto sampled = centrality::betweenness_sampled(g, 100, 1).values;
  const double rho = oracles::spearman(exact, sampled);
  return {rho >= 0.9, Detail().add("spearman", fmt(rho)).add("sources", 100).str()};
}

// ---- 4: louvain on a planted partition -----------------------------------

Outcome community_recovery() {
  double worst_ari = 1.0, worst_q = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto s = synth::gen_planted_partition({30, 30}, 0.3, 0.01, seed);
    const auto part = cohesion::louvain(s.graph, seed);
    worst_ari = std::min(worst_ari, oracles::adjusted_rand(part.community, s.labels));
    worst_q = std::max(worst_q, std::abs(part.modularity - oracles::modularity_direct(s.graph, part.community)));
  }
  Outcome o;
  o.pass = worst_ari >= 0.9 && worst_q <= 1e-12;
  o.detail = Detail().add("seeds", 10).add("min_ari", fmt(worst_ari)).add("max_q_err", fmt(worst_q)).str();
  return o;
}

// ---- 5: bursts against the planted registry --------------------------------

Outcome burst_detection() {
  auto corpus = synth::gen_burst_corpus(1000, 12, 0.2, 4.0, 5);
  std::set<std::pair<std::size_t, std::size_t>> planted, found;
  for (const auto& b : corpus.registry) planted.insert({b.contributor, b.quarter});
  for (std::size_t c = 0; c < corpus.series.size(); ++c)
    for (const auto& e : temporal::detect_bursts(corpus.series[c], 2.0).events) found.insert({c, e.index});
  std::size_t hits = 0;
  for (const auto& f : found) hits += planted.count(f);
  const double recall = planted.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(planted.size());
  const double precision = found.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(found.size());

  temporal::ActivitySeries boundary;
  boundary.values = {1, 1, 1, 10, 1};
  for (int i = 0; i < 5; ++i) boundary.windows.push_back("w" + std::to_string(i));
  const bool boundary_ok = temporal::detect_bursts(boundary, 2.0).events.empty();

  Outcome o;
  o.pass = recall >= 0.9 && precision >= 0.7 && boundary_ok;
  o.detail = Detail()
                 .add("recall", fmt(recall))
                 .add("precision", fmt(precision))
                 .add("planted", planted.size())
                 .add("detected", found.size())
                 .add("boundary_no_burst", boundary_ok ? "yes" : "no")
                 .str();
  return o;
}

// ---- 6: regression on a planted-coefficient corpus --------------------------

Outcome regression_recovery() {
  const std::array<double, ingest::kActionCount> betas{0.58, 0.43, 0.38, 0, 0, 0, 0, 0};
  synth::ActionCorpusOptions opt;
  opt.target_r2 = 0.74;
  auto corpus = synth::gen_action_corpus(10000, betas, 0.0, 6, opt);
  std::vector<std::vector<double>> cols(ingest::kActionCount);
  for (const auto& row : corpus.counts)
    for (std::size_t j = 0; j < ingest::kActionCount; ++j) cols[j].push_back(row[j]);
  const auto fit = stats::ols_multiple(cols, corpus.target);
  double beta_err = 0;
  for (std::size_t j = 0; j < ingest::kActionCount; ++j) beta_err = std::max(beta_err, std::abs(fit.beta[j] - betas[j]));
  const double r2_err = std::abs(fit.r2 - corpus.realized_r2);

  // Orthogonal design: Gram-Schmidt on centred random columns.
  CounterRng rng(6, 3);
  const std::size_t n = 500, k = 4;
  std::vector<std::vector<double>> q(k, std::vector<double>(n));
  for (auto& c : q) {
    for (auto& v : c) v = rng.normal();
    const double m = std::accumulate(c.begin(), c.end(), 0.0) / n;
    for (auto& v : c) v -= m;
  }
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < a; ++b) {
      const double d = std::inner_product(q[a].begin(), q[a].end(), q[b].begin(), 0.0) /
                       std::inner_product(q[b].begin(), q[b].end(), q[b].begin(), 0.0);
      for (std::size_t i = 0; i < n; ++i) q[a][i] -= d * q[b][i];
    }
  }
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = q[0][i] - 0.5 * q[2][i] + rng.normal();
  const auto ortho = stats::ols_multiple(q, y);
  double vif_err = 0;
  for (double v : ortho.vif) vif_err = std::max(vif_err, std::abs(v - 1.0));

  Outcome o;
  o.pass = beta_err <= 0.02 && r2_err <= 0.05 && vif_err <= 1e-9;
  o.detail = Detail()
                 .add("max_beta_err", fmt(beta_err))
                 .add("r2", fmt(fit.r2))
                 .add("planted_r2", fmt(corpus.realized_r2))
                 .add("max_vif_err", fmt(vif_err))
                 .str();
  return o;
}

// ---- 7: power law and gini -------------------------------------------------

Outcome power_law_and_gini() {
  CounterRng rng(7, 1);
  std::vector<double> pareto(5000), expo(5000);
  for (auto& x : pareto) x = rng.pareto(2.5, 1.0);
  for (auto& x : expo) x = rng.exponential(1.0);
  stats::PowerLawOptions opt;
  opt.bootstrap = 200;
  const auto fp = stats::fit_power_law(pareto, 7, opt);
  const auto fe = stats::fit_power_law(expo, 7, opt);

  const double g_uniform = stats::gini(std::vector<double>(1000, 3.7)).value();
  std::vector<double> x(1000);
  for (auto& v : x) v = rng.exponential(0.5);
  const double g = stats::gini(x).value();
  double scale_err = 0;
  for (double c : {0.001, 0.3, 7.0, 12345.0}) {
    std::vector<double> cx(x);
    for (auto& v : cx) v *= c;
    scale_err = std::max(scale_err, std::abs(stats::gini(cx).value() - g));
  }
  Outcome o;
  o.pass = fp.alpha >= 2.4 && fp.alpha <= 2.6 && fe.p < 0.1 && g_uniform == 0.0 && scale_err <= 1e-12;
  o.detail = Detail()
                 .add("alpha", fmt(fp.alpha))
                 .add("exponential_p", fmt(fe.p))
                 .add("gini_uniform", fmt(g_uniform))
                 .add("gini_scale_err", fmt(scale_err))
                 .str();
  return o;
}

// ---- 8: Core vs Regular removal impact --------------------------------------

Outcome resilience_ratio() {
  std::size_t holds = 0;
  std::vector<std::string> ratios;
  double lo = 1e300, hi = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto g = synth::gen_preferential_attachment(2000, 3, seed).graph;
    const auto a = roles::classify_roles(g.names(), centrality::degree_centrality(g), centrality::pagerank(g),
                                         centrality::betweenness(g, {}, seed), cohesion::local_clustering(g))
                       .assignments;
    const auto core = resilience::remove_by_role(g, a, roles::Role::kCore, 20, 30, seed);
    const auto regular = resilience::remove_by_role(g, a, roles::Role::kRegular, 20, 30, seed);
    const double r = regular.mean_impact > 0 ? core.mean_impact / regular.mean_impact : INFINITY;
    lo = std::min(lo, r);
    hi = std::max(hi, r);
    holds += r >= 3.0;
  }
  return {holds >= 9, Detail()
                          .add("seeds_holding", std::to_string(holds) + "/10")
                          .add("min_ratio", fmt(lo))
                          .add("max_ratio", fmt(hi))
                          .str()};
}

// ---- 9: neural gradients, equivariance and fixtures --------------------------

template <class Loss>
double max_relative_error(VectorXd& params, const VectorXd& analytic, Loss loss) {
  const double h = 1e-5;
  double worst = 0.0;
  for (Eigen::Index k = 0; k < params.size(); ++k) {
    const double keep = params(k);
    params(k) = keep + h;
    const double up = loss();
    params(k) = keep - h;
    const double down = loss();
    params(k) = keep;
    const double numeric = (up - down) / (2 * h);
    const double denom = std::max(1e-6, std::abs(numeric) + std::abs(analytic(k)));
    worst = std::max(worst, std::abs(numeric - analytic(k)) / denom);
  }
  return worst;
}

MatrixXd random_matrix(Eigen::Index r, Eigen::Index c, std::uint64_t seed) {
  CounterRng rng(seed, 5);
  MatrixXd m(r, c);
  for (Eigen::Index j = 0; j < c; ++j)
    for (Eigen::Index i = 0; i < r; ++i) m(i, j) = rng.normal();
  return m;
}

Outcome neural_checks() {
  double lstm_err = 0, gcn_err = 0;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    auto p = neural::LstmParams::init(3, seed);
    p.flat *= 2.0;
    const MatrixXd x = random_matrix(4, 5, seed);
    const VectorXd y = random_matrix(4, 1, seed + 10).col(0);
    VectorXd grad;
    neural::lstm_loss(p, x, y, &grad);
    lstm_err = std::max(lstm_err, max_relative_error(p.flat, grad, [&] { return neural::lstm_loss(p, x, y); }));
  }
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    auto g = fixtures::random_graph(10, 0.3, seed + 3);
    const auto adj = neural::normalized_adjacency(g);
    neural::GcnConfig cfg;
    cfg.hidden = 4;
    cfg.classes = 3;
    auto p = neural::GcnParams::init(cfg, seed);
    const MatrixXd x = random_matrix(10, 3, seed + 5);
    std::vector<int> labels(10);
    for (int i = 0; i < 10; ++i) labels[i] = i % 3;
    const std::vector<NodeId> nodes{0, 2, 3, 5, 7, 9};
    CounterRng rng(seed, 1);
    MatrixXd mask(10, 4);
    for (Eigen::Index j = 0; j < 4; ++j)
      for (Eigen::Index i = 0; i < 10; ++i) mask(i, j) = rng.bernoulli(0.3) ? 0.0 : 1.0 / 0.7;
    for (const MatrixXd* m : {static_cast<const MatrixXd*>(nullptr), static_cast<const MatrixXd*>(&mask)}) {
      VectorXd grad;
      neural::gcn_loss(p, adj, x, labels, nodes, m, &grad);
      gcn_err = std::max(gcn_err, max_relative_error(p.flat, grad, [&] {
                           return neural::gcn_loss(p, adj, x, labels, nodes, m);
                         }));
    }
  }

  bool equivariant = true;
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    auto g = fixtures::random_graph(40, 0.1, seed);
    CounterRng rng(seed, 9);
    std::vector<NodeId> perm(40);
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(std::span<NodeId>(perm));
    std::vector<std::pair<NodeId, NodeId>> moved;
    for (const auto& e : g.edges()) moved.push_back({perm[e.u], perm[e.v]});
    auto h = fixtures::unweighted(40, moved);
    const MatrixXd x = random_matrix(40, 3, seed);
    MatrixXd px(40, 3);
    for (NodeId i = 0; i < 40; ++i) px.row(perm[i]) = x.row(i);
    neural::GcnConfig cfg;
    cfg.hidden = 8;
    auto p = neural::GcnParams::init(cfg, seed);
    const MatrixXd a = neural::gcn_forward(p, neural::normalized_adjacency(g), x);
    const MatrixXd b = neural::gcn_forward(p, neural::normalized_adjacency(h), px);
    for (NodeId i = 0; i < 40; ++i) equivariant &= b.row(perm[i]) == a.row(i);
  }

  // Triangles (class 0) and 5-leaf stars (hub 1, leaves 2) as separate components.
  std::vector<std::pair<NodeId, NodeId>> e;
  std::vector<int> labels;
  NodeId next = 0;
  for (int t = 0; t < 40; ++t, next += 3) {
    e.insert(e.end(), {{next, next + 1}, {next + 1, next + 2}, {next, next + 2}});
    labels.insert(labels.end(), {0, 0, 0});
  }
  for (int s = 0; s < 20; ++s, next += 6) {
    labels.push_back(1);
    for (NodeId l = 1; l <= 5; ++l) {
      e.push_back({next, next + l});
      labels.push_back(2);
    }
  }
  auto sep = fixtures::unweighted(next, e);
  neural::GcnConfig sc;
  sc.hidden = 16;
  sc.classes = 3;
  sc.epochs = 100;
  const double sep_acc = neural::gcn_train(sc, neural::normalized_adjacency(sep), neural::gcn_features(sep), labels, 2)
                             .report.metrics["accuracy"]
                             .get<double>();

  auto ba = synth::gen_preferential_attachment(1000, 3, 6).graph;
  CounterRng rng(6, 2);
  std::vector<int> shuffled(1000);
  for (auto& y : shuffled) y = static_cast<int>(rng.uniform_index(5));
  const double shuf_acc = neural::gcn_train(neural::GcnConfig{}, neural::normalized_adjacency(ba),
                                            neural::gcn_features(ba), shuffled, 6)
                              .report.metrics["accuracy"]
                              .get<double>();

  Outcome o;
  o.pass = lstm_err <= 1e-4 && gcn_err <= 1e-4 && equivariant && sep_acc > 0.95 && std::abs(shuf_acc - 0.2) <= 0.1;
  o.detail = Detail()
                 .add("lstm_grad_rel", fmt(lstm_err))
                 .add("gcn_grad_rel", fmt(gcn_err))
                 .add("equivariant", equivariant ? "yes" : "no")
                 .add("separable_acc", fmt(sep_acc))
                 .add("shuffled_acc", fmt(shuf_acc))
                 .str();
  return o;
}

// ---- 10: transition matrix recovery -----------------------------------------

Outcome transition_recovery() {
  const synth::RoleMatrix truth = {{{0.70, 0.10, 0.10, 0.10, 0.00},
                                    {0.05, 0.60, 0.15, 0.15, 0.05},
                                    {0.05, 0.10, 0.55, 0.25, 0.05},
                                    {0.02, 0.03, 0.05, 0.80, 0.10},
                                    {0.00, 0.02, 0.03, 0.25, 0.70}}};
  const auto m = roles::transition_matrix(synth::gen_markov_roles(truth, 1000, 11, 10));
  double worst = 0, row_err = 0;
  for (std::size_t a = 0; a < roles::kRoleCount; ++a) {
    if (!m.row_supported[a]) continue;
    double row = 0;
    for (std::size_t b = 0; b < roles::kRoleCount; ++b) {
      worst = std::max(worst, std::abs(m.p[a][b] - truth[a][b]));
      row += m.p[a][b];
    }
    row_err = std::max(row_err, std::abs(row - 1.0));
  }
  return {m.transitions == 10000 && worst <= 0.03 && row_err <= 1e-9,
          Detail()
              .add("transitions", m.transitions)
              .add("linf", fmt(worst))
              .add("max_row_err", fmt(row_err))
              .str()};
}

// ---- 11 and 12: full pipeline -------------------------------------------------

std::map<std::string, std::string> snapshot(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    const auto ext = e.path().extension();
    if (!e.is_regular_file() || (ext != ".csv" && ext != ".json" && ext != ".jsonl")) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    files[fs::relative(e.path(), root).string()] = s.str();
  }
  return files;
}

struct PipelineRun {
  int exit_code = -1;
  double seconds = 0;
  std::map<std::string, std::string> files;
};

PipelineRun run_with(const Options& opt, const std::string& name, int threads) {
  auto loaded = config::load_config(opt.config);
  auto cfg = loaded.config;
  const fs::path out = fs::path(opt.work) / name;
  fs::remove_all(out);
  cfg.out = out.string();
  cfg.threads = threads;
  PipelineRun r;
  const auto t0 = Clock::now();
  r.exit_code = loaded.issues.empty() ? pipeline::run_pipeline(cfg).exit_code : static_cast<int>(ErrorCode::kConfig);
  r.seconds = seconds_since(t0);
  r.files = snapshot(out);
  return r;
}

std::string first_difference(const PipelineRun& a, const PipelineRun& b) {
  for (const auto& [name, body] : a.files) {
    auto it = b.files.find(name);
    if (it == b.files.end()) return name + "(missing)";
    if (it->second != body) return name;
  }
  if (a.files.size() != b.files.size()) return "file-count";
  return "";
}

Outcome determinism(const Options& opt) {
  const auto a = run_with(opt, "t1-a", 1);
  const auto b = run_with(opt, "t1-b", 1);
  const auto c = run_with(opt, "t8", 8);
  const std::string d1 = first_difference(a, b), d2 = first_difference(a, c);
  Outcome o;
  o.pass = a.exit_code == 0 && b.exit_code == 0 && c.exit_code == 0 && d1.empty() && d2.empty() && !a.files.empty();
  Detail d;
  d.add("files", a.files.size()).add("exit", std::to_string(a.exit_code) + "," + std::to_string(b.exit_code) + "," +
                                                 std::to_string(c.exit_code));
  d.add("repeat_diff", d1.empty() ? "none" : d1).add("threads_1v8_diff", d2.empty() ? "none" : d2);
  o.detail = d.str();
  return o;
}

Outcome throughput(const Options& opt) {
  const auto run = run_with(opt, "t4", 4);
  auto g = synth::gen_preferential_attachment(2000, 3, 12).graph;
  set_thread_count(4);
  const auto t0 = Clock::now();
  const auto bt = centrality::betweenness_exact(g);
  const double bt_secs = seconds_since(t0);
  set_thread_count(1);
  Outcome o;
  o.pass = run.exit_code == 0 && run.seconds < 300 && bt_secs < 60 && bt.values.size() == 2000;
  o.detail = Detail()
                 .add("pipeline_seconds", fmt(run.seconds, 3))
                 .add("betweenness_2000_seconds", fmt(bt_secs, 3))
                 .add("threads", 4)
                 .str();
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  Options opt;
  std::vector<int> only;
  app.add_option("--config", opt.config, "bundled synthetic config")->required()->check(CLI::ExistingFile);
  app.add_option("--work", opt.work, "scratch directory for pipeline runs")->required();
  app.add_option("--only", only, "criterion numbers to run");
  CLI11_PARSE(app, argc, argv);
  fs::create_directories(opt.work);

  const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
      {1, centrality_oracles},
      {2, pagerank_contract},
      {3, sampled_betweenness},
      {4, community_recovery},
      {5, burst_detection},
      {6, regression_recovery},
      {7, power_law_and_gini},
      {8, resilience_ratio},
      {9, neural_checks},
      {10, transition_recovery},
      {11, [&] { return determinism(opt); }},
      {12, [&] { return throughput(opt); }},
  };

  int failed = 0;
  for (const auto& [id, fn] : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("criterion %2d %s  %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  return failed;
}
