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

#include "collabnet/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>

#include "collabnet/centrality.hpp"
#include "collabnet/cohesion.hpp"
#include "collabnet/ingest.hpp"
#include "collabnet/neural.hpp"
#include "collabnet/parallel.hpp"
#include "collabnet/plot.hpp"
#include "collabnet/resilience.hpp"
#include "collabnet/rng.hpp"
#include "collabnet/stats.hpp"
#include "collabnet/temporal.hpp"

namespace collabnet::pipeline {

namespace fs = std::filesystem;
using centrality::Metric;
using centrality::MetricVector;
using nlohmann::json;

namespace {

constexpr Metric kMetrics[] = {Metric::kDegree, Metric::kPageRank, Metric::kBetweenness, Metric::kCloseness,
                               Metric::kEigenvector};

json real_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void write_json(const json& j, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  return out;
}

ingest::Timestamp quarter_start(const ingest::Quarter& q) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02d-01T00:00:00Z", q.year, 3 * (q.quarter - 1) + 1);
  return *ingest::parse_rfc3339(buf);
}

struct WindowMetrics {
  std::map<Metric, MetricVector> by_metric;
  MetricVector clustering;
};

struct Context {
  const config::PipelineConfig& cfg;
  fs::path out;
  fs::path events;
  bool synthetic = false;
  json planted;  // synth manifest
  ingest::CleanDataset dataset;
  std::vector<graph::TemporalGraph> graphs;
  std::vector<WindowMetrics> metrics;
  std::vector<cohesion::CohesionSummary> cohesion;
  std::vector<temporal::ActivitySeries> series;
  std::vector<std::vector<roles::RoleAssignment>> roles;
  json headline = json::object();
};

std::vector<std::string> window_labels(const Context& c) {
  std::vector<std::string> labels;
  for (const auto& w : c.dataset.windows) labels.push_back(w.label());
  return labels;
}

// ------------------------------------------------------------------ stages

json stage_synth(Context& c, std::uint64_t seed) {
  auto corpus = synth::gen_event_corpus(c.cfg.corpus, seed);
  c.events = c.out / "synth" / "events.csv";
  ingest::write_events_csv(corpus.records, c.events);
  synth::write_manifest(corpus.manifest, c.out / "synth" / "manifest.json");
  c.synthetic = true;
  c.planted = corpus.manifest;
  return {{"records", corpus.records.size()},
          {"contributors", c.cfg.corpus.contributors},
          {"quarters", c.cfg.corpus.quarters},
          {"planted_bursts", corpus.planted_bursts.size()},
          {"events", "events.csv"}};
}

json stage_ingest(Context& c, std::uint64_t) {
  const auto& cfg = c.cfg;
  ingest::PrepareOptions opt;
  opt.parse.malformed_cap = cfg.malformed_cap;
  if (!cfg.window_begin.empty()) opt.parse.range_begin = quarter_start(*ingest::Quarter::parse(cfg.window_begin));
  if (!cfg.window_end.empty())
    opt.parse.range_end = quarter_start(ingest::Quarter::from_index(ingest::Quarter::parse(cfg.window_end)->index() + 1));
  if (!cfg.email_index.empty()) opt.email_index = ingest::read_email_index(config::resolve_path(cfg, cfg.email_index));
  opt.similarity_threshold = cfg.similarity_threshold;
  opt.bots.activity_rate_cap = cfg.bot_rate_cap;
  opt.iqr_k = cfg.iqr_k;
  const auto format = *ingest::parse_format(cfg.format);
  const auto parsed = ingest::parse_events(c.events, c.synthetic ? ingest::Format::kCsv : format, opt.parse);
  c.dataset = ingest::prepare_dataset(parsed, opt);
  require(!c.dataset.windows.empty(), ErrorCode::kInvalidArgument, "no records left after cleaning");
  ingest::write_clean_jsonl(c.dataset, c.out / "ingest" / "clean.jsonl");
  ingest::write_provenance_json(c.dataset, c.out / "ingest" / "provenance.json");
  const auto& p = c.dataset.provenance;
  return {{"input_rows", p.input_rows},
          {"malformed_rows", p.malformed_rows},
          {"merged_aliases", p.merged_aliases},
          {"bot_contributors", p.bot_contributors},
          {"outlier_contributors", p.outlier_contributors},
          {"kept_records", p.kept_records},
          {"retention_ratio", c.dataset.retention_ratio},
          {"contributors", c.dataset.contributors().size()},
          {"windows", window_labels(c)}};
}

json stage_graph(Context& c, std::uint64_t) {
  graph::WeightPolicy policy = c.cfg.weights;
  policy.dampening = c.cfg.dampening == "log1p" ? graph::Dampening::kLog1p : graph::Dampening::kRaw;
  const std::size_t n = c.dataset.windows.size();
  c.graphs.assign(n, {});
  parallel_for(0, n, [&](std::size_t w) { c.graphs[w] = graph::build_window_graph(c.dataset, w, policy); });
  json windows = json::array();
  for (const auto& g : c.graphs) {
    graph::write_edge_list(g, c.out / "graph" / ("edges-" + g.window() + ".txt"),
                           c.out / "graph" / ("nodes-" + g.window() + ".tsv"));
    windows.push_back({{"window", g.window()},
                       {"nodes", g.node_count()},
                       {"edges", g.edge_count()},
                       {"lcc", graph::largest_connected_component(g).size}});
  }
  return {{"dampening", c.cfg.dampening}, {"decay", c.cfg.weights.decay}, {"windows", windows}};
}

json stage_metrics(Context& c, std::uint64_t seed) {
  const auto& cfg = c.cfg;
  const std::size_t n = c.graphs.size();
  c.metrics.assign(n, {});
  parallel_for(0, n, [&](std::size_t w) {
    const auto& g = c.graphs[w];
    auto& m = c.metrics[w].by_metric;
    m[Metric::kDegree] = centrality::degree_centrality(g);
    m[Metric::kPageRank] = centrality::pagerank(g, {cfg.damping, cfg.pagerank_eps, 100});
    centrality::BetweennessOptions bo{cfg.betweenness_weighted, cfg.betweenness_exact_cap};
    m[Metric::kBetweenness] =
        g.node_count() <= cfg.betweenness_exact_cap
            ? centrality::betweenness_exact(g, bo)
            : centrality::betweenness_sampled(g, std::min(cfg.betweenness_sources, g.node_count()),
                                              derive_seed(seed, g.window()), cfg.betweenness_weighted);
    m[Metric::kCloseness] = centrality::closeness(g, false);
    m[Metric::kEigenvector] = centrality::eigenvector_centrality(g);
    c.metrics[w].clustering = cohesion::local_clustering(g);
  });
  json manifest = json::array();
  for (std::size_t w = 0; w < n; ++w) {
    const auto& label = c.graphs[w].window();
    for (auto metric : kMetrics) {
      const auto& mv = c.metrics[w].by_metric.at(metric);
      const std::string file = std::string(centrality::metric_name(metric)) + "-" + label + ".tsv";
      centrality::write_metric_tsv(mv, c.out / "metrics" / file);
      manifest.push_back({{"window", label},
                          {"metric", centrality::metric_name(metric)},
                          {"file", file},
                          {"exact", mv.exact},
                          {"converged", mv.converged},
                          {"iterations", mv.iterations},
                          {"lcc_only", mv.lcc_only},
                          {"params", mv.params}});
    }
  }
  write_json({{"seed", seed}, {"entries", manifest}}, c.out / "metrics" / "metrics-manifest.json");

  const auto& last = c.graphs.back();
  const auto& pr = c.metrics.back().by_metric.at(Metric::kPageRank);
  json top = json::array();
  for (NodeId i : centrality::top_k(pr, cfg.top_k)) top.push_back({{"contributor", last.name(i)}, {"pagerank", pr.values[i]}});
  auto g = stats::gini(pr.values);
  json mean_pr = json::array();
  for (std::size_t w = 0; w < n; ++w) {
    const auto& v = c.metrics[w].by_metric.at(Metric::kPageRank).values;
    double s = 0;
    for (double x : v) s += x;
    mean_pr.push_back(v.empty() ? json(nullptr) : json(s / static_cast<double>(v.size())));
  }
  c.headline["top_pagerank"] = {{"window", last.window()}, {"entries", top}};
  c.headline["pagerank_gini"] = g ? json(*g) : json(nullptr);
  return {{"windows", n}, {"top_pagerank", top}, {"mean_pagerank", mean_pr}, {"pagerank_gini", c.headline["pagerank_gini"]}};
}

json stage_cohesion(Context& c, std::uint64_t seed) {
  const std::size_t n = c.graphs.size();
  c.cohesion.assign(n, {});
  std::vector<cohesion::Partition> parts(n);
  parallel_for(0, n, [&](std::size_t w) {
    c.cohesion[w] = cohesion::cohesion_summary(c.graphs[w], derive_seed(seed, c.graphs[w].window()), &parts[w]);
  });
  {
    auto out = open_out(c.out / "cohesion" / "cohesion.csv");
    cohesion::write_cohesion_header(out);
    for (const auto& s : c.cohesion) cohesion::write_cohesion_row(out, s);
  }
  for (std::size_t w = 0; w < n; ++w)
    cohesion::write_communities(c.graphs[w], parts[w], c.out / "cohesion" / ("communities-" + c.graphs[w].window() + ".tsv"));

  const double nan = std::numeric_limits<double>::quiet_NaN();
  const std::vector<std::pair<std::string, std::function<double(const cohesion::CohesionSummary&)>>> panels = {
      {"density", [](const auto& s) { return s.density; }},
      {"avg_clustering", [](const auto& s) { return s.avg_clustering; }},
      {"modularity", [](const auto& s) { return s.modularity; }},
      {"communities", [](const auto& s) { return static_cast<double>(s.community_count); }},
      {"transitivity", [](const auto& s) { return s.transitivity; }},
      {"assortativity", [nan](const auto& s) { return s.assortativity.value_or(nan); }},
  };
  const auto labels = window_labels(c);
  fs::create_directories(c.out / "cohesion" / "plots");
  auto trends = open_out(c.out / "cohesion" / "trends.csv");
  auto cps = open_out(c.out / "cohesion" / "changepoints.csv");
  trends << "metric,n,alpha,beta,r2,f,p\n";
  cps << "metric,window,index,delta\n";
  json trend_json = json::object();
  for (const auto& [name, get] : panels) {
    std::vector<double> y;
    for (const auto& s : c.cohesion) y.push_back(get(s));
    plot::write_svg({name + " by quarter", name, labels, {{name, y}}}, c.out / "cohesion" / "plots" / (name + ".svg"));
    std::vector<double> finite;
    for (double v : y)
      if (std::isfinite(v)) finite.push_back(v);
    if (finite.size() < 3) {
      trends << name << ',' << finite.size() << ",undefined,undefined,undefined,undefined,undefined\n";
      trend_json[name] = nullptr;
      continue;
    }
    const auto t = temporal::ols_trend(finite);
    trends << name << ',' << t.n << ',' << format_real(t.alpha) << ',' << format_real(t.beta) << ','
           << format_real(t.r2) << ',' << (t.f_defined ? format_real(t.f) : "undefined") << ','
           << (t.f_defined ? format_real(t.p) : "undefined") << '\n';
    trend_json[name] = {{"beta", t.beta}, {"r2", t.r2}, {"p", t.f_defined ? json(t.p) : json(nullptr)}};
    if (finite.size() != y.size()) continue;  // change points need the full series
    const auto cp = temporal::change_points(y, c.cfg.cp_window, c.cfg.cp_tau);
    for (std::size_t k = 0; k < cp.indices.size(); ++k) {
      const std::size_t t_idx = cp.indices[k];
      cps << name << ',' << labels[t_idx] << ',' << t_idx << ',' << format_real(cp.delta[t_idx - c.cfg.cp_window]) << '\n';
    }
  }
  c.headline["trends"] = trend_json;
  json rows = json::array();
  for (const auto& s : c.cohesion)
    rows.push_back({{"window", s.window},
                    {"density", s.density},
                    {"avg_clustering", s.avg_clustering},
                    {"transitivity", s.transitivity},
                    {"modularity", s.modularity},
                    {"communities", s.community_count},
                    {"assortativity", s.assortativity ? json(*s.assortativity) : json(nullptr)}});
  return {{"windows", rows}, {"trends", trend_json}};
}

json stage_bursts(Context& c, std::uint64_t) {
  c.series = temporal::activity_series(c.dataset);
  std::vector<temporal::BurstResult> results(c.series.size());
  parallel_for(0, c.series.size(), [&](std::size_t i) { results[i] = temporal::detect_bursts(c.series[i], c.cfg.theta); });
  {
    auto out = open_out(c.out / "bursts" / "bursts.csv");
    temporal::write_bursts_header(out);
    for (const auto& r : results) temporal::write_burst_rows(out, r);
  }
  std::size_t events = 0, bursty = 0;
  std::set<std::pair<std::string, std::string>> found;
  for (const auto& r : results) {
    events += r.events.size();
    bursty += !r.events.empty();
    for (const auto& e : r.events) found.insert({e.contributor, e.window});
  }
  json hist = json::object();
  for (auto [k, v] : temporal::burst_histogram(results)) hist[std::to_string(k)] = v;
  json summary = {{"theta", c.cfg.theta},
                  {"contributors", c.series.size()},
                  {"bursty_contributors", bursty},
                  {"events", events},
                  {"histogram", hist}};
  if (c.synthetic && c.planted.contains("planted_bursts")) {
    std::size_t hit = 0, planted = 0;
    for (const auto& p : c.planted["planted_bursts"]) {
      ++planted;
      hit += found.count({p.at("contributor").get<std::string>(), p.at("quarter").get<std::string>()});
    }
    summary["planted"] = planted;
    summary["recall"] = planted ? json(static_cast<double>(hit) / static_cast<double>(planted)) : json(nullptr);
    summary["precision"] = events ? json(static_cast<double>(hit) / static_cast<double>(events)) : json(nullptr);
  }
  return summary;
}

json stage_roles(Context& c, std::uint64_t) {
  const std::size_t n = c.graphs.size();
  c.roles.assign(n, {});
  std::vector<std::vector<std::string>> degenerate(n);
  parallel_for(0, n, [&](std::size_t w) {
    const auto& m = c.metrics[w].by_metric;
    auto r = roles::classify_roles(c.graphs[w].names(), m.at(Metric::kDegree), m.at(Metric::kPageRank),
                                   m.at(Metric::kBetweenness), c.metrics[w].clustering, c.cfg.thresholds);
    c.roles[w] = std::move(r.assignments);
    degenerate[w] = std::move(r.degenerate_metrics);
  });
  json windows = json::array();
  for (std::size_t w = 0; w < n; ++w) {
    roles::write_roles_csv(c.roles[w], c.out / "roles" / ("roles-" + c.graphs[w].window() + ".csv"));
    json shares = json::object();
    for (auto [role, share] : roles::role_distribution(c.roles[w])) shares[std::string(roles::role_name(role))] = share;
    windows.push_back({{"window", c.graphs[w].window()}, {"shares", shares}, {"degenerate_metrics", degenerate[w]}});
  }
  json summary = {{"windows", windows}};
  if (n >= 2) {
    try {
      const auto tm = roles::transition_matrix(c.roles);
      roles::write_transitions_csv(tm, c.out / "roles" / "transitions.csv");
      summary["transitions"] = tm.transitions;
    } catch (const Error& e) {
      summary["transitions_error"] = e.what();
    }
  }
  c.headline["role_shares"] = windows.back()["shares"];
  return summary;
}

json stage_neural(Context& c, std::uint64_t seed) {
  const auto& cfg = c.cfg;
  // LSTM on the most active contributors; ties go to the smaller id.
  std::vector<std::size_t> order(c.series.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> total(c.series.size(), 0.0);
  for (std::size_t i = 0; i < c.series.size(); ++i)
    for (double v : c.series[i].values) total[i] += v;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return total[a] > total[b]; });
  order.resize(std::min(order.size(), cfg.lstm_max_series));
  std::sort(order.begin(), order.end());
  std::vector<temporal::ActivitySeries> chosen;
  for (auto i : order) chosen.push_back(c.series[i]);
  json summary = json::object();
  const auto data = neural::lstm_dataset(chosen, cfg.lstm.window, cfg.lstm.holdout_fraction);
  if (data.x.rows() == 0) {
    summary["lstm"] = {{"skipped", "no series longer than the window"}, {"excluded_short", data.excluded_short}};
  } else {
    const auto lstm = neural::lstm_train(cfg.lstm, data, derive_seed(seed, "lstm"));
    neural::write_train_curve(lstm.report, c.out / "neural" / "train-lstm.csv");
    const json lc = {{"window", cfg.lstm.window},
                     {"hidden", cfg.lstm.hidden},
                     {"learning_rate", cfg.lstm.learning_rate},
                     {"batch", cfg.lstm.batch},
                     {"epochs", cfg.lstm.epochs},
                     {"holdout_fraction", cfg.lstm.holdout_fraction}};
    neural::write_checkpoint(c.out / "neural" / "lstm", "lstm", lstm.params.layout(), lstm.params.flat, lc);
    summary["lstm"] = lstm.report.metrics;
    summary["lstm"]["series"] = chosen.size();
    summary["lstm"]["final_loss"] = lstm.report.loss.back();
  }

  const auto& g = c.graphs.back();
  std::vector<int> labels;
  for (const auto& a : c.roles.back()) labels.push_back(static_cast<int>(a.role));
  const auto gcn = neural::gcn_train(cfg.gcn, neural::normalized_adjacency(g), neural::gcn_features(g), labels,
                                     derive_seed(seed, "gcn"));
  neural::write_train_curve(gcn.report, c.out / "neural" / "train-gcn.csv");
  const json gc = {{"features", cfg.gcn.features},   {"hidden", cfg.gcn.hidden},
                   {"classes", cfg.gcn.classes},     {"dropout", cfg.gcn.dropout},
                   {"learning_rate", cfg.gcn.learning_rate}, {"epochs", cfg.gcn.epochs},
                   {"window", g.window()}};
  neural::write_checkpoint(c.out / "neural" / "gcn", "gcn", gcn.params.layout(), gcn.params.flat, gc);
  summary["gcn"] = gcn.report.metrics;
  summary["gcn"]["window"] = g.window();
  summary["gcn"]["final_loss"] = gcn.report.loss.back();
  c.headline["gcn_macro_f1"] = gcn.report.metrics["macro_f1"];
  if (summary["lstm"].contains("mape")) c.headline["lstm_mape"] = summary["lstm"]["mape"];
  return summary;
}

json stage_stats(Context& c, std::uint64_t seed) {
  const auto& cfg = c.cfg;
  auto table = stats::action_totals(c.dataset);
  std::map<std::string, std::size_t> row_of;
  for (std::size_t i = 0; i < table.contributors.size(); ++i) row_of[table.contributors[i]] = i;
  // Per-contributor metric = mean over all windows, 0 in windows without activity.
  std::vector<std::pair<std::string, std::vector<double>>> metrics;
  const double windows = static_cast<double>(c.graphs.size());
  for (auto metric : kMetrics) {
    std::vector<double> v(table.contributors.size(), 0.0);
    for (std::size_t w = 0; w < c.graphs.size(); ++w) {
      const auto& values = c.metrics[w].by_metric.at(metric).values;
      for (NodeId i = 0; i < values.size(); ++i) v[row_of.at(c.graphs[w].name(i))] += values[i] / windows;
    }
    metrics.emplace_back(centrality::metric_name(metric), std::move(v));
  }
  if (cfg.log_transform) {
    for (auto& row : table.totals)
      for (double& x : row) x = std::log1p(x);
    for (auto& [name, v] : metrics)
      for (double& x : v) x = std::log1p(x);
  }
  const auto analysis = stats::action_influence_analysis(table, metrics, cfg.target, cfg.alpha);
  stats::write_correlations_csv(analysis.correlations, c.out / "stats" / "correlations.csv");
  json reg = analysis.regression ? stats::to_json(*analysis.regression) : json{{"error", analysis.regression_error}};
  reg["target"] = cfg.target;
  reg["log_transform"] = cfg.log_transform;
  reg["seed"] = seed;
  write_json(reg, c.out / "stats" / "regression.json");

  const auto& last = c.metrics.back().by_metric;
  stats::PowerLawOptions po;
  po.bootstrap = cfg.powerlaw_bootstrap;
  po.min_tail = cfg.powerlaw_min_tail;
  json pl = {{"seed", seed}, {"window", c.graphs.back().window()}};
  for (auto metric : {Metric::kDegree, Metric::kPageRank}) {
    const std::string name(centrality::metric_name(metric));
    std::vector<double> positive;
    for (double v : last.at(metric).values)
      if (v > 0) positive.push_back(v);
    try {
      pl[name] = stats::to_json(stats::fit_power_law(positive, derive_seed(seed, name), po));
    } catch (const Error& e) {
      pl[name] = {{"error", e.what()}};
    }
  }
  write_json(pl, c.out / "stats" / "powerlaw.json");

  json gini = json::object();
  for (auto metric : {Metric::kDegree, Metric::kPageRank}) {
    auto g = stats::gini(last.at(metric).values);
    gini[std::string(centrality::metric_name(metric))] = g ? json(*g) : json(nullptr);
  }
  json summary = {{"comparisons", analysis.correlations.comparisons},
                  {"threshold", analysis.correlations.threshold},
                  {"significant", std::count_if(analysis.correlations.entries.begin(), analysis.correlations.entries.end(),
                                                [](const auto& e) { return e.significant; })},
                  {"gini", gini}};
  if (analysis.regression) {
    summary["r2"] = analysis.regression->r2;
    summary["adj_r2"] = analysis.regression->adj_r2;
  }

  // PageRank of Core against Regular contributors in the final window.
  std::vector<double> core, regular;
  const auto& pr = last.at(Metric::kPageRank).values;
  for (std::size_t i = 0; i < c.roles.back().size(); ++i) {
    if (c.roles.back()[i].role == roles::Role::kCore) core.push_back(pr[i]);
    if (c.roles.back()[i].role == roles::Role::kRegular) regular.push_back(pr[i]);
  }
  if (!core.empty() && !regular.empty()) {
    const auto mw = stats::mann_whitney_u(core, regular);
    summary["core_vs_regular_pagerank"] = {{"u", mw.u}, {"z", real_or_null(mw.z)}, {"p", mw.p}, {"exact", mw.exact}};
  }
  c.headline["gini"] = gini;
  return summary;
}

json stage_resilience(Context& c, std::uint64_t seed) {
  const auto& cfg = c.cfg;
  const auto& g = c.graphs.back();
  const auto& a = c.roles.back();
  std::vector<resilience::RemovalExperiment> experiments;
  json skipped = json::array();
  for (std::size_t r = 0; r < roles::kRoleCount; ++r) {
    const auto role = static_cast<roles::Role>(r);
    const auto holders = static_cast<std::size_t>(
        std::count_if(a.begin(), a.end(), [&](const roles::RoleAssignment& x) { return x.role == role; }));
    if (holders < cfg.removal_count) {
      skipped.push_back({{"role", roles::role_name(role)}, {"holders", holders}});
      continue;
    }
    experiments.push_back(resilience::remove_by_role(g, a, role, cfg.removal_count, cfg.removal_trials,
                                                     derive_seed(seed, roles::role_name(role))));
  }
  resilience::write_resilience_csv(experiments, c.out / "resilience" / "resilience.csv");

  auto attack = resilience::removal_curve(g, resilience::Ordering::kByDegreeDesc, cfg.curve_steps, seed);
  auto random = resilience::removal_curve(g, resilience::Ordering::kRandom, cfg.curve_steps, seed);
  {
    auto out = open_out(c.out / "resilience" / "curves.csv");
    out << "ordering,removed,removed_fraction,lcc,lcc_fraction\n";
    for (const auto* curve : {&attack, &random})
      for (const auto& p : *curve)
        out << (curve == &attack ? "by_degree_desc" : "random") << ',' << p.removed << ','
            << format_real(p.removed_fraction) << ',' << p.lcc << ',' << format_real(p.lcc_fraction) << '\n';
  }
  std::vector<std::string> x;
  std::vector<double> ya, yr;
  for (std::size_t s = 0; s < attack.size(); ++s) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%.2f", attack[s].removed_fraction);
    x.push_back(buf);
    ya.push_back(attack[s].lcc_fraction);
    yr.push_back(random[s].lcc_fraction);
  }
  plot::write_svg({"LCC under node removal (" + g.window() + ")", "LCC fraction", x, {{"by degree", ya}, {"random", yr}}},
                  c.out / "resilience" / "curves.svg");

  json impacts = json::object();
  const resilience::RemovalExperiment* regular = nullptr;
  for (const auto& e : experiments) {
    impacts[std::string(roles::role_name(e.role))] = {{"mean_impact", e.mean_impact}, {"sd", e.sd_impact}};
    if (e.role == roles::Role::kRegular) regular = &e;
  }
  json ratios = json::object();
  if (regular && regular->mean_impact > 0)
    for (const auto& e : experiments)
      if (e.role != roles::Role::kRegular)
        ratios[std::string(roles::role_name(e.role)) + "/Regular"] = e.mean_impact / regular->mean_impact;
  c.headline["resilience_ratios"] = ratios;
  return {{"window", g.window()},
          {"removal_count", cfg.removal_count},
          {"trials", cfg.removal_trials},
          {"impacts", impacts},
          {"ratios", ratios},
          {"skipped_roles", skipped}};
}

using StageFn = json (*)(Context&, std::uint64_t);

StageFn stage_fn(const std::string& name) {
  static const std::map<std::string, StageFn> table = {
      {"synth", stage_synth},     {"ingest", stage_ingest}, {"graph", stage_graph},
      {"metrics", stage_metrics}, {"cohesion", stage_cohesion}, {"bursts", stage_bursts},
      {"roles", stage_roles},     {"neural", stage_neural}, {"stats", stage_stats},
      {"resilience", stage_resilience}};
  return table.at(name);
}

}  // namespace

RunResult run_pipeline(const config::PipelineConfig& cfg) {
  RunResult result;
  result.issues = config::validate(cfg);
  if (!result.issues.empty()) {
    result.exit_code = static_cast<int>(ErrorCode::kConfig);
    json list = json::array();
    for (const auto& i : result.issues) list.push_back({{"field", i.field}, {"message", i.message}});
    result.report = {{"status", "invalid_config"}, {"issues", list}};
    return result;
  }

  const int threads_before = thread_count();
  set_thread_count(cfg.threads);
  Context c{cfg, config::resolve_path(cfg, cfg.out), {}, {}, {}, {}, {}, {}, {}, {}, {}, {}};
  if (!cfg.events.empty()) c.events = config::resolve_path(cfg, cfg.events);
  const auto stages = config::resolve_stages(cfg);

  json report = {{"config_hash", hex64(config::config_hash(cfg))}, {"seed", cfg.seed}, {"status", "ok"}};
  json stage_list = json::array();
  json seeds = json::object();
  for (const auto& s : stages) seeds[s] = derive_seed(cfg.seed, "stage." + s);
  report["stage_seeds"] = seeds;

  bool failed = false;
  for (const auto& s : stages) {
    json entry = {{"name", s}, {"seed", seeds[s]}};
    if (failed) {
      entry["status"] = "skipped";
      stage_list.push_back(entry);
      continue;
    }
    try {
      fs::create_directories(c.out / s);
      json summary = stage_fn(s)(c, seeds[s].get<std::uint64_t>());
      summary["stage"] = s;
      summary["seed"] = seeds[s];
      write_json(summary, c.out / s / "summary.json");
      entry["status"] = "ok";
      entry["summary"] = s + "/summary.json";
    } catch (const std::exception& e) {
      const auto* err = dynamic_cast<const Error*>(&e);
      const int code = err ? static_cast<int>(err->code()) : static_cast<int>(ErrorCode::kInternal);
      failed = true;
      entry["status"] = "failed";
      entry["error"] = e.what();
      report["status"] = "failed";
      report["failure"] = {{"stage", s}, {"code", code}, {"message", e.what()}};
      result.exit_code = code;
    }
    stage_list.push_back(entry);
  }
  report["stages"] = stage_list;
  report["headline"] = c.headline;
  try {
    fs::create_directories(c.out);
    write_json(report, c.out / "report.json");
  } catch (const std::exception& e) {
    if (result.exit_code == 0) result.exit_code = static_cast<int>(ErrorCode::kIo);
    report["report_error"] = e.what();
  }
  set_thread_count(threads_before);
  result.report = std::move(report);
  return result;
}

}  // namespace collabnet::pipeline
