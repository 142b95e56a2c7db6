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

#include "collabnet/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <variant>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "collabnet/centrality.hpp"
#include "collabnet/rng.hpp"

namespace collabnet::config {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Range {
  double lo = -kInf, hi = kInf;
  bool lo_open = false, hi_open = false;
};

static_assert(std::is_same_v<std::size_t, std::uint64_t>, "seed is stored as a size_t field");
using Target = std::variant<double*, std::size_t*, int*, bool*, std::string*>;

struct Field {
  const char* name;
  Target target;
  Range range{};
  std::vector<std::string> choices{};  // strings only; empty = free text
};

Range at_least(double lo) { return {lo, kInf, false, false}; }
Range above(double lo) { return {lo, kInf, true, false}; }
Range closed(double lo, double hi) { return {lo, hi, false, false}; }
Range half_open(double lo, double hi) { return {lo, hi, false, true}; }
Range open(double lo, double hi) { return {lo, hi, true, true}; }

std::vector<Field> fields(PipelineConfig& c) {
  std::vector<std::string> metrics;
  for (auto m : {centrality::Metric::kDegree, centrality::Metric::kPageRank, centrality::Metric::kBetweenness,
                 centrality::Metric::kCloseness, centrality::Metric::kEigenvector})
    metrics.emplace_back(centrality::metric_name(m));
  return {
      {"run.seed", &c.seed},
      {"run.out", &c.out},
      {"run.threads", &c.threads, closed(1, 256)},
      {"run.stages", &c.stages},
      {"input.events", &c.events},
      {"input.format", &c.format, {}, {"csv", "jsonl"}},
      {"input.email_index", &c.email_index},
      {"input.window_begin", &c.window_begin},
      {"input.window_end", &c.window_end},
      {"synth.contributors", &c.corpus.contributors, at_least(2)},
      {"synth.quarters", &c.corpus.quarters, at_least(1)},
      {"synth.groups", &c.corpus.groups, at_least(1)},
      {"synth.repos_per_group", &c.corpus.repos_per_group, at_least(1)},
      {"synth.active_probability", &c.corpus.active_probability, Range{0, 1, true, false}},
      {"synth.cross_group_probability", &c.corpus.cross_group_probability, closed(0, 1)},
      {"synth.burst_rate", &c.corpus.burst_rate, closed(0, 1)},
      {"synth.burst_multiplier", &c.corpus.burst_multiplier, at_least(1)},
      {"ingest.malformed_cap", &c.malformed_cap, closed(0, 1)},
      {"ingest.similarity_threshold", &c.similarity_threshold, closed(0, 1)},
      {"ingest.bot_rate_cap", &c.bot_rate_cap, above(0)},
      {"ingest.iqr_k", &c.iqr_k, above(0)},
      {"graph.dampening", &c.dampening, {}, {"raw", "log1p"}},
      {"graph.decay", &c.weights.decay},
      {"graph.decay_lambda", &c.weights.decay_lambda, at_least(0)},
      {"graph.decay_horizon", &c.weights.decay_horizon, at_least(0)},
      {"graph.decay_floor", &c.weights.decay_floor, half_open(0, 1)},
      {"centrality.damping", &c.damping, open(0, 1)},
      {"centrality.pagerank_eps", &c.pagerank_eps, above(0)},
      {"centrality.betweenness_exact_cap", &c.betweenness_exact_cap, at_least(1)},
      {"centrality.betweenness_sources", &c.betweenness_sources, at_least(1)},
      {"centrality.betweenness_weighted", &c.betweenness_weighted},
      {"centrality.top_k", &c.top_k, at_least(1)},
      {"burst.theta", &c.theta, above(0)},
      {"changepoint.window", &c.cp_window, at_least(1)},
      {"changepoint.tau", &c.cp_tau, above(0)},
      {"roles.core_degree", &c.thresholds.core_degree},
      {"roles.core_pagerank", &c.thresholds.core_pagerank},
      {"roles.bridge_betweenness", &c.thresholds.bridge_betweenness},
      {"roles.bridge_degree_max", &c.thresholds.bridge_degree_max},
      {"roles.connector_degree", &c.thresholds.connector_degree},
      {"roles.connector_clustering", &c.thresholds.connector_clustering},
      {"roles.peripheral_degree", &c.thresholds.peripheral_degree},
      {"stats.alpha", &c.alpha, open(0, 1)},
      {"stats.target", &c.target, {}, metrics},
      {"stats.log_transform", &c.log_transform},
      {"stats.powerlaw_bootstrap", &c.powerlaw_bootstrap},
      {"stats.powerlaw_min_tail", &c.powerlaw_min_tail, at_least(2)},
      {"resilience.removal_count", &c.removal_count, at_least(1)},
      {"resilience.removal_trials", &c.removal_trials, at_least(1)},
      {"resilience.curve_steps", &c.curve_steps, at_least(2)},
      {"neural.lstm_window", &c.lstm.window, at_least(1)},
      {"neural.lstm_hidden", &c.lstm.hidden, at_least(1)},
      {"neural.lstm_learning_rate", &c.lstm.learning_rate, above(0)},
      {"neural.lstm_batch", &c.lstm.batch, at_least(1)},
      {"neural.lstm_epochs", &c.lstm.epochs, at_least(1)},
      {"neural.lstm_holdout", &c.lstm.holdout_fraction, half_open(0, 1)},
      {"neural.lstm_max_series", &c.lstm_max_series, at_least(1)},
      {"neural.gcn_features", &c.gcn.features, closed(3, 3)},
      {"neural.gcn_hidden", &c.gcn.hidden, at_least(1)},
      {"neural.gcn_classes", &c.gcn.classes, closed(5, 5)},
      {"neural.gcn_dropout", &c.gcn.dropout, half_open(0, 1)},
      {"neural.gcn_learning_rate", &c.gcn.learning_rate, above(0)},
      {"neural.gcn_epochs", &c.gcn.epochs, at_least(1)},
      {"neural.gcn_train", &c.gcn.train_fraction, open(0, 1)},
      {"neural.gcn_val", &c.gcn.val_fraction, half_open(0, 1)},
  };
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

template <class T>
std::optional<std::string> parse_integer(const std::string& text, T* out) {
  T v{};
  const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size() || text.empty())
    return std::is_signed_v<T> ? "expected an integer" : "expected a non-negative integer";
  *out = v;
  return std::nullopt;
}

std::optional<std::string> parse_into(const Target& target, const std::string& text) {
  return std::visit(
      [&](auto* p) -> std::optional<std::string> {
        using T = std::remove_pointer_t<decltype(p)>;
        if constexpr (std::is_same_v<T, std::string>) {
          *p = text;
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, bool>) {
          std::string lower = text;
          std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char ch) { return std::tolower(ch); });
          if (lower == "true" || lower == "yes" || lower == "on" || lower == "1") *p = true;
          else if (lower == "false" || lower == "no" || lower == "off" || lower == "0") *p = false;
          else return "expected true or false";
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, double>) {
          double v = 0;
          const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
          if (ec != std::errc() || end != text.data() + text.size() || text.empty()) return "expected a number";
          *p = v;
          return std::nullopt;
        } else {
          return parse_integer(text, p);
        }
      },
      target);
}

std::string format_value(const Target& target) {
  return std::visit(
      [](auto* p) -> std::string {
        using T = std::remove_pointer_t<decltype(p)>;
        if constexpr (std::is_same_v<T, std::string>) return *p;
        else if constexpr (std::is_same_v<T, bool>) return *p ? "true" : "false";
        else if constexpr (std::is_same_v<T, double>) return format_real(*p);
        else return std::to_string(*p);
      },
      target);
}

double numeric_value(const Target& target) {
  return std::visit(
      [](auto* p) -> double {
        using T = std::remove_pointer_t<decltype(p)>;
        if constexpr (std::is_same_v<T, std::string> || std::is_same_v<T, bool>) return 0.0;
        else return static_cast<double>(*p);
      },
      target);
}

bool is_numeric(const Target& t) {
  return !std::holds_alternative<std::string*>(t) && !std::holds_alternative<bool*>(t);
}

std::string describe(const Range& r) {
  std::string lo = std::isinf(r.lo) ? "(-inf" : (r.lo_open ? "(" : "[") + format_real(r.lo);
  std::string hi = std::isinf(r.hi) ? "inf)" : format_real(r.hi) + (r.hi_open ? ")" : "]");
  return lo + ", " + hi;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

LoadResult from_tree(const boost::property_tree::ptree& tree, const std::filesystem::path& base_dir) {
  LoadResult r;
  r.config.base_dir = base_dir;
  auto table = fields(r.config);
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      r.issues.push_back({section, "key is outside any section"});
      continue;
    }
    for (const auto& [key, value] : body) {
      const std::string name = section + "." + key;
      auto it = std::find_if(table.begin(), table.end(), [&](const Field& f) { return name == f.name; });
      if (it == table.end()) {
        r.issues.push_back({name, "unknown key"});
        continue;
      }
      if (auto err = parse_into(it->target, trim(value.data()))) r.issues.push_back({name, *err});
    }
  }
  return r;
}

}  // namespace

LoadResult load_config_text(std::string_view text, const std::filesystem::path& base_dir) {
  boost::property_tree::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    fail(ErrorCode::kParse, "config line " + std::to_string(e.line()) + ": " + e.message());
  }
  return from_tree(tree, base_dir);
}

LoadResult load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot read config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return load_config_text(buf.str(), path.parent_path());
  } catch (const Error& e) {
    fail(e.code(), path.string() + ": " + e.what());
  }
}

std::vector<ConfigIssue> set_field(PipelineConfig& config, std::string_view field, std::string_view value) {
  auto table = fields(config);
  auto it = std::find_if(table.begin(), table.end(), [&](const Field& f) { return field == f.name; });
  if (it == table.end()) return {{std::string(field), "unknown key"}};
  if (auto err = parse_into(it->target, trim(value))) return {{std::string(field), *err}};
  return {};
}

std::filesystem::path resolve_path(const PipelineConfig& config, const std::string& path) {
  std::filesystem::path p(path);
  return p.is_absolute() || config.base_dir.empty() ? p : config.base_dir / p;
}

std::vector<ConfigIssue> validate(const PipelineConfig& config, bool check_paths) {
  std::vector<ConfigIssue> issues;
  PipelineConfig copy = config;
  for (const auto& f : fields(copy)) {
    if (is_numeric(f.target)) {
      const double v = numeric_value(f.target);
      const Range& r = f.range;
      const bool ok = std::isfinite(v) && (r.lo_open ? v > r.lo : v >= r.lo) && (r.hi_open ? v < r.hi : v <= r.hi);
      if (!ok) issues.push_back({f.name, format_value(f.target) + " is outside " + describe(r)});
    } else if (!f.choices.empty()) {
      const auto& v = *std::get<std::string*>(f.target);
      if (std::find(f.choices.begin(), f.choices.end(), v) == f.choices.end()) {
        std::string list;
        for (const auto& c : f.choices) list += (list.empty() ? "" : ", ") + c;
        issues.push_back({f.name, "'" + v + "' is not one of " + list});
      }
    }
  }

  bool stages_ok = true;
  if (trim(config.stages) != "all") {
    const auto listed = split_list(config.stages);
    if (listed.empty()) {
      issues.push_back({"run.stages", "no stage enabled"});
      stages_ok = false;
    }
    for (const auto& s : listed)
      if (std::find(std::begin(kStages), std::end(kStages), s) == std::end(kStages)) {
        issues.push_back({"run.stages", "unknown stage '" + s + "'"});
        stages_ok = false;
      }
  }
  if (config.out.empty()) issues.push_back({"run.out", "output directory is empty"});

  std::optional<ingest::Quarter> begin, end;
  if (!config.window_begin.empty() && !(begin = ingest::Quarter::parse(config.window_begin)))
    issues.push_back({"input.window_begin", "'" + config.window_begin + "' is not a quarter label like 2021Q1"});
  if (!config.window_end.empty() && !(end = ingest::Quarter::parse(config.window_end)))
    issues.push_back({"input.window_end", "'" + config.window_end + "' is not a quarter label like 2021Q1"});
  if (begin && end && *end < *begin) issues.push_back({"input.window_end", "window_end precedes window_begin"});

  if (config.gcn.train_fraction + config.gcn.val_fraction >= 1.0)
    issues.push_back({"neural.gcn_val", "gcn_train + gcn_val must be below 1"});

  if (stages_ok) {
    const auto stages = resolve_stages(config);
    const bool synth = std::find(stages.begin(), stages.end(), "synth") != stages.end();
    const bool ingest = std::find(stages.begin(), stages.end(), "ingest") != stages.end();
    if (ingest && !synth) {
      if (config.events.empty())
        issues.push_back({"input.events", "required unless the synth stage runs"});
      else if (check_paths && !std::filesystem::exists(resolve_path(config, config.events)))
        issues.push_back({"input.events", "no such file: " + resolve_path(config, config.events).string()});
    }
  }
  if (check_paths && !config.email_index.empty() && !std::filesystem::exists(resolve_path(config, config.email_index)))
    issues.push_back({"input.email_index", "no such file: " + resolve_path(config, config.email_index).string()});
  return issues;
}

std::string canonical_text(const PipelineConfig& config) {
  PipelineConfig copy = config;
  std::vector<std::string> lines;
  for (const auto& f : fields(copy)) lines.push_back(std::string(f.name) + " = " + format_value(f.target));
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& l : lines) out += l + '\n';
  return out;
}

std::uint64_t config_hash(const PipelineConfig& config) {
  // The output directory and thread count do not change any result.
  PipelineConfig copy = config;
  copy.out = PipelineConfig{}.out;
  copy.threads = PipelineConfig{}.threads;
  return fnv1a64(canonical_text(copy));
}

std::vector<std::string> resolve_stages(const PipelineConfig& config) {
  static const std::map<std::string, std::vector<std::string>> needs = {
      {"synth", {}},
      {"ingest", {}},
      {"graph", {"ingest"}},
      {"metrics", {"graph"}},
      {"cohesion", {"graph"}},
      {"bursts", {"ingest"}},
      {"roles", {"metrics"}},
      {"neural", {"roles", "bursts"}},
      {"stats", {"metrics", "roles"}},
      {"resilience", {"roles"}},
  };
  std::set<std::string> on;
  std::vector<std::string> todo;
  if (trim(config.stages) == "all") {
    for (auto s : kStages) todo.emplace_back(s);
  } else {
    todo = split_list(config.stages);
  }
  while (!todo.empty()) {
    const std::string s = todo.back();
    todo.pop_back();
    if (!needs.count(s)) fail(ErrorCode::kConfig, "unknown stage '" + s + "'");
    if (!on.insert(s).second) continue;
    for (const auto& d : needs.at(s)) todo.push_back(d);
  }
  std::vector<std::string> ordered;
  for (auto s : kStages)
    if (on.count(std::string(s))) ordered.emplace_back(s);
  return ordered;
}

}  // namespace collabnet::config
