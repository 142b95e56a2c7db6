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
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "collabnet/ingest.hpp"

namespace collabnet::stats {

struct PearsonResult {
  double r = 0.0;
  double t = 0.0;
  double p = 1.0;
  std::size_t n = 0;
  bool defined = false;  // false when either side has no variance
};

/// Needs n >= 3. |r| = 1 reports t = +-inf and p = 0.
PearsonResult pearson(const std::vector<double>& x, const std::vector<double>& y);

double bonferroni_threshold(double alpha, std::size_t comparisons);
/// p < alpha / m for each entry, m = p.size().
std::vector<bool> bonferroni(const std::vector<double>& p, double alpha = 0.05);

struct FitResult {
  std::vector<std::string> names;
  double intercept = 0.0;
  std::vector<double> beta;  // per predictor standard deviation, in target units
  std::vector<double> se;
  std::vector<double> ci_low;
  std::vector<double> ci_high;
  std::vector<double> vif;
  double r2 = 0.0;
  double adj_r2 = 0.0;
  double f = 0.0;
  double f_p = 1.0;
  double ss_total = 0.0;
  double ss_residual = 0.0;
  std::size_t n = 0;
  std::size_t p = 0;
  std::vector<double> residuals;
};

/// columns[j] is predictor j over the n observations. Predictors are
/// standardised with the sample sd before fitting; y is used as given.
/// Throws kNumeric naming the offending columns when the design is singular.
FitResult ols_multiple(const std::vector<std::vector<double>>& columns, const std::vector<double>& y,
                       std::vector<std::string> names = {});

nlohmann::json to_json(const FitResult& fit);

struct PowerLawOptions {
  std::size_t bootstrap = 200;
  std::size_t max_candidates = 500;  // x_min candidates, spread over the distinct values
  std::size_t min_tail = 50;
  double min_tail_fraction = 0.1;
};

struct PowerLawFit {
  double alpha = 0.0;
  double x_min = 0.0;
  double ks = 0.0;
  double p = 1.0;  // NaN when bootstrap = 0
  std::size_t n = 0;
  std::size_t n_tail = 0;
  std::size_t bootstrap = 0;
  std::uint64_t seed = 0;
};

/// Continuous MLE with the KS-minimising x_min; p from semi-parametric bootstrap.
/// Values must be positive. Throws kInvalidArgument when no candidate leaves
/// max(min_tail, ceil(min_tail_fraction * n)) observations in the tail.
PowerLawFit fit_power_law(const std::vector<double>& values, std::uint64_t seed, const PowerLawOptions& options = {});

nlohmann::json to_json(const PowerLawFit& fit);

/// Sorted-rank Gini. nullopt when every value is zero; throws on negatives.
std::optional<double> gini(std::vector<double> values);

struct MannWhitneyResult {
  double u = 0.0;  // U for sample a: pairs with a > b, ties count one half
  double z = 0.0;
  double p = 1.0;
  bool exact = false;
};

/// Two-sided. Exact over all rank splits when the combined size is at most 12,
/// otherwise the normal approximation with tie and continuity correction.
MannWhitneyResult mann_whitney_u(const std::vector<double>& a, const std::vector<double>& b);

/// Per-contributor totals per action type over the dataset.
struct ActionTable {
  std::vector<std::string> contributors;
  std::vector<std::array<double, ingest::kActionCount>> totals;
};

ActionTable action_totals(const ingest::CleanDataset& dataset);

struct CorrelationEntry {
  std::string action;
  std::string metric;
  PearsonResult result;
  bool significant = false;
};

struct CorrelationReport {
  std::vector<CorrelationEntry> entries;
  double alpha = 0.05;
  double threshold = 0.05;  // alpha / comparisons
  std::size_t comparisons = 0;
};

struct InfluenceAnalysis {
  CorrelationReport correlations;
  std::optional<FitResult> regression;
  std::string regression_error;
};

/// metrics: (name, values aligned with table.contributors). The regression
/// target is the metric named `target`; undefined correlations count as comparisons.
InfluenceAnalysis action_influence_analysis(const ActionTable& table,
                                            const std::vector<std::pair<std::string, std::vector<double>>>& metrics,
                                            const std::string& target = "pagerank", double alpha = 0.05);

void write_correlations_csv(const CorrelationReport& report, const std::filesystem::path& path);

}  // namespace collabnet::stats
