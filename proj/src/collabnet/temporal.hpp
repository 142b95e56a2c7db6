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

#include <cstddef>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "collabnet/ingest.hpp"

namespace collabnet::temporal {

struct ActivitySeries {
  std::string contributor;
  std::vector<std::string> windows;
  std::vector<double> values;

  double mean() const;
  double stddev() const;  // population form
};

/// One series per contributor (sorted), covering every dataset window; a
/// window's value is the contributor's total action count in it.
std::vector<ActivitySeries> activity_series(const ingest::CleanDataset& dataset);

struct BurstEvent {
  std::string contributor;
  std::string window;
  std::size_t index = 0;
  double z = 0.0;
  double value = 0.0;
};

struct BurstResult {
  std::vector<BurstEvent> events;
  bool short_series = false;  // fewer than 2 values
};

/// Windows with z = (a - mu) / sigma > theta, population sigma over the
/// contributor's own series. sigma = 0 gives no bursts. Integer-valued series
/// are compared exactly, so z == theta is never a burst.
BurstResult detect_bursts(const ActivitySeries& series, double theta = 2.0);

/// burst count -> number of contributors with that many bursts.
std::map<std::size_t, std::size_t> burst_histogram(const std::vector<BurstResult>& per_contributor);

void write_bursts_header(std::ostream& out);
void write_burst_rows(std::ostream& out, const BurstResult& result);

struct TrendFit {
  double alpha = 0.0;  // intercept
  double beta = 0.0;   // slope per time step
  double f = 0.0;
  double p = 1.0;
  double r2 = 0.0;
  std::size_t n = 0;
  bool f_defined = true;  // false when y has no variance
};

/// y_t = alpha + beta t + e_t over t = 0..n-1, F-test on (1, n-2) df. Needs n >= 3.
/// A perfect non-constant fit reports F = inf and p = 0.
TrendFit ols_trend(const std::vector<double>& y);

struct ChangePoints {
  std::vector<std::size_t> indices;
  std::vector<double> delta;  // |mean[t-w, t) - mean[t, t+w)| per t in [w, n-w], indexed from w
  bool too_short = false;
};

/// Flags t when delta_t > tau * sigma(whole series); each run of consecutive
/// flags is reduced to its largest-delta index (earliest on ties).
ChangePoints change_points(const std::vector<double>& y, std::size_t w = 3, double tau = 1.5);

}  // namespace collabnet::temporal
