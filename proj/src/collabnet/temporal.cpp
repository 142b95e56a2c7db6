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

#include "collabnet/temporal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "collabnet/special.hpp"

namespace collabnet::temporal {

namespace {

double mean_of(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
  double s = 0.0;
  for (std::size_t i = lo; i < hi; ++i) s += v[i];
  return s / static_cast<double>(hi - lo);
}

double population_sd(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  const double mu = mean_of(v, 0, v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mu) * (x - mu);
  return std::sqrt(ss / static_cast<double>(v.size()));
}

// Values that are integers small enough for exact 128-bit moment sums.
bool integral_series(const std::vector<double>& v) {
  for (double x : v)
    if (x != std::floor(x) || std::abs(x) > 1e12) return false;
  return true;
}

}  // namespace

double ActivitySeries::mean() const { return values.empty() ? 0.0 : mean_of(values, 0, values.size()); }
double ActivitySeries::stddev() const { return population_sd(values); }

std::vector<ActivitySeries> activity_series(const ingest::CleanDataset& dataset) {
  std::map<std::string, std::vector<double>> totals;
  const std::size_t w = dataset.windows.size();
  for (std::size_t i = 0; i < dataset.records.size(); ++i) {
    auto& row = totals[dataset.records[i].contributor];
    if (row.empty()) row.assign(w, 0.0);
    row[dataset.record_window[i]] += static_cast<double>(dataset.records[i].count);
  }
  std::vector<std::string> labels;
  for (const auto& q : dataset.windows) labels.push_back(q.label());
  std::vector<ActivitySeries> out;
  out.reserve(totals.size());
  for (auto& [who, values] : totals) out.push_back({who, labels, std::move(values)});
  return out;
}

BurstResult detect_bursts(const ActivitySeries& series, double theta) {
  require(theta >= 0.0, ErrorCode::kInvalidArgument, "burst threshold must be >= 0");
  BurstResult r;
  const auto& v = series.values;
  if (v.size() < 2) {
    r.short_series = true;
    return r;
  }
  const double mu = series.mean();
  const double sd = series.stddev();
  const bool exact = integral_series(v);
  __int128 s = 0, ss = 0;
  if (exact) {
    for (double x : v) {
      auto xi = static_cast<__int128>(x);
      s += xi;
      ss += xi * xi;
    }
  }
  const auto t = static_cast<__int128>(v.size());
  const __int128 var_scaled = t * ss - s * s;  // T^2 sigma^2
  if (exact ? var_scaled == 0 : sd == 0.0) return r;
  for (std::size_t i = 0; i < v.size(); ++i) {
    bool burst;
    if (exact) {
      const __int128 d = t * static_cast<__int128>(v[i]) - s;  // T (a - mu)
      const auto dd = static_cast<long double>(d);
      const auto th = static_cast<long double>(theta);
      burst = d > 0 && dd * dd > th * th * static_cast<long double>(var_scaled);
    } else {
      burst = (v[i] - mu) / sd > theta;
    }
    if (burst) {
      r.events.push_back({series.contributor, i < series.windows.size() ? series.windows[i] : std::to_string(i), i,
                          (v[i] - mu) / sd, v[i]});
    }
  }
  return r;
}

std::map<std::size_t, std::size_t> burst_histogram(const std::vector<BurstResult>& per_contributor) {
  std::map<std::size_t, std::size_t> h;
  for (const auto& r : per_contributor) ++h[r.events.size()];
  return h;
}

void write_bursts_header(std::ostream& out) { out << "contributor,window,z,value\n"; }

void write_burst_rows(std::ostream& out, const BurstResult& result) {
  for (const auto& e : result.events)
    out << e.contributor << ',' << e.window << ',' << format_real(e.z) << ',' << format_real(e.value) << '\n';
}

TrendFit ols_trend(const std::vector<double>& y) {
  const std::size_t n = y.size();
  require(n >= 3, ErrorCode::kInvalidArgument, "trend fit needs at least 3 points");
  TrendFit fit;
  fit.n = n;
  const double tn = static_cast<double>(n);
  const double tbar = (tn - 1.0) / 2.0;
  const double ybar = mean_of(y, 0, n);
  double stt = 0.0, sty = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dt = static_cast<double>(i) - tbar, dy = y[i] - ybar;
    stt += dt * dt;
    sty += dt * dy;
    syy += dy * dy;
  }
  if (syy == 0.0) {
    fit.alpha = ybar;
    fit.f_defined = false;
    fit.f = std::numeric_limits<double>::quiet_NaN();
    return fit;
  }
  fit.beta = sty / stt;
  fit.alpha = ybar - fit.beta * tbar;
  const double ssr = fit.beta * sty;
  const double sse = std::max(0.0, syy - ssr);
  fit.r2 = std::min(1.0, ssr / syy);
  if (sse <= 1e-14 * syy) {
    fit.f = std::numeric_limits<double>::infinity();
    fit.p = 0.0;
  } else {
    fit.f = ssr / (sse / (tn - 2.0));
    fit.p = stats::f_upper_p(fit.f, 1.0, tn - 2.0);
  }
  return fit;
}

ChangePoints change_points(const std::vector<double>& y, std::size_t w, double tau) {
  ChangePoints cp;
  require(w >= 1, ErrorCode::kInvalidArgument, "change-point window must be >= 1");
  const std::size_t n = y.size();
  if (n < 2 * w + 1) {
    cp.too_short = true;
    return cp;
  }
  const double sigma = population_sd(y);
  for (std::size_t t = w; t + w <= n; ++t) cp.delta.push_back(std::abs(mean_of(y, t - w, t) - mean_of(y, t, t + w)));
  if (sigma == 0.0) return cp;
  const double cut = tau * sigma;
  for (std::size_t k = 0; k < cp.delta.size();) {
    if (!(cp.delta[k] > cut)) {
      ++k;
      continue;
    }
    std::size_t best = k;
    std::size_t j = k;
    while (j < cp.delta.size() && cp.delta[j] > cut) {
      if (cp.delta[j] > cp.delta[best]) best = j;
      ++j;
    }
    cp.indices.push_back(best + w);
    k = j;
  }
  return cp;
}

}  // namespace collabnet::temporal
