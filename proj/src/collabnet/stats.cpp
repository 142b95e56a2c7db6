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

#include "collabnet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>

#include <Eigen/Dense>

#include "collabnet/parallel.hpp"
#include "collabnet/rng.hpp"
#include "collabnet/special.hpp"

namespace collabnet::stats {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Least squares of b on the columns of a (no intercept), returning the
// coefficients and the residual sum of squares.
std::pair<Eigen::VectorXd, double> lstsq(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  if (a.cols() == 0) return {Eigen::VectorXd(), b.squaredNorm()};
  Eigen::VectorXd coef = a.colPivHouseholderQr().solve(b);
  return {coef, (b - a * coef).squaredNorm()};
}

}  // namespace

PearsonResult pearson(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size(), ErrorCode::kInvalidArgument, "pearson needs equal-length samples");
  require(x.size() >= 3, ErrorCode::kInvalidArgument, "pearson needs at least 3 observations");
  PearsonResult res;
  res.n = x.size();
  const double mx = mean(x), my = mean(y);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (!(sxx > 0) || !(syy > 0)) return res;
  res.defined = true;
  res.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  const double df = static_cast<double>(x.size() - 2);
  if (std::abs(res.r) >= 1.0) {
    res.t = res.r > 0 ? kInf : -kInf;
    res.p = 0.0;
  } else {
    res.t = res.r * std::sqrt(df / (1.0 - res.r * res.r));
    res.p = t_two_sided_p(res.t, df);
  }
  return res;
}

double bonferroni_threshold(double alpha, std::size_t comparisons) {
  require(alpha > 0 && alpha < 1, ErrorCode::kInvalidArgument, "alpha must be in (0,1)");
  require(comparisons > 0, ErrorCode::kInvalidArgument, "no comparisons");
  return alpha / static_cast<double>(comparisons);
}

std::vector<bool> bonferroni(const std::vector<double>& p, double alpha) {
  std::vector<bool> out(p.size(), false);
  if (p.empty()) return out;
  const double threshold = bonferroni_threshold(alpha, p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = p[i] < threshold;
  return out;
}

FitResult ols_multiple(const std::vector<std::vector<double>>& columns, const std::vector<double>& y,
                       std::vector<std::string> names) {
  const std::size_t p = columns.size();
  const std::size_t n = y.size();
  require(p >= 1, ErrorCode::kInvalidArgument, "regression needs at least one predictor");
  require(n > p + 1, ErrorCode::kInvalidArgument, "regression needs n > p + 1");
  if (names.empty())
    for (std::size_t j = 0; j < p; ++j) names.push_back("x" + std::to_string(j + 1));
  require(names.size() == p, ErrorCode::kInvalidArgument, "one name per predictor");

  Eigen::MatrixXd z(n, p);
  for (std::size_t j = 0; j < p; ++j) {
    require(columns[j].size() == n, ErrorCode::kInvalidArgument, "predictor " + names[j] + " has the wrong length");
    const double mu = mean(columns[j]);
    double ss = 0.0;
    for (double v : columns[j]) ss += (v - mu) * (v - mu);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (!(sd > 1e-12 * std::max(1.0, std::abs(mu))))
      fail(ErrorCode::kNumeric, "singular design: column " + names[j] + " is constant");
    for (std::size_t i = 0; i < n; ++i) z(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (columns[j][i] - mu) / sd;
  }

  // Each standardised column has squared norm n - 1. A column explained by the
  // earlier ones up to rounding makes the design singular.
  for (std::size_t j = 1; j < p; ++j) {
    auto [coef, ss] = lstsq(z.leftCols(static_cast<Eigen::Index>(j)), z.col(static_cast<Eigen::Index>(j)));
    if (ss < 1e-10 * static_cast<double>(n - 1)) {
      std::string with;
      for (std::size_t k = 0; k < j; ++k)
        if (std::abs(coef(static_cast<Eigen::Index>(k))) > 1e-8) with += (with.empty() ? "" : ", ") + names[k];
      fail(ErrorCode::kNumeric, "singular design: column " + names[j] + " is collinear with " + with);
    }
  }

  Eigen::VectorXd yv(n);
  for (std::size_t i = 0; i < n; ++i) yv(static_cast<Eigen::Index>(i)) = y[i];
  const double ybar = mean(y);
  Eigen::VectorXd yc = yv.array() - ybar;
  const double sst = yc.squaredNorm();
  require(sst > 0, ErrorCode::kInvalidArgument, "regression target has no variance");

  FitResult fit;
  fit.names = std::move(names);
  fit.n = n;
  fit.p = p;
  fit.intercept = ybar;
  auto [beta, sse] = lstsq(z, yc);
  Eigen::VectorXd resid = yc - z * beta;
  fit.ss_total = sst;
  fit.ss_residual = sse;
  fit.r2 = 1.0 - sse / sst;
  const double dfr = static_cast<double>(n - p - 1);
  fit.adj_r2 = 1.0 - (1.0 - fit.r2) * static_cast<double>(n - 1) / dfr;
  if (sse > 0) {
    fit.f = ((sst - sse) / static_cast<double>(p)) / (sse / dfr);
    fit.f_p = f_upper_p(fit.f, static_cast<double>(p), dfr);
  } else {
    fit.f = kInf;
    fit.f_p = 0.0;
  }
  const double sigma2 = sse / dfr;
  Eigen::MatrixXd xtx_inv = (z.transpose() * z).ldlt().solve(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p)));
  const double tcrit = t_quantile(0.975, dfr);
  for (std::size_t j = 0; j < p; ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    const double b = beta(jj);
    const double se = std::sqrt(std::max(0.0, sigma2 * xtx_inv(jj, jj)));
    fit.beta.push_back(b);
    fit.se.push_back(se);
    fit.ci_low.push_back(b - tcrit * se);
    fit.ci_high.push_back(b + tcrit * se);
    if (p == 1) {
      fit.vif.push_back(1.0);
      continue;
    }
    Eigen::MatrixXd others(n, p - 1);
    for (std::size_t k = 0, c = 0; k < p; ++k)
      if (k != j) others.col(static_cast<Eigen::Index>(c++)) = z.col(static_cast<Eigen::Index>(k));
    auto [ac, ass] = lstsq(others, z.col(jj));
    const double rj2 = 1.0 - ass / static_cast<double>(n - 1);
    fit.vif.push_back(1.0 / (1.0 - rj2));
  }
  fit.residuals.assign(resid.data(), resid.data() + resid.size());
  return fit;
}

json to_json(const FitResult& fit) {
  json predictors = json::array();
  for (std::size_t j = 0; j < fit.p; ++j)
    predictors.push_back({{"name", fit.names[j]},
                          {"beta", fit.beta[j]},
                          {"se", fit.se[j]},
                          {"ci95", {fit.ci_low[j], fit.ci_high[j]}},
                          {"vif", fit.vif[j]}});
  return {{"n", fit.n},
          {"p", fit.p},
          {"intercept", fit.intercept},
          {"predictors", predictors},
          {"r2", fit.r2},
          {"adj_r2", fit.adj_r2},
          {"f", fit.f},
          {"f_df", {fit.p, fit.n - fit.p - 1}},
          {"f_p", fit.f_p},
          {"ss_total", fit.ss_total},
          {"ss_residual", fit.ss_residual}};
}

namespace {

struct TailFit {
  double alpha = 0.0;
  double x_min = 0.0;
  double ks = kInf;
  std::size_t n_tail = 0;
};

// sorted ascending and strictly positive; logs[i] = ln(sorted[i]).
TailFit best_tail(const std::vector<double>& sorted, const std::vector<double>& logs, const PowerLawOptions& opt) {
  const std::size_t n = sorted.size();
  const auto min_tail = std::max(opt.min_tail, static_cast<std::size_t>(std::ceil(opt.min_tail_fraction * static_cast<double>(n))));
  std::vector<double> suffix(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] + logs[i];
  // Start positions of each distinct value that leaves a large enough tail.
  std::vector<std::size_t> starts;
  for (std::size_t i = 0; i < n && n - i >= min_tail; ++i)
    if (i == 0 || sorted[i] != sorted[i - 1]) starts.push_back(i);
  require(!starts.empty(), ErrorCode::kInvalidArgument,
          "power-law fit needs at least " + std::to_string(min_tail) + " tail observations");
  std::vector<std::size_t> chosen;
  if (starts.size() <= opt.max_candidates) {
    chosen = starts;
  } else {
    const std::size_t k = std::max<std::size_t>(opt.max_candidates, 2);
    for (std::size_t c = 0; c < k; ++c) chosen.push_back(starts[c * (starts.size() - 1) / (k - 1)]);
    chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
  }
  TailFit best;
  for (std::size_t s : chosen) {
    const std::size_t m = n - s;
    const double denom = suffix[s] - static_cast<double>(m) * logs[s];
    if (!(denom > 0)) continue;
    const double alpha = 1.0 + static_cast<double>(m) / denom;
    double d = 0.0;
    const double md = static_cast<double>(m);
    for (std::size_t i = 0; i < m; ++i) {
      const double cdf = 1.0 - std::exp((1.0 - alpha) * (logs[s + i] - logs[s]));
      d = std::max({d, std::abs(static_cast<double>(i + 1) / md - cdf), std::abs(static_cast<double>(i) / md - cdf)});
    }
    if (d < best.ks) best = {alpha, sorted[s], d, m};
  }
  require(std::isfinite(best.ks), ErrorCode::kInvalidArgument, "power-law fit found no tail with spread");
  return best;
}

TailFit fit_sorted(std::vector<double> values, const PowerLawOptions& opt) {
  std::sort(values.begin(), values.end());
  std::vector<double> logs(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) logs[i] = std::log(values[i]);
  return best_tail(values, logs, opt);
}

}  // namespace

PowerLawFit fit_power_law(const std::vector<double>& values, std::uint64_t seed, const PowerLawOptions& options) {
  for (double v : values)
    require(std::isfinite(v) && v > 0, ErrorCode::kInvalidArgument, "power-law values must be positive");
  std::vector<double> sorted(values);
  std::sort(sorted.begin(), sorted.end());
  const TailFit obs = fit_sorted(sorted, options);
  PowerLawFit fit;
  fit.alpha = obs.alpha;
  fit.x_min = obs.x_min;
  fit.ks = obs.ks;
  fit.n = values.size();
  fit.n_tail = obs.n_tail;
  fit.bootstrap = options.bootstrap;
  fit.seed = seed;
  if (options.bootstrap == 0) {
    fit.p = std::numeric_limits<double>::quiet_NaN();
    return fit;
  }
  // Body values are resampled as observed, the tail is redrawn from the fit.
  const std::size_t body = fit.n - fit.n_tail;
  const double tail_share = static_cast<double>(fit.n_tail) / static_cast<double>(fit.n);
  const std::uint64_t boot_seed = derive_seed(seed, "stats.powerlaw.bootstrap");
  std::vector<char> exceed(options.bootstrap, 0);
  parallel_for(0, options.bootstrap, [&](std::size_t r) {
    CounterRng rng(boot_seed, r);
    std::vector<double> sample(fit.n);
    for (auto& x : sample)
      x = (body == 0 || rng.uniform() < tail_share) ? rng.pareto(fit.alpha, fit.x_min)
                                                    : sorted[rng.uniform_index(body)];
    try {
      exceed[r] = fit_sorted(std::move(sample), options).ks >= obs.ks;
    } catch (const Error&) {
      exceed[r] = 1;
    }
  });
  std::size_t count = 0;
  for (char e : exceed) count += e ? 1 : 0;
  fit.p = static_cast<double>(count) / static_cast<double>(options.bootstrap);
  return fit;
}

json to_json(const PowerLawFit& fit) {
  return {{"alpha", fit.alpha}, {"x_min", fit.x_min},         {"ks", fit.ks},     {"p", fit.p},
          {"n", fit.n},         {"n_tail", fit.n_tail},       {"bootstrap", fit.bootstrap}, {"seed", fit.seed}};
}

std::optional<double> gini(std::vector<double> values) {
  require(!values.empty(), ErrorCode::kInvalidArgument, "gini needs values");
  for (double v : values) require(v >= 0, ErrorCode::kInvalidArgument, "gini needs non-negative values");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  double total = 0.0;
  for (double v : values) total += v;
  if (!(total > 0)) return std::nullopt;
  // Sum of (2i - n - 1) x_(i), folded so that equal values cancel exactly.
  double num = 0.0;
  for (std::size_t i = 0; i < n / 2; ++i)
    num += static_cast<double>(n - 1 - 2 * i) * (values[n - 1 - i] - values[i]);
  return num / (static_cast<double>(n) * total);
}

MannWhitneyResult mann_whitney_u(const std::vector<double>& a, const std::vector<double>& b) {
  require(!a.empty() && !b.empty(), ErrorCode::kInvalidArgument, "mann-whitney needs two non-empty samples");
  const std::size_t na = a.size(), nb = b.size(), n = na + nb;
  std::vector<std::pair<double, std::size_t>> all;  // value, 1 when from a
  for (double v : a) all.push_back({v, 1});
  for (double v : b) all.push_back({v, 0});
  std::sort(all.begin(), all.end());
  std::vector<double> rank(n);
  double tie_term = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && all[j].first == all[i].first) ++j;
    const double mid = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) rank[k] = mid;
    const double t = static_cast<double>(j - i);
    tie_term += t * t * t - t;
    i = j;
  }
  double ra = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    if (all[k].second) ra += rank[k];
  MannWhitneyResult res;
  const double base = static_cast<double>(na) * static_cast<double>(na + 1) / 2.0;
  res.u = ra - base;
  const double mu = static_cast<double>(na) * static_cast<double>(nb) / 2.0;
  const double dn = static_cast<double>(n);
  const double var = static_cast<double>(na) * static_cast<double>(nb) / 12.0 * ((dn + 1.0) - tie_term / (dn * (dn - 1.0)));
  res.z = var > 0 ? (res.u - mu) / std::sqrt(var) : 0.0;
  if (n <= 12) {
    res.exact = true;
    const double obs = std::abs(res.u - mu);
    std::size_t hit = 0, total = 0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      if (static_cast<std::size_t>(__builtin_popcount(mask)) != na) continue;
      double r = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        if (mask >> k & 1u) r += rank[k];
      ++total;
      if (std::abs(r - base - mu) >= obs - 1e-9) ++hit;
    }
    res.p = static_cast<double>(hit) / static_cast<double>(total);
    return res;
  }
  if (!(var > 0)) return res;
  const double dev = std::max(0.0, std::abs(res.u - mu) - 0.5);
  const double z = dev / std::sqrt(var);
  res.p = std::min(1.0, 2.0 * (1.0 - normal_cdf(z)));
  return res;
}

ActionTable action_totals(const ingest::CleanDataset& dataset) {
  std::map<std::string, std::array<double, ingest::kActionCount>> acc;
  for (const auto& r : dataset.records) {
    auto [it, inserted] = acc.try_emplace(r.contributor);
    if (inserted) it->second.fill(0.0);
    it->second[static_cast<std::size_t>(r.action)] += static_cast<double>(r.count);
  }
  ActionTable t;
  for (auto& [who, row] : acc) {
    t.contributors.push_back(who);
    t.totals.push_back(row);
  }
  return t;
}

InfluenceAnalysis action_influence_analysis(const ActionTable& table,
                                            const std::vector<std::pair<std::string, std::vector<double>>>& metrics,
                                            const std::string& target, double alpha) {
  const std::size_t n = table.contributors.size();
  require(!metrics.empty(), ErrorCode::kInvalidArgument, "influence analysis needs metrics");
  std::array<std::vector<double>, ingest::kActionCount> cols;
  for (const auto& row : table.totals)
    for (std::size_t j = 0; j < ingest::kActionCount; ++j) cols[j].push_back(row[j]);
  InfluenceAnalysis out;
  auto& rep = out.correlations;
  rep.alpha = alpha;
  rep.comparisons = ingest::kActionCount * metrics.size();
  rep.threshold = bonferroni_threshold(alpha, rep.comparisons);
  const std::vector<double>* y = nullptr;
  for (const auto& [name, values] : metrics) {
    require(values.size() == n, ErrorCode::kInvalidArgument, "metric " + name + " is not aligned with the table");
    if (name == target) y = &values;
  }
  for (std::size_t j = 0; j < ingest::kActionCount; ++j)
    for (const auto& [name, values] : metrics) {
      CorrelationEntry e;
      e.action = std::string(ingest::action_name(static_cast<ingest::Action>(j)));
      e.metric = name;
      e.result = pearson(cols[j], values);
      e.significant = e.result.defined && e.result.p < rep.threshold;
      rep.entries.push_back(std::move(e));
    }
  require(y != nullptr, ErrorCode::kInvalidArgument, "no metric named " + target);
  std::vector<std::vector<double>> x(cols.begin(), cols.end());
  std::vector<std::string> names;
  for (std::size_t j = 0; j < ingest::kActionCount; ++j)
    names.emplace_back(ingest::action_name(static_cast<ingest::Action>(j)));
  try {
    out.regression = ols_multiple(x, *y, names);
  } catch (const Error& err) {
    out.regression_error = err.what();
  }
  return out;
}

void write_correlations_csv(const CorrelationReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  out << "action,metric,r,t,p,significant\n";
  for (const auto& e : report.entries) {
    out << e.action << ',' << e.metric << ',';
    if (e.result.defined)
      out << format_real(e.result.r) << ',' << format_real(e.result.t) << ',' << format_real(e.result.p);
    else
      out << "undefined,undefined,undefined";
    out << ',' << (e.significant ? 1 : 0) << '\n';
  }
}

}  // namespace collabnet::stats
