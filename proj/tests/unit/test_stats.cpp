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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "collabnet/rng.hpp"
#include "collabnet/special.hpp"
#include "collabnet/stats.hpp"
#include "collabnet/synth.hpp"
#include "oracles.hpp"

using namespace collabnet;
using namespace collabnet::stats;

namespace {

std::vector<double> iota(std::size_t n, double start = 1.0) {
  std::vector<double> v(n);
  std::iota(v.begin(), v.end(), start);
  return v;
}

std::vector<double> normals(std::size_t n, std::uint64_t seed, double shift = 0.0) {
  CounterRng rng(seed, 4);
  std::vector<double> v(n);
  for (auto& x : v) x = shift + rng.normal();
  return v;
}

double gini_pairs(const std::vector<double>& x) {
  double num = 0, total = 0;
  for (double a : x) {
    total += a;
    for (double b : x) num += std::abs(a - b);
  }
  return num / (2.0 * static_cast<double>(x.size()) * total);
}

// Raw-scale OLS with intercept through the normal equations.
std::vector<double> normal_equation_fit(const std::vector<std::vector<double>>& cols, const std::vector<double>& y) {
  const std::size_t p = cols.size() + 1, n = y.size();
  std::vector<std::vector<double>> a(p, std::vector<double>(p, 0.0));
  std::vector<double> b(p, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row{1.0};
    for (const auto& c : cols) row.push_back(c[i]);
    for (std::size_t r = 0; r < p; ++r) {
      b[r] += row[r] * y[i];
      for (std::size_t c = 0; c < p; ++c) a[r][c] += row[r] * row[c];
    }
  }
  return oracles::solve(a, b);
}

double sample_sd(const std::vector<double>& v) {
  const double mu = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0;
  for (double x : v) ss += (x - mu) * (x - mu);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

TEST_CASE("special functions against known values") {
  // Symmetric beta: I_0.5(a, a) = 1/2; I_x(1, 1) = x.
  CHECK(incomplete_beta(3.5, 3.5, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(incomplete_beta(1, 1, 0.3) == doctest::Approx(0.3).epsilon(1e-12));
  // t with 1 df is Cauchy: P(T <= 1) = 3/4.
  CHECK(t_cdf(1.0, 1) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(t_quantile(0.975, 1e6) == doctest::Approx(1.959964).epsilon(1e-5));
  // F(2, d2) upper tail is (1 + 2f/d2)^(-d2/2).
  CHECK(f_upper_p(3.0, 2, 10) == doctest::Approx(std::pow(1 + 0.6, -5.0)).epsilon(1e-12));
  CHECK(normal_cdf(0.0) == 0.5);
}

TEST_CASE("pearson examples") {
  auto x = iota(10);
  std::vector<double> y3, neg;
  for (double v : x) {
    y3.push_back(3 * v + 2);
    neg.push_back(-v);
  }
  CHECK(std::abs(pearson(x, y3).r - 1.0) < 1e-12);
  CHECK(pearson(x, y3).p == 0.0);
  CHECK(std::abs(pearson(x, neg).r + 1.0) < 1e-12);
  auto swapped = x;
  std::swap(swapped[2], swapped[6]);
  auto r = pearson(x, swapped);
  CHECK(std::abs(r.r - oracles::pearson(x, swapped)) < 1e-12);
  // Sum of squared rank moves is 2 * 4^2, so r = 1 - 6 * 32 / (10 * 99).
  CHECK(std::abs(r.r - (1.0 - 6.0 * 32 / 990)) < 1e-12);
  CHECK(r.t == doctest::Approx(r.r * std::sqrt(8 / (1 - r.r * r.r))));
  CHECK_FALSE(pearson(x, std::vector<double>(10, 2.0)).defined);
  CHECK_THROWS_AS(pearson({1, 2}, {1, 2}), Error);
}

TEST_CASE("property: pearson of an affine image is exactly the sign") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto x = normals(30, seed);
    for (double a : {2.5, -0.3}) {
      std::vector<double> y;
      for (double v : x) y.push_back(a * v + 7.0);
      CHECK(std::abs(pearson(x, y).r - (a > 0 ? 1.0 : -1.0)) < 1e-12);
    }
  }
}

TEST_CASE("bonferroni") {
  CHECK(bonferroni_threshold(0.05, 40) == doctest::Approx(0.00125).epsilon(1e-15));
  CHECK(bonferroni_threshold(0.05, 1) == 0.05);
  std::vector<double> p(40, 0.5);
  p[0] = 0.002;
  p[1] = 0.001;
  auto flags = bonferroni(p);
  CHECK_FALSE(flags[0]);
  CHECK(flags[1]);
}

TEST_CASE("ols examples") {
  CounterRng rng(3, 3);
  std::vector<double> x1, x2, y;
  // x2 is built orthogonal to x1 and to the constant.
  for (int i = 0; i < 40; ++i) {
    x1.push_back(rng.normal());
    x2.push_back(i % 2 ? 1.0 : -1.0);
  }
  const double m1 = std::accumulate(x1.begin(), x1.end(), 0.0) / 40;
  double dot = 0, nn = 0;
  for (int i = 0; i < 40; ++i) {
    dot += (x1[i] - m1) * x2[i];
    nn += x2[i] * x2[i];
  }
  for (int i = 0; i < 40; ++i) x1[i] -= dot / nn * x2[i];
  for (double v : x1) y.push_back(2.0 * v);
  auto fit = ols_multiple({x1, x2}, y);
  CHECK(fit.r2 == doctest::Approx(1.0));
  CHECK(std::abs(fit.beta[0] - 2.0 * sample_sd(x1)) < 1e-9);
  CHECK(std::abs(fit.beta[1]) < 1e-9);
  CHECK(std::abs(fit.vif[0] - 1.0) < 1e-9);
  CHECK(std::abs(fit.vif[1] - 1.0) < 1e-9);
  CHECK(fit.f_p == doctest::Approx(0.0));
  try {
    ols_multiple({x1, x1}, y, {"commit", "review"});
    FAIL("expected a singular design");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNumeric);
    CHECK(std::string(e.what()).find("review") != std::string::npos);
    CHECK(std::string(e.what()).find("commit") != std::string::npos);
  }
  CHECK_THROWS_AS(ols_multiple({std::vector<double>(40, 1.0)}, y), Error);
  CHECK_THROWS_AS(ols_multiple({{1, 2, 3}, {3, 1, 2}}, {1, 2, 3}), Error);
}

TEST_CASE("ols matches the normal equations and its residuals are orthogonal") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    CounterRng rng(seed, 6);
    const std::size_t n = 200;
    std::vector<std::vector<double>> cols(3, std::vector<double>(n));
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double shared = rng.normal();
      for (auto& c : cols) c[i] = 5.0 + shared + rng.normal() * 2.0;
      y[i] = 1.0 + 0.7 * cols[0][i] - 0.2 * cols[2][i] + rng.normal();
    }
    auto fit = ols_multiple(cols, y);
    auto raw = normal_equation_fit(cols, y);
    for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(fit.beta[j] - raw[j + 1] * sample_sd(cols[j])) < 1e-9);
    double sse = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double pred = raw[0];
      for (std::size_t j = 0; j < 3; ++j) pred += raw[j + 1] * cols[j][i];
      sse += (y[i] - pred) * (y[i] - pred);
    }
    CHECK(std::abs(fit.ss_residual - sse) < 1e-8 * sse);
    for (const auto& c : cols) {
      double d = 0;
      for (std::size_t i = 0; i < n; ++i) d += c[i] * fit.residuals[i];
      CHECK(std::abs(d) <= 1e-8 * n);
    }
    CHECK(fit.adj_r2 <= fit.r2);
    for (double v : fit.vif) CHECK(v >= 1.0);
    // VIF from the inverse correlation matrix.
    std::vector<std::vector<double>> corr(3, std::vector<double>(3));
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = 0; b < 3; ++b) corr[a][b] = oracles::pearson(cols[a], cols[b]);
    for (std::size_t j = 0; j < 3; ++j) {
      std::vector<double> e(3, 0.0);
      e[j] = 1.0;
      CHECK(fit.vif[j] == doctest::Approx(oracles::solve(corr, e)[j]).epsilon(1e-9));
      CHECK(fit.ci_low[j] < fit.beta[j]);
      CHECK(fit.ci_high[j] > fit.beta[j]);
    }
    CHECK(fit.f_p == doctest::Approx(f_upper_p(fit.f, 3, n - 4)));
  }
}

TEST_CASE("ols recovers a planted action corpus") {
  std::array<double, ingest::kActionCount> betas{0.58, 0.43, 0.38, 0, 0, 0, 0, 0};
  auto exact = synth::gen_action_corpus(2000, betas, 0.0, 2);
  std::vector<std::vector<double>> cols(ingest::kActionCount);
  for (const auto& row : exact.counts)
    for (std::size_t j = 0; j < ingest::kActionCount; ++j) cols[j].push_back(row[j]);
  auto fit = ols_multiple(cols, exact.target);
  for (std::size_t j = 0; j < ingest::kActionCount; ++j) CHECK(std::abs(fit.beta[j] - betas[j]) < 1e-6);

  auto null = synth::gen_action_corpus(10000, {}, 1.0, 3);
  cols.assign(ingest::kActionCount, {});
  for (const auto& row : null.counts)
    for (std::size_t j = 0; j < ingest::kActionCount; ++j) cols[j].push_back(row[j]);
  CHECK(ols_multiple(cols, null.target).r2 < 0.02);
}

TEST_CASE("power law fit") {
  CounterRng rng(25, 1);
  std::vector<double> pareto(5000);
  for (auto& x : pareto) x = rng.pareto(2.5, 1.0);
  auto fit = fit_power_law(pareto, 7, {50, 500, 50, 0.1});
  CHECK(fit.alpha >= 2.4);
  CHECK(fit.alpha <= 2.6);
  CHECK(fit.x_min >= 1.0);
  CHECK(fit.p > 0.1);
  CHECK(fit.n_tail >= 500);

  std::vector<double> expo(5000);
  for (auto& x : expo) x = rng.exponential(1.0);
  CHECK(fit_power_law(expo, 7, {50, 500, 50, 0.1}).p < 0.1);

  CHECK_THROWS_AS(fit_power_law({1.0, 2.0}, 1), Error);
  CHECK_THROWS_AS(fit_power_law({1.0, -2.0}, 1), Error);
  auto nob = fit_power_law(pareto, 1, {0, 500, 50, 0.1});
  CHECK(std::isnan(nob.p));
  CHECK(nob.alpha == fit.alpha);
}

TEST_CASE("power law MLE at a fixed x_min matches the closed form") {
  CounterRng rng(5, 2);
  std::vector<double> v(400);
  for (auto& x : v) x = rng.pareto(2.0, 3.0);
  // With every candidate but the minimum excluded, x_min is the sample minimum.
  auto fit = fit_power_law(v, 1, {0, 500, 400, 0.0});
  const double xm = *std::min_element(v.begin(), v.end());
  double s = 0;
  for (double x : v) s += std::log(x / xm);
  CHECK(fit.x_min == xm);
  CHECK(fit.alpha == doctest::Approx(1.0 + 400.0 / s).epsilon(1e-12));
}

TEST_CASE("gini") {
  CHECK(*gini(std::vector<double>(50, 0.1)) == 0.0);
  CHECK(*gini(std::vector<double>(7, 3.3)) == 0.0);
  std::vector<double> one(100, 0.0);
  one[17] = 4.0;
  CHECK(*gini(one) == doctest::Approx(0.99).epsilon(1e-14));
  CHECK_FALSE(gini(std::vector<double>(5, 0.0)).has_value());
  CHECK_THROWS_AS(gini({1.0, -1.0}), Error);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    CounterRng rng(seed, 8);
    std::vector<double> x(101);
    for (auto& v : x) v = rng.pareto(2.2, 1.0);
    const double g = *gini(x);
    CHECK(g == doctest::Approx(gini_pairs(x)).epsilon(1e-12));
    for (double c : {1e-3, 7.0, 1e6}) {
      std::vector<double> y(x);
      for (auto& v : y) v *= c;
      CHECK(std::abs(*gini(y) - g) < 1e-12);
    }
  }
}

TEST_CASE("gini of a large pareto sample approaches 1/(2 alpha - 1)") {
  CounterRng rng(10, 9);
  std::vector<double> x(100000);
  for (auto& v : x) v = rng.pareto(3.0, 1.0);
  // Density exponent 3 is a Lomax/Pareto tail index of 2, whose Gini is 1/(2*2-1).
  CHECK(std::abs(*gini(x) - 1.0 / 3.0) < 0.02);
}

TEST_CASE("mann whitney") {
  auto r = mann_whitney_u({1, 2, 3}, {10, 20, 30});
  CHECK(r.exact);
  CHECK(r.u == 0.0);
  CHECK(r.p == doctest::Approx(0.1).epsilon(1e-14));
  auto same = mann_whitney_u(normals(40, 1), normals(40, 1));
  CHECK(same.u == 800.0);
  CHECK(same.p == doctest::Approx(1.0));
  auto shifted = mann_whitney_u(normals(200, 2), normals(200, 3, 1.0));
  CHECK_FALSE(shifted.exact);
  CHECK(shifted.p < 0.001);
  auto ties = mann_whitney_u({1, 1, 1}, {1, 1});
  CHECK(ties.p == 1.0);
  CHECK_THROWS_AS(mann_whitney_u({}, {1.0}), Error);
}

TEST_CASE("property: mann whitney U plus its mirror is the pair count") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    CounterRng rng(seed, 5);
    std::vector<double> a(3 + seed % 9), b(2 + seed % 5);
    for (auto& v : a) v = std::floor(rng.uniform() * 6);
    for (auto& v : b) v = std::floor(rng.uniform() * 6);
    auto ab = mann_whitney_u(a, b), ba = mann_whitney_u(b, a);
    CHECK(ab.u + ba.u == doctest::Approx(static_cast<double>(a.size() * b.size())));
    CHECK(ab.p == doctest::Approx(ba.p));
    double pairs = 0;
    for (double x : a)
      for (double y : b) pairs += x > y ? 1.0 : x == y ? 0.5 : 0.0;
    CHECK(ab.u == doctest::Approx(pairs));
  }
}

TEST_CASE("influence analysis by construction") {
  stats::ActionTable t;
  CounterRng rng(4, 4);
  std::vector<double> pr;
  for (std::size_t i = 0; i < 60; ++i) {
    t.contributors.push_back(synth::node_names(60)[i]);
    std::array<double, ingest::kActionCount> row;
    for (auto& v : row) v = static_cast<double>(rng.poisson(5.0));
    t.totals.push_back(row);
    pr.push_back(0.01 * row[static_cast<std::size_t>(ingest::Action::kPullRequestOpen)]);
  }
  auto a = action_influence_analysis(t, {{"pagerank", pr}, {"degree", normals(60, 8)}});
  CHECK(a.correlations.comparisons == 16);
  CHECK(a.correlations.threshold == doctest::Approx(0.05 / 16));
  const CorrelationEntry* best = nullptr;
  for (const auto& e : a.correlations.entries)
    if (e.metric == "pagerank" && (!best || e.result.r > best->result.r)) best = &e;
  CHECK(best->action == "pull_request_open");
  CHECK(best->significant);
  REQUIRE(a.regression.has_value());
  std::size_t argmax = 0;
  for (std::size_t j = 1; j < ingest::kActionCount; ++j)
    if (a.regression->beta[j] > a.regression->beta[argmax]) argmax = j;
  CHECK(argmax == static_cast<std::size_t>(ingest::Action::kPullRequestOpen));

  for (auto& row : t.totals) row.fill(2.0);
  auto flat = action_influence_analysis(t, {{"pagerank", pr}});
  for (const auto& e : flat.correlations.entries) CHECK_FALSE(e.result.defined);
  CHECK_FALSE(flat.regression.has_value());
  CHECK(flat.regression_error.find("constant") != std::string::npos);
}
