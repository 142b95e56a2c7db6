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

#include "collabnet/neural.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numeric>

#include "collabnet/cohesion.hpp"
#include "collabnet/rng.hpp"

namespace collabnet::neural {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using nlohmann::json;

namespace {

using Index = Eigen::Index;

Index ix(std::size_t v) { return static_cast<Index>(v); }

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

void fill_uniform(double* p, std::size_t n, double bound, CounterRng& rng) {
  for (std::size_t k = 0; k < n; ++k) p[k] = (2.0 * rng.uniform() - 1.0) * bound;
}

json null_if_nan(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

Adam::Adam(std::size_t size, double learning_rate, double beta1, double beta2, double eps)
    : lr_(learning_rate), b1_(beta1), b2_(beta2), eps_(eps), m_(VectorXd::Zero(ix(size))), v_(VectorXd::Zero(ix(size))) {}

void Adam::step(VectorXd& params, const VectorXd& grad) {
  ++t_;
  m_ = b1_ * m_ + (1.0 - b1_) * grad;
  v_ = b2_ * v_ + (1.0 - b2_) * grad.cwiseProduct(grad);
  const double c1 = 1.0 - std::pow(b1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(b2_, static_cast<double>(t_));
  for (Index k = 0; k < params.size(); ++k) params(k) -= lr_ * (m_(k) / c1) / (std::sqrt(v_(k) / c2) + eps_);
}

void write_train_curve(const TrainReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  out << "epoch,loss\n";
  for (std::size_t e = 0; e < report.loss.size(); ++e) out << e + 1 << ',' << format_real(report.loss[e]) << '\n';
}

void write_checkpoint(const std::filesystem::path& stem, const std::string& model, const std::vector<Tensor>& layout,
                      const VectorXd& params, const json& config) {
  static_assert(std::endian::native == std::endian::little, "checkpoints are written little-endian");
  auto bin = stem;
  bin += ".bin";
  auto meta = stem;
  meta += ".json";
  std::ofstream out(bin, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write " + bin.string());
  out.write(reinterpret_cast<const char*>(params.data()), static_cast<std::streamsize>(sizeof(double) * params.size()));
  json tensors = json::array();
  for (const auto& t : layout) tensors.push_back({{"name", t.name}, {"shape", t.shape}, {"offset", t.offset}});
  json manifest = {{"model", model},
                   {"dtype", "float64"},
                   {"byte_order", "little"},
                   {"order", "column-major"},
                   {"size", params.size()},
                   {"tensors", tensors},
                   {"config", config}};
  std::ofstream m(meta, std::ios::binary);
  if (!m) fail(ErrorCode::kIo, "cannot write " + meta.string());
  m << manifest.dump(2) << '\n';
}

VectorXd read_checkpoint(const std::filesystem::path& stem, std::vector<Tensor>* layout) {
  auto bin = stem;
  bin += ".bin";
  auto meta = stem;
  meta += ".json";
  std::ifstream m(meta);
  if (!m) fail(ErrorCode::kIo, "cannot read " + meta.string());
  json manifest;
  try {
    manifest = json::parse(m);
  } catch (const json::exception& e) {
    fail(ErrorCode::kParse, meta.string() + ": " + e.what());
  }
  const auto size = manifest.at("size").get<std::size_t>();
  VectorXd params(ix(size));
  std::ifstream in(bin, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot read " + bin.string());
  in.read(reinterpret_cast<char*>(params.data()), static_cast<std::streamsize>(sizeof(double) * size));
  require(in.gcount() == static_cast<std::streamsize>(sizeof(double) * size), ErrorCode::kParse,
          bin.string() + " is shorter than its manifest");
  if (layout) {
    layout->clear();
    for (const auto& t : manifest.at("tensors"))
      layout->push_back({t.at("name").get<std::string>(), t.at("shape").get<std::vector<std::size_t>>(),
                         t.at("offset").get<std::size_t>()});
  }
  return params;
}

// ---------------------------------------------------------------- LSTM

namespace {

std::size_t lstm_size(std::size_t h) { return 4 * h * (h + 1) + 4 * h + h + 1; }

}  // namespace

LstmParams LstmParams::zeros(std::size_t hidden) {
  require(hidden >= 1, ErrorCode::kConfig, "lstm hidden size must be positive");
  return {hidden, VectorXd::Zero(ix(lstm_size(hidden)))};
}

LstmParams LstmParams::init(std::size_t hidden, std::uint64_t seed) {
  LstmParams p = zeros(hidden);
  CounterRng rng(seed, fnv1a64("neural.lstm.init"));
  const std::size_t gates = 4 * hidden * (hidden + 1) + 4 * hidden;
  fill_uniform(p.flat.data(), gates, 1.0 / std::sqrt(static_cast<double>(hidden + 1)), rng);
  fill_uniform(p.flat.data() + gates, hidden + 1, 1.0 / std::sqrt(static_cast<double>(hidden)), rng);
  return p;
}

Eigen::Map<MatrixXd> LstmParams::w() { return {flat.data(), ix(4 * hidden), ix(hidden + 1)}; }
Eigen::Map<const MatrixXd> LstmParams::w() const { return {flat.data(), ix(4 * hidden), ix(hidden + 1)}; }
Eigen::Map<VectorXd> LstmParams::b() { return {flat.data() + 4 * hidden * (hidden + 1), ix(4 * hidden)}; }
Eigen::Map<const VectorXd> LstmParams::b() const { return {flat.data() + 4 * hidden * (hidden + 1), ix(4 * hidden)}; }
Eigen::Map<VectorXd> LstmParams::head() { return {flat.data() + 4 * hidden * (hidden + 2), ix(hidden)}; }
Eigen::Map<const VectorXd> LstmParams::head() const { return {flat.data() + 4 * hidden * (hidden + 2), ix(hidden)}; }
double& LstmParams::head_bias() { return flat(flat.size() - 1); }
double LstmParams::head_bias() const { return flat(flat.size() - 1); }

std::vector<Tensor> LstmParams::layout() const {
  const std::size_t h = hidden;
  return {{"gate_weights", {4 * h, h + 1}, 0},
          {"gate_bias", {4 * h}, 4 * h * (h + 1)},
          {"head_weights", {h}, 4 * h * (h + 2)},
          {"head_bias", {1}, 4 * h * (h + 2) + h}};
}

VectorXd lstm_forward(const LstmParams& p, const MatrixXd& x, LstmCache* cache) {
  require(x.allFinite(), ErrorCode::kInvalidArgument, "lstm input contains NaN or Inf");
  const Index h = ix(p.hidden), batch = x.rows(), steps = x.cols();
  const auto w = p.w();
  const auto b = p.b();
  MatrixXd hs = MatrixXd::Zero(h, batch), cs = MatrixXd::Zero(h, batch);
  if (cache) {
    cache->x = x;
    for (auto* v : {&cache->f, &cache->i, &cache->g, &cache->o, &cache->c, &cache->tc, &cache->h}) v->clear();
    cache->c.push_back(cs);
    cache->h.push_back(hs);
  }
  for (Index t = 0; t < steps; ++t) {
    MatrixXd z = w.leftCols(h) * hs + w.col(h) * x.col(t).transpose();
    z.colwise() += b;
    MatrixXd f = z.topRows(h).unaryExpr(&sigmoid);
    MatrixXd in = z.middleRows(h, h).unaryExpr(&sigmoid);
    MatrixXd g = z.middleRows(2 * h, h).array().tanh();
    MatrixXd o = z.bottomRows(h).unaryExpr(&sigmoid);
    cs = f.cwiseProduct(cs) + in.cwiseProduct(g);
    MatrixXd tc = cs.array().tanh();
    hs = o.cwiseProduct(tc);
    if (cache) {
      cache->f.push_back(std::move(f));
      cache->i.push_back(std::move(in));
      cache->g.push_back(std::move(g));
      cache->o.push_back(std::move(o));
      cache->c.push_back(cs);
      cache->tc.push_back(std::move(tc));
      cache->h.push_back(hs);
    }
  }
  VectorXd pred = hs.transpose() * p.head();
  pred.array() += p.head_bias();
  return pred;
}

double lstm_loss(const LstmParams& p, const MatrixXd& x, const VectorXd& y, VectorXd* grad) {
  require(y.size() == x.rows() && x.rows() > 0, ErrorCode::kInvalidArgument, "lstm batch shape mismatch");
  LstmCache cache;
  const VectorXd pred = lstm_forward(p, x, grad ? &cache : nullptr);
  const VectorXd err = pred - y;
  const double n = static_cast<double>(y.size());
  const double loss = err.squaredNorm() / n;
  if (!grad) return loss;

  const Index h = ix(p.hidden), steps = x.cols();
  LstmParams g = LstmParams::zeros(p.hidden);
  const VectorXd dpred = 2.0 * err / n;
  const MatrixXd& h_last = cache.h.back();
  g.head() = h_last * dpred;
  g.head_bias() = dpred.sum();
  MatrixXd dh = p.head() * dpred.transpose();
  MatrixXd dc = MatrixXd::Zero(h, x.rows());
  auto gw = g.w();
  auto gb = g.b();
  const auto w = p.w();
  MatrixXd dz(4 * h, x.rows());
  for (Index t = steps - 1; t >= 0; --t) {
    const auto st = static_cast<std::size_t>(t);
    const MatrixXd& f = cache.f[st];
    const MatrixXd& in = cache.i[st];
    const MatrixXd& gg = cache.g[st];
    const MatrixXd& o = cache.o[st];
    const MatrixXd& tc = cache.tc[st];
    const MatrixXd& c_prev = cache.c[st];
    const MatrixXd& h_prev = cache.h[st];
    dc += dh.cwiseProduct(o).cwiseProduct((1.0 - tc.array().square()).matrix());
    dz.topRows(h) = dc.cwiseProduct(c_prev).cwiseProduct(f.cwiseProduct((1.0 - f.array()).matrix()));
    dz.middleRows(h, h) = dc.cwiseProduct(gg).cwiseProduct(in.cwiseProduct((1.0 - in.array()).matrix()));
    dz.middleRows(2 * h, h) = dc.cwiseProduct(in).cwiseProduct((1.0 - gg.array().square()).matrix());
    dz.bottomRows(h) = dh.cwiseProduct(tc).cwiseProduct(o.cwiseProduct((1.0 - o.array()).matrix()));
    gw.leftCols(h) += dz * h_prev.transpose();
    gw.col(h) += dz * x.col(t);
    gb += dz.rowwise().sum();
    dh = w.leftCols(h).transpose() * dz;
    dc = dc.cwiseProduct(f);
  }
  *grad = std::move(g.flat);
  return loss;
}

LstmDataset lstm_dataset(const std::vector<temporal::ActivitySeries>& series, std::size_t window,
                         double holdout_fraction) {
  require(window >= 1, ErrorCode::kConfig, "lstm window must be positive");
  require(holdout_fraction >= 0 && holdout_fraction < 1, ErrorCode::kConfig, "holdout fraction must be in [0,1)");
  LstmDataset d;
  std::vector<std::vector<double>> rows;
  std::vector<double> ys;
  for (const auto& s : series) {
    if (s.values.size() < window + 1) {
      ++d.excluded_short;
      continue;
    }
    const std::size_t idx = d.contributors.size();
    d.contributors.push_back(s.contributor);
    const double mu = s.mean();
    const double sd = s.stddev();
    const double scale = sd > 1e-12 * std::max(1.0, std::abs(mu)) ? sd : 1.0;
    d.mean.push_back(mu);
    d.scale.push_back(scale);
    const std::size_t samples = s.values.size() - window;
    std::size_t held = static_cast<std::size_t>(std::llround(holdout_fraction * static_cast<double>(samples)));
    if (holdout_fraction > 0) held = std::clamp<std::size_t>(held, 1, samples);
    for (std::size_t k = 0; k < samples; ++k) {
      std::vector<double> row(window);
      for (std::size_t t = 0; t < window; ++t) row[t] = (s.values[k + t] - mu) / scale;
      rows.push_back(std::move(row));
      ys.push_back((s.values[k + window] - mu) / scale);
      d.series.push_back(idx);
      d.test.push_back(k + held >= samples && held > 0 ? 1 : 0);
    }
  }
  d.x.resize(ix(rows.size()), ix(window));
  d.y.resize(ix(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t t = 0; t < window; ++t) d.x(ix(r), ix(t)) = rows[r][t];
    d.y(ix(r)) = ys[r];
  }
  return d;
}

namespace {

MatrixXd take_rows(const MatrixXd& m, const std::vector<std::size_t>& rows) {
  MatrixXd out(ix(rows.size()), m.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) out.row(ix(r)) = m.row(ix(rows[r]));
  return out;
}

VectorXd take(const VectorXd& v, const std::vector<std::size_t>& rows) {
  VectorXd out(ix(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) out(ix(r)) = v(ix(rows[r]));
  return out;
}

}  // namespace

LstmModel lstm_train(const LstmConfig& config, const LstmDataset& data, std::uint64_t seed) {
  require(config.hidden >= 1 && config.batch >= 1 && config.epochs >= 1 && config.learning_rate > 0,
          ErrorCode::kConfig, "lstm hidden, batch, epochs and learning rate must be positive");
  require(static_cast<std::size_t>(data.x.cols()) == config.window, ErrorCode::kConfig,
          "dataset window does not match the lstm config");
  std::vector<std::size_t> train, test;
  for (std::size_t r = 0; r < data.test.size(); ++r) (data.test[r] ? test : train).push_back(r);
  require(!train.empty(), ErrorCode::kInvalidArgument, "lstm dataset has no training samples");

  LstmModel model{config, LstmParams::init(config.hidden, seed), {}};
  model.report.model = "lstm";
  model.report.seed = seed;
  Adam adam(static_cast<std::size_t>(model.params.flat.size()), config.learning_rate);
  CounterRng order_rng(seed, fnv1a64("neural.lstm.order"));
  VectorXd grad;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    order_rng.shuffle(std::span<std::size_t>(train));
    double total = 0.0;
    for (std::size_t start = 0; start < train.size(); start += config.batch) {
      std::vector<std::size_t> rows(train.begin() + static_cast<std::ptrdiff_t>(start),
                                    train.begin() + static_cast<std::ptrdiff_t>(std::min(train.size(), start + config.batch)));
      const double loss = lstm_loss(model.params, take_rows(data.x, rows), take(data.y, rows), &grad);
      total += loss * static_cast<double>(rows.size());
      adam.step(model.params.flat, grad);
    }
    model.report.loss.push_back(total / static_cast<double>(train.size()));
  }

  json m = {{"train_samples", train.size()}, {"test_samples", test.size()}, {"excluded_short", data.excluded_short}};
  if (!test.empty()) {
    const VectorXd pred = lstm_forward(model.params, take_rows(data.x, test));
    double ape = 0.0, mse = 0.0;
    std::size_t counted = 0, tp = 0, fp = 0, fn = 0;
    for (std::size_t k = 0; k < test.size(); ++k) {
      const std::size_t r = test[k];
      const std::size_t s = data.series[r];
      const double yz = data.y(ix(r)), pz = pred(ix(k));
      mse += (pz - yz) * (pz - yz);
      const double actual = data.mean[s] + data.scale[s] * yz;
      const double predicted = data.mean[s] + data.scale[s] * pz;
      if (std::abs(actual) > 1e-12) {
        ape += std::abs(predicted - actual) / std::abs(actual);
        ++counted;
      }
      const bool real = yz > 2.0, called = pz > 2.0;
      tp += real && called;
      fp += !real && called;
      fn += real && !called;
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    m["mape"] = null_if_nan(counted ? ape / static_cast<double>(counted) : nan);
    m["mape_samples"] = counted;
    m["test_mse"] = mse / static_cast<double>(test.size());
    m["burst_precision"] = null_if_nan(tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : nan);
    m["burst_recall"] = null_if_nan(tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : nan);
    m["burst_events"] = tp + fn;
  }
  model.report.metrics = std::move(m);
  return model;
}

// ---------------------------------------------------------------- GCN

namespace {

struct GcnOffsets {
  std::size_t w0, b0, w1, b1, w2, b2, size;
};

GcnOffsets offsets_of(const GcnConfig& c) {
  GcnOffsets o{};
  o.w0 = 0;
  o.b0 = o.w0 + c.features * c.hidden;
  o.w1 = o.b0 + c.hidden;
  o.b1 = o.w1 + c.hidden * c.hidden;
  o.w2 = o.b1 + c.hidden;
  o.b2 = o.w2 + c.hidden * c.classes;
  o.size = o.b2 + c.classes;
  return o;
}

void check_config(const GcnConfig& c) {
  require(c.features == 3, ErrorCode::kConfig, "gcn expects 3 input features, got " + std::to_string(c.features));
  require(c.hidden >= 1 && c.classes >= 2 && c.epochs >= 1 && c.learning_rate > 0, ErrorCode::kConfig,
          "gcn hidden, classes, epochs and learning rate must be positive");
  require(c.dropout >= 0 && c.dropout < 1, ErrorCode::kConfig, "gcn dropout must be in [0,1)");
}

// out = in * W + b with W column-major (k x m). Each row is computed on its own
// with k ascending, so a row's result never depends on where the row sits.
MatrixXd affine_rows(const MatrixXd& in, const double* w, const double* b, std::size_t m) {
  const Index n = in.rows(), k = in.cols();
  MatrixXd out(n, ix(m));
  for (Index i = 0; i < n; ++i)
    for (Index c = 0; c < ix(m); ++c) {
      double s = 0.0;
      for (Index j = 0; j < k; ++j) s += in(i, j) * w[j + c * k];
      out(i, c) = s + b[c];
    }
  return out;
}

// Neighbourhood sum A_hat * h. Each output entry sums its terms in sorted
// order, so relabelling the nodes permutes the result bit for bit.
MatrixXd aggregate(const NormalizedAdjacency& adj, const MatrixXd& h) {
  MatrixXd out(h.rows(), h.cols());
  std::vector<double> terms;
  for (std::size_t i = 0; i < adj.nodes(); ++i)
    for (Index c = 0; c < h.cols(); ++c) {
      terms.clear();
      for (std::size_t e = adj.offsets[i]; e < adj.offsets[i + 1]; ++e) terms.push_back(adj.values[e] * h(ix(adj.targets[e]), c));
      std::sort(terms.begin(), terms.end());
      double s = 0.0;
      for (double t : terms) s += t;
      out(ix(i), c) = s;
    }
  return out;
}

// A_hat is symmetric, so the adjoint of aggregate is aggregate itself; the
// backward pass does not need the canonical order.
MatrixXd aggregate_plain(const NormalizedAdjacency& adj, const MatrixXd& g) {
  MatrixXd out = MatrixXd::Zero(g.rows(), g.cols());
  for (std::size_t i = 0; i < adj.nodes(); ++i)
    for (std::size_t e = adj.offsets[i]; e < adj.offsets[i + 1]; ++e) out.row(ix(i)) += adj.values[e] * g.row(ix(adj.targets[e]));
  return out;
}

struct GcnPass {
  MatrixXd a0, z0, d0, a1, z1, h1, logits;
};

GcnPass run_gcn(const GcnParams& p, const NormalizedAdjacency& adj, const MatrixXd& x, const MatrixXd* mask) {
  const GcnConfig& c = p.config;
  check_config(c);
  require(static_cast<std::size_t>(x.cols()) == c.features, ErrorCode::kConfig,
          "feature matrix has " + std::to_string(x.cols()) + " columns, expected " + std::to_string(c.features));
  require(static_cast<std::size_t>(x.rows()) == adj.nodes() && adj.nodes() > 0, ErrorCode::kInvalidArgument,
          "feature rows must match a non-empty graph");
  const auto o = offsets_of(c);
  const double* w = p.flat.data();
  GcnPass r;
  r.a0 = aggregate(adj, x);
  r.z0 = affine_rows(r.a0, w + o.w0, w + o.b0, c.hidden);
  r.d0 = r.z0.cwiseMax(0.0);
  if (mask) r.d0 = r.d0.cwiseProduct(*mask);
  r.a1 = aggregate(adj, r.d0);
  r.z1 = affine_rows(r.a1, w + o.w1, w + o.b1, c.hidden);
  r.h1 = r.z1.cwiseMax(0.0);
  r.logits = affine_rows(r.h1, w + o.w2, w + o.b2, c.classes);
  return r;
}

MatrixXd dropout_mask(std::size_t n, std::size_t h, double rate, CounterRng& rng) {
  MatrixXd m(ix(n), ix(h));
  const double keep = 1.0 / (1.0 - rate);
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) m(i, j) = rng.uniform() < rate ? 0.0 : keep;
  return m;
}

}  // namespace

GcnParams GcnParams::init(const GcnConfig& config, std::uint64_t seed) {
  check_config(config);
  const auto o = offsets_of(config);
  GcnParams p{config, VectorXd::Zero(ix(o.size))};
  CounterRng rng(seed, fnv1a64("neural.gcn.init"));
  double* w = p.flat.data();
  const double f0 = 1.0 / std::sqrt(static_cast<double>(config.features));
  const double f1 = 1.0 / std::sqrt(static_cast<double>(config.hidden));
  fill_uniform(w + o.w0, o.w1 - o.w0, f0, rng);
  fill_uniform(w + o.w1, o.w2 - o.w1, f1, rng);
  fill_uniform(w + o.w2, o.size - o.w2, f1, rng);
  return p;
}

std::vector<Tensor> GcnParams::layout() const {
  const auto o = offsets_of(config);
  const auto& c = config;
  return {{"w0", {c.features, c.hidden}, o.w0}, {"b0", {c.hidden}, o.b0},
          {"w1", {c.hidden, c.hidden}, o.w1},   {"b1", {c.hidden}, o.b1},
          {"w2", {c.hidden, c.classes}, o.w2},  {"b2", {c.classes}, o.b2}};
}

NormalizedAdjacency normalized_adjacency(const graph::TemporalGraph& g) {
  NormalizedAdjacency a;
  const std::size_t n = g.node_count();
  a.offsets.push_back(0);
  for (NodeId i = 0; i < n; ++i) {
    const double di = static_cast<double>(g.degree(i) + 1);
    a.targets.push_back(i);
    a.values.push_back(1.0 / di);
    for (NodeId j : g.neighbors(i)) {
      a.targets.push_back(j);
      a.values.push_back(1.0 / std::sqrt(di * static_cast<double>(g.degree(j) + 1)));
    }
    a.offsets.push_back(a.targets.size());
  }
  return a;
}

MatrixXd gcn_features(const graph::TemporalGraph& g) {
  const std::size_t n = g.node_count();
  const auto deg = centrality::degree_centrality(g);
  const auto clust = cohesion::local_clustering(g);
  MatrixXd x(ix(n), 3);
  for (std::size_t i = 0; i < n; ++i) {
    x(ix(i), 0) = deg.values[i];
    x(ix(i), 1) = clust.values[i];
    x(ix(i), 2) = static_cast<double>(g.degree(static_cast<NodeId>(i)));
  }
  for (Index c = 0; c < 3; ++c) {
    const double mu = x.col(c).mean();
    const double sd = std::sqrt((x.col(c).array() - mu).square().mean());
    if (sd > 1e-12 * std::max(1.0, std::abs(mu)))
      x.col(c) = (x.col(c).array() - mu) / sd;
    else
      x.col(c).setZero();
  }
  return x;
}

MatrixXd gcn_forward(const GcnParams& p, const NormalizedAdjacency& adj, const MatrixXd& x, const MatrixXd* mask) {
  return run_gcn(p, adj, x, mask).logits;
}

MatrixXd softmax_rows(const MatrixXd& logits) {
  MatrixXd out(logits.rows(), logits.cols());
  for (Index i = 0; i < logits.rows(); ++i) {
    const double mx = logits.row(i).maxCoeff();
    double s = 0.0;
    for (Index c = 0; c < logits.cols(); ++c) s += (out(i, c) = std::exp(logits(i, c) - mx));
    out.row(i) /= s;
  }
  return out;
}

double gcn_loss(const GcnParams& p, const NormalizedAdjacency& adj, const MatrixXd& x, const std::vector<int>& labels,
                const std::vector<NodeId>& nodes, const MatrixXd* mask, VectorXd* grad) {
  require(labels.size() == adj.nodes(), ErrorCode::kInvalidArgument, "one label per node is required");
  require(!nodes.empty(), ErrorCode::kInvalidArgument, "gcn loss needs at least one node");
  const GcnPass r = run_gcn(p, adj, x, mask);
  const GcnConfig& c = p.config;
  const MatrixXd prob = softmax_rows(r.logits);
  const double inv = 1.0 / static_cast<double>(nodes.size());
  double loss = 0.0;
  MatrixXd dlogits = MatrixXd::Zero(r.logits.rows(), r.logits.cols());
  for (NodeId i : nodes) {
    const int y = labels[i];
    require(y >= 0 && static_cast<std::size_t>(y) < c.classes, ErrorCode::kInvalidArgument, "label out of range");
    const double mx = r.logits.row(ix(i)).maxCoeff();
    const double lse = mx + std::log((r.logits.row(ix(i)).array() - mx).exp().sum());
    loss += (lse - r.logits(ix(i), y)) * inv;
    dlogits.row(ix(i)) = prob.row(ix(i)) * inv;
    dlogits(ix(i), y) -= inv;
  }
  if (!grad) return loss;

  const auto o = offsets_of(c);
  const double* w = p.flat.data();
  Eigen::Map<const MatrixXd> w1(w + o.w1, ix(c.hidden), ix(c.hidden));
  Eigen::Map<const MatrixXd> w2(w + o.w2, ix(c.hidden), ix(c.classes));
  VectorXd g = VectorXd::Zero(ix(o.size));
  Eigen::Map<MatrixXd>(g.data() + o.w2, ix(c.hidden), ix(c.classes)) = r.h1.transpose() * dlogits;
  Eigen::Map<VectorXd>(g.data() + o.b2, ix(c.classes)) = dlogits.colwise().sum().transpose();
  MatrixXd dz1 = (dlogits * w2.transpose()).cwiseProduct((r.z1.array() > 0).cast<double>().matrix());
  Eigen::Map<MatrixXd>(g.data() + o.w1, ix(c.hidden), ix(c.hidden)) = r.a1.transpose() * dz1;
  Eigen::Map<VectorXd>(g.data() + o.b1, ix(c.hidden)) = dz1.colwise().sum().transpose();
  MatrixXd dd0 = aggregate_plain(adj, dz1 * w1.transpose());
  if (mask) dd0 = dd0.cwiseProduct(*mask);
  MatrixXd dz0 = dd0.cwiseProduct((r.z0.array() > 0).cast<double>().matrix());
  Eigen::Map<MatrixXd>(g.data() + o.w0, ix(c.features), ix(c.hidden)) = r.a0.transpose() * dz0;
  Eigen::Map<VectorXd>(g.data() + o.b0, ix(c.hidden)) = dz0.colwise().sum().transpose();
  *grad = std::move(g);
  return loss;
}

Split stratified_split(const std::vector<int>& labels, std::size_t classes, double train_fraction, double val_fraction,
                       std::uint64_t seed) {
  require(train_fraction > 0 && val_fraction >= 0 && train_fraction + val_fraction < 1, ErrorCode::kConfig,
          "split fractions must leave room for a test set");
  std::vector<std::vector<NodeId>> by_class(classes);
  for (NodeId i = 0; i < labels.size(); ++i) {
    require(labels[i] >= 0 && static_cast<std::size_t>(labels[i]) < classes, ErrorCode::kInvalidArgument,
            "label out of range");
    by_class[static_cast<std::size_t>(labels[i])].push_back(i);
  }
  Split s;
  CounterRng rng(seed, fnv1a64("neural.gcn.split"));
  for (std::size_t k = 0; k < classes; ++k) {
    auto& members = by_class[k];
    if (members.empty()) continue;
    rng.shuffle(std::span<NodeId>(members));
    const auto m = static_cast<double>(members.size());
    const auto n_train = static_cast<std::size_t>(std::llround(train_fraction * m));
    const auto n_val = std::min(members.size() - n_train, static_cast<std::size_t>(std::llround(val_fraction * m)));
    require(n_train > 0, ErrorCode::kInvalidArgument,
            "class " + std::to_string(k) + " has no node in the training split");
    s.train.insert(s.train.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(n_train));
    s.val.insert(s.val.end(), members.begin() + static_cast<std::ptrdiff_t>(n_train),
                 members.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
    s.test.insert(s.test.end(), members.begin() + static_cast<std::ptrdiff_t>(n_train + n_val), members.end());
  }
  for (auto* v : {&s.train, &s.val, &s.test}) std::sort(v->begin(), v->end());
  return s;
}

namespace {

json classification_metrics(const MatrixXd& logits, const std::vector<int>& labels, const std::vector<NodeId>& nodes,
                            std::size_t classes) {
  std::vector<std::size_t> tp(classes, 0), fp(classes, 0), fn(classes, 0);
  std::vector<char> present(classes, 0);
  for (int y : labels) present[static_cast<std::size_t>(y)] = 1;
  std::size_t correct = 0;
  for (NodeId i : nodes) {
    Index best = 0;
    logits.row(ix(i)).maxCoeff(&best);
    const auto pred = static_cast<std::size_t>(best);
    const auto y = static_cast<std::size_t>(labels[i]);
    if (pred == y) {
      ++correct;
      ++tp[y];
    } else {
      ++fp[pred];
      ++fn[y];
    }
  }
  json per = json::array();
  double macro = 0.0;
  std::size_t counted = 0;
  for (std::size_t k = 0; k < classes; ++k) {
    const double denom = static_cast<double>(2 * tp[k] + fp[k] + fn[k]);
    const double f1 = denom > 0 ? 2.0 * static_cast<double>(tp[k]) / denom : 0.0;
    per.push_back(present[k] ? json(f1) : json(nullptr));
    if (present[k]) {
      macro += f1;
      ++counted;
    }
  }
  return {{"accuracy", nodes.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(nodes.size())},
          {"macro_f1", counted ? macro / static_cast<double>(counted) : 0.0},
          {"per_class_f1", per},
          {"nodes", nodes.size()}};
}

}  // namespace

GcnModel gcn_train(const GcnConfig& config, const NormalizedAdjacency& adj, const MatrixXd& x,
                   const std::vector<int>& labels, std::uint64_t seed) {
  GcnModel model{GcnParams::init(config, seed), stratified_split(labels, config.classes, config.train_fraction,
                                                                 config.val_fraction, seed),
                 {}};
  model.report.model = "gcn";
  model.report.seed = seed;
  Adam adam(static_cast<std::size_t>(model.params.flat.size()), config.learning_rate);
  CounterRng drop_rng(seed, fnv1a64("neural.gcn.dropout"));
  VectorXd grad;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    MatrixXd mask = dropout_mask(adj.nodes(), config.hidden, config.dropout, drop_rng);
    model.report.loss.push_back(gcn_loss(model.params, adj, x, labels, model.split.train, &mask, &grad));
    adam.step(model.params.flat, grad);
  }
  const MatrixXd logits = gcn_forward(model.params, adj, x);
  json m = classification_metrics(logits, labels, model.split.test, config.classes);
  m["train_accuracy"] = classification_metrics(logits, labels, model.split.train, config.classes)["accuracy"];
  m["val_accuracy"] = classification_metrics(logits, labels, model.split.val, config.classes)["accuracy"];
  model.report.metrics = std::move(m);
  return model;
}

}  // namespace collabnet::neural
