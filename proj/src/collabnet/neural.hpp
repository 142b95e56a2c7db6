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

// LSTM next-quarter activity predictor and two-layer GCN role classifier.
// Parameters live in one flat vector per model so that the optimiser,
// checkpoints and finite-difference checks all see the same layout.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "collabnet/graph.hpp"
#include "collabnet/temporal.hpp"

namespace collabnet::neural {

/// Adam with bias correction.
class Adam {
 public:
  Adam(std::size_t size, double learning_rate, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);
  void step(Eigen::VectorXd& params, const Eigen::VectorXd& grad);

 private:
  double lr_, b1_, b2_, eps_;
  std::size_t t_ = 0;
  Eigen::VectorXd m_, v_;
};

struct Tensor {
  std::string name;
  std::vector<std::size_t> shape;
  std::size_t offset = 0;  // into the flat vector
};

struct TrainReport {
  std::string model;
  std::uint64_t seed = 0;
  std::vector<double> loss;  // one entry per epoch
  nlohmann::json metrics;
};

void write_train_curve(const TrainReport& report, const std::filesystem::path& path);

/// <stem>.bin holds the parameters as little-endian float64; <stem>.json the tensor layout.
void write_checkpoint(const std::filesystem::path& stem, const std::string& model, const std::vector<Tensor>& layout,
                      const Eigen::VectorXd& params, const nlohmann::json& config);
Eigen::VectorXd read_checkpoint(const std::filesystem::path& stem, std::vector<Tensor>* layout = nullptr);

// ---------------------------------------------------------------- LSTM

struct LstmConfig {
  std::size_t window = 5;
  std::size_t hidden = 64;
  double learning_rate = 0.01;
  std::size_t batch = 32;
  std::size_t epochs = 100;
  double holdout_fraction = 0.2;  // latest samples of each contributor
};

/// Gate weights act on [h_{t-1}, x_t]; rows are stacked forget, input, candidate, output.
struct LstmParams {
  std::size_t hidden = 0;
  Eigen::VectorXd flat;

  static LstmParams zeros(std::size_t hidden);
  /// Uniform in +-1/sqrt(fan_in).
  static LstmParams init(std::size_t hidden, std::uint64_t seed);

  Eigen::Map<Eigen::MatrixXd> w();  // 4H x (H + 1)
  Eigen::Map<const Eigen::MatrixXd> w() const;
  Eigen::Map<Eigen::VectorXd> b();  // 4H
  Eigen::Map<const Eigen::VectorXd> b() const;
  Eigen::Map<Eigen::VectorXd> head();  // H
  Eigen::Map<const Eigen::VectorXd> head() const;
  double& head_bias();
  double head_bias() const;

  std::vector<Tensor> layout() const;
};

struct LstmCache {
  Eigen::MatrixXd x;                   // B x T
  std::vector<Eigen::MatrixXd> f, i, g, o, c, tc, h;  // H x B; c and h hold T + 1 states
};

/// x is batch x time. Returns one prediction per row. Throws on non-finite input.
Eigen::VectorXd lstm_forward(const LstmParams& params, const Eigen::MatrixXd& x, LstmCache* cache = nullptr);

/// Mean squared error over the batch; fills grad (same layout as params.flat) when given.
double lstm_loss(const LstmParams& params, const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                 Eigen::VectorXd* grad = nullptr);

struct LstmDataset {
  Eigen::MatrixXd x;  // samples x window, standardised per contributor
  Eigen::VectorXd y;
  std::vector<std::size_t> series;  // sample -> contributor index
  std::vector<char> test;
  std::vector<std::string> contributors;
  std::vector<double> mean;   // per contributor, population
  std::vector<double> scale;  // per contributor; 1 when the series is constant
  std::size_t excluded_short = 0;
};

/// Sliding windows of `window` quarters predicting the next one. Series shorter
/// than window + 1 are excluded.
LstmDataset lstm_dataset(const std::vector<temporal::ActivitySeries>& series, std::size_t window,
                         double holdout_fraction);

struct LstmModel {
  LstmConfig config;
  LstmParams params;
  TrainReport report;
};

/// Metrics on the held-out samples: MAPE on the original scale (zero targets
/// skipped), and burst precision/recall where a burst is a standardised value above 2.
LstmModel lstm_train(const LstmConfig& config, const LstmDataset& data, std::uint64_t seed);

// ---------------------------------------------------------------- GCN

struct GcnConfig {
  std::size_t features = 3;
  std::size_t hidden = 64;
  std::size_t classes = 5;
  double dropout = 0.3;
  double learning_rate = 0.01;
  std::size_t epochs = 50;
  double train_fraction = 0.7;
  double val_fraction = 0.15;
};

/// Two graph convolutions (features -> hidden -> hidden, ReLU) and a linear class head.
struct GcnParams {
  GcnConfig config;
  Eigen::VectorXd flat;

  static GcnParams init(const GcnConfig& config, std::uint64_t seed);
  std::vector<Tensor> layout() const;
};

/// D^-1/2 (A + I) D^-1/2 over the unweighted structure, rows in CSR form.
struct NormalizedAdjacency {
  std::vector<std::size_t> offsets;
  std::vector<NodeId> targets;
  std::vector<double> values;
  std::size_t nodes() const { return offsets.empty() ? 0 : offsets.size() - 1; }
};

NormalizedAdjacency normalized_adjacency(const graph::TemporalGraph& graph);

/// Degree centrality, local clustering and neighbour count, z-scored per column
/// (a constant column becomes 0).
Eigen::MatrixXd gcn_features(const graph::TemporalGraph& graph);

/// Logits, nodes x classes. mask scales the first hidden layer (dropout); pass null in eval mode.
Eigen::MatrixXd gcn_forward(const GcnParams& params, const NormalizedAdjacency& adj, const Eigen::MatrixXd& x,
                            const Eigen::MatrixXd* mask = nullptr);

Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits);

/// Mean cross-entropy over `nodes`; fills grad when given.
double gcn_loss(const GcnParams& params, const NormalizedAdjacency& adj, const Eigen::MatrixXd& x,
                const std::vector<int>& labels, const std::vector<NodeId>& nodes, const Eigen::MatrixXd* mask,
                Eigen::VectorXd* grad = nullptr);

struct Split {
  std::vector<NodeId> train, val, test;
};

/// Per-class shuffle then train/val/test cut. Throws when a class that occurs
/// in labels gets no training node.
Split stratified_split(const std::vector<int>& labels, std::size_t classes, double train_fraction,
                       double val_fraction, std::uint64_t seed);

struct GcnModel {
  GcnParams params;
  Split split;
  TrainReport report;
};

/// Full-batch Adam. Test metrics: accuracy, macro-F1 over classes present in
/// labels, and per-class F1.
GcnModel gcn_train(const GcnConfig& config, const NormalizedAdjacency& adj, const Eigen::MatrixXd& x,
                   const std::vector<int>& labels, std::uint64_t seed);

}  // namespace collabnet::neural
