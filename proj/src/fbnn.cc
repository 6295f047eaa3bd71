// src/fbnn.cc

// Copyright 2026 The fbcc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "fbcc/fbnn.h"

#include <algorithm>
#include <numeric>
#include <string>

#include "fbcc/random.h"

namespace fbcc {

FbnnParams FbnnParams::zeros_like(const FbnnParams &p) {
  return {Matrix::Zero(p.W.rows(), p.W.cols()),
          Matrix::Zero(p.W2.rows(), p.W2.cols()), Vector::Zero(p.b2.size()),
          Matrix::Zero(p.W3.rows(), p.W3.cols()), Vector::Zero(p.b3.size())};
}

void FbnnParams::for_each(
    const std::function<void(const char *, Eigen::Ref<Matrix>)> &fn) {
  fn("W", W);
  fn("W2", W2);
  fn("b2", b2);
  fn("W3", W3);
  fn("b3", b3);
}

void FbnnParams::for_each(
    const std::function<void(const char *, const Eigen::Ref<const Matrix> &)>
        &fn) const {
  fn("W", W);
  fn("W2", W2);
  fn("b2", b2);
  fn("W3", W3);
  fn("b3", b3);
}

StepRule TrainConfig::rule_for_epoch(int epoch) const {
  const auto at = std::min<std::size_t>(static_cast<std::size_t>(epoch),
                                        schedule.size() - 1);
  return schedule[at];
}

void TrainConfig::validate() const {
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (batch_size < 1) throw ConfigError("batch size must be >= 1");
  if (hidden_nodes < 1) throw ConfigError("hidden layer needs >= 1 node");
  if (schedule.empty()) throw ConfigError("empty learning-rate schedule");
  for (const auto &rule : schedule) {
    if (!(rule.learning_rate > 0.0))
      throw ConfigError("learning rate must be positive");
    if (!(rule.momentum >= 0.0 && rule.momentum < 1.0))
      throw ConfigError("momentum must be in [0, 1)");
  }
  if (!(init_range >= 0.0)) throw ConfigError("init range must be >= 0");
}

namespace {

Matrix uniform_matrix(Rng &rng, Index rows, Index cols, double range) {
  Matrix m(rows, cols);
  // Column-major fill order is part of the reproducibility contract.
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = rng.uniform(-range, range);
  return m;
}

void check_finite(const Matrix &m, const char *layer) {
  if (!m.allFinite())
    throw NumericError(std::string("non-finite activation in layer ") + layer);
}

}  // namespace

FbnnModel init_fbnn(const FilterBank &mask, int hidden_nodes, int num_outputs,
                    std::uint64_t seed, double init_range) {
  validate_filter_bank(mask);
  if (hidden_nodes < 1) throw ConfigError("hidden layer needs >= 1 node");
  if (num_outputs < 2) throw ConfigError("network needs at least 2 outputs");
  Rng rng(seed);
  FbnnModel model;
  model.mask = mask.weights;
  model.sample_rate = mask.sample_rate;
  const Index d = mask.num_bins(), c = mask.num_channels();
  model.params.W = uniform_matrix(rng, d, c, init_range);
  model.params.W2 = uniform_matrix(rng, c, hidden_nodes, init_range);
  model.params.b2 = Vector::Zero(hidden_nodes);
  model.params.W3 = uniform_matrix(rng, hidden_nodes, num_outputs, init_range);
  model.params.b3 = Vector::Zero(num_outputs);
  model.momentum = FbnnParams::zeros_like(model.params);
  return model;
}

Matrix effective_weights(const FbnnModel &model) {
  return (sigmoid(model.params.W.array()) * model.mask.array()).matrix();
}

FilterBank effective_filter_bank(const FbnnModel &model) {
  FilterBank bank;
  bank.weights = effective_weights(model);
  bank.sample_rate = model.sample_rate;
  bank.nfft = static_cast<int>(2 * (model.input_dim() - 1));
  return bank;
}

ForwardPass forward(const FbnnModel &model, const LabeledBatch &batch) {
  const Index rows = batch.inputs.rows();
  if (batch.inputs.cols() != model.input_dim())
    throw ConfigError("batch has " + std::to_string(batch.inputs.cols()) +
                      " input dims, model expects " +
                      std::to_string(model.input_dim()));
  if (static_cast<Index>(batch.labels.size()) != rows)
    throw ConfigError("label count does not match batch rows");
  for (int label : batch.labels)
    if (label < 0 || label >= model.outputs())
      throw ConfigError("label " + std::to_string(label) + " out of range");

  ForwardPass pass;
  pass.inputs = model.log_compress
                    ? Matrix(batch.inputs.array().log1p().matrix())
                    : batch.inputs;
  pass.h1.noalias() = pass.inputs * effective_weights(model);
  check_finite(pass.h1, "H1");

  Matrix z2 = pass.h1 * model.params.W2;
  z2.rowwise() += model.params.b2.transpose();
  pass.h2 = sigmoid(z2.array()).matrix();
  check_finite(pass.h2, "H2");

  Matrix z3 = pass.h2 * model.params.W3;
  z3.rowwise() += model.params.b3.transpose();
  check_finite(z3, "output");
  const Vector row_max = z3.rowwise().maxCoeff();
  const Vector log_norm =
      row_max.array() +
      (z3.colwise() - row_max).array().exp().rowwise().sum().log();
  pass.probs = (z3.colwise() - log_norm).array().exp().matrix();

  double total = 0.0;
  for (Index b = 0; b < rows; ++b)
    total += log_norm(b) - z3(b, batch.labels[static_cast<std::size_t>(b)]);
  pass.loss = rows > 0 ? total / static_cast<double>(rows) : 0.0;
  return pass;
}

Matrix filter_weight_gradient(const FbnnModel &model, const Matrix &inputs,
                              const Matrix &upstream) {
  const auto s = sigmoid(model.params.W.array()).eval();
  const Matrix through_bank = inputs.transpose() * upstream;
  return (through_bank.array() * model.mask.array() * s * (1.0 - s)).matrix();
}

FbnnParams gradients(const FbnnModel &model, const LabeledBatch &batch,
                     const ForwardPass &pass) {
  const Index rows = batch.inputs.rows();
  FbnnParams g;
  if (rows == 0) return FbnnParams::zeros_like(model.params);

  Matrix d_z3 = pass.probs;
  for (Index b = 0; b < rows; ++b)
    d_z3(b, batch.labels[static_cast<std::size_t>(b)]) -= 1.0;
  d_z3 /= static_cast<double>(rows);

  g.W3.noalias() = pass.h2.transpose() * d_z3;
  g.b3 = d_z3.colwise().sum().transpose();

  const Matrix d_z2 =
      ((d_z3 * model.params.W3.transpose()).array() * pass.h2.array() *
       (1.0 - pass.h2.array()))
          .matrix();
  g.W2.noalias() = pass.h1.transpose() * d_z2;
  g.b2 = d_z2.colwise().sum().transpose();

  const Matrix d_h1 = d_z2 * model.params.W2.transpose();
  g.W = filter_weight_gradient(model, pass.inputs, d_h1);
  return g;
}

FbnnParams gradients(const FbnnModel &model, const LabeledBatch &batch) {
  return gradients(model, batch, forward(model, batch));
}

void sgd_update(FbnnModel &model, const FbnnParams &grads, double learning_rate,
                double momentum) {
  auto step = [&](auto &param, auto &g_old, const auto &g) {
    if (param.rows() != g.rows() || param.cols() != g.cols())
      throw ConfigError("gradient shape does not match parameter shape");
    g_old = (1.0 - momentum) * g + momentum * g_old;
    param -= learning_rate * g_old;
  };
  step(model.params.W, model.momentum.W, grads.W);
  step(model.params.W2, model.momentum.W2, grads.W2);
  step(model.params.b2, model.momentum.b2, grads.b2);
  step(model.params.W3, model.momentum.W3, grads.W3);
  step(model.params.b3, model.momentum.b3, grads.b3);
}

TrainResult train_fbnn(const Matrix &inputs, const std::vector<int> &labels,
                       const FilterBank &mask, const TrainConfig &config) {
  config.validate();
  const Index count = inputs.rows();
  if (static_cast<Index>(labels.size()) != count)
    throw ConfigError("label count does not match input rows");
  if (count == 0) throw ConfigError("empty training set");
  if (inputs.cols() != mask.num_bins())
    throw ConfigError("input dimension " + std::to_string(inputs.cols()) +
                      " does not match mask bins " +
                      std::to_string(mask.num_bins()));
  if (!inputs.allFinite() || inputs.minCoeff() < 0.0)
    throw ConfigError("training inputs must be finite and non-negative");

  const int max_label = *std::max_element(labels.begin(), labels.end());
  const int outputs = config.num_outputs > 0 ? config.num_outputs : max_label + 1;
  std::vector<Index> per_class(static_cast<std::size_t>(std::max(outputs, 1)), 0);
  for (int label : labels) {
    if (label < 0 || label >= outputs)
      throw ConfigError("label " + std::to_string(label) + " outside [0, " +
                        std::to_string(outputs) + ")");
    ++per_class[static_cast<std::size_t>(label)];
  }
  for (int k = 0; k < outputs; ++k)
    if (per_class[static_cast<std::size_t>(k)] == 0)
      throw ConfigError("class " + std::to_string(k) +
                        " has no training samples");

  TrainResult result;
  result.model = init_fbnn(mask, config.hidden_nodes, outputs, config.seed,
                           config.init_range);
  result.model.log_compress = config.log_compress;

  Rng shuffler(config.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<Index> order(static_cast<std::size_t>(count));
  std::iota(order.begin(), order.end(), Index{0});

  LabeledBatch batch;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const StepRule rule = config.rule_for_epoch(epoch);
    shuffler.shuffle(order);
    double loss_sum = 0.0;
    for (Index start = 0; start < count; start += config.batch_size) {
      const Index size = std::min<Index>(config.batch_size, count - start);
      batch.inputs.resize(size, inputs.cols());
      batch.labels.resize(static_cast<std::size_t>(size));
      for (Index b = 0; b < size; ++b) {
        const Index src = order[static_cast<std::size_t>(start + b)];
        batch.inputs.row(b) = inputs.row(src);
        batch.labels[static_cast<std::size_t>(b)] =
            labels[static_cast<std::size_t>(src)];
      }
      const ForwardPass pass = forward(result.model, batch);
      loss_sum += pass.loss * static_cast<double>(size);
      sgd_update(result.model, gradients(result.model, batch, pass),
                 rule.learning_rate, rule.momentum);
    }
    result.epoch_losses.push_back(loss_sum / static_cast<double>(count));
  }
  result.learned_bank = effective_filter_bank(result.model);
  return result;
}

}  // namespace fbcc
