// fbcc/fbnn.h

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

// Filter bank neural network: a linear first layer whose D x C weight matrix
// is constrained to sigmoid(W) .* mask, a sigmoid hidden layer and a softmax
// output. After training, sigmoid(W) .* mask is a filter bank that can be
// used for cepstral analysis in place of a hand-designed one.

#ifndef FBCC_FBNN_H_
#define FBCC_FBNN_H_

#include <cstdint>
#include <functional>
#include <vector>

#include "fbcc/filterbank.h"
#include "fbcc/types.h"

namespace fbcc {

/// Elementwise logistic function over any Eigen expression.
template <typename Derived>
auto sigmoid(const Eigen::ArrayBase<Derived> &x) {
  using Scalar = typename Derived::Scalar;
  return (Scalar(1) + (-x).exp()).inverse();
}

/// The trainable tensors. Also used for gradients and momentum state, which
/// have the same shapes.
struct FbnnParams {
  Matrix W;    // D x C, pre-constraint filter bank weights
  Matrix W2;   // C x H2
  Vector b2;   // H2
  Matrix W3;   // H2 x N_out
  Vector b3;   // N_out

  static FbnnParams zeros_like(const FbnnParams &p);
  /// Calls fn(name, tensor) for W, W2, b2, W3, b3 in that order.
  void for_each(const std::function<void(const char *, Eigen::Ref<Matrix>)> &fn);
  void for_each(
      const std::function<void(const char *, const Eigen::Ref<const Matrix> &)>
          &fn) const;
};

struct FbnnModel {
  FbnnParams params;
  FbnnParams momentum;  // g_old for every tensor, zero-initialized
  Matrix mask;          // D x C, the band-limiting mask
  int sample_rate = kDefaultSampleRate;
  bool log_compress = false;  // inputs mapped through log(1 + x) if set

  Index input_dim() const { return mask.rows(); }
  Index channels() const { return mask.cols(); }
  Index hidden() const { return params.W2.cols(); }
  Index outputs() const { return params.W3.cols(); }
};

/// One step of the learning-rate / momentum schedule.
struct StepRule {
  double learning_rate = 1.0;
  double momentum = 0.0;
};

struct TrainConfig {
  int epochs = 30;
  int batch_size = 128;
  // Entry e applies to epoch e (0-based); the last entry repeats.
  std::vector<StepRule> schedule = {{0.1, 0.0}, {1.0, 0.9}};
  std::uint64_t seed = 1;
  int hidden_nodes = 100;
  // 0 infers max(label) + 1.
  int num_outputs = 0;
  double init_range = 0.05;
  bool log_compress = false;

  StepRule rule_for_epoch(int epoch) const;
  void validate() const;
};

/// Inputs F (B x D power-spectrum rows) with class indices. Class 0 is the
/// human class.
struct LabeledBatch {
  Matrix inputs;
  std::vector<int> labels;
};

struct ForwardPass {
  Matrix inputs;  // F after optional log compression
  Matrix h1;      // B x C
  Matrix h2;      // B x H2, sigmoid activations
  Matrix probs;   // B x N_out
  double loss = 0.0;
};

struct TrainResult {
  FbnnModel model;
  std::vector<double> epoch_losses;  // mean mini-batch loss per epoch
  FilterBank learned_bank;
};

/// Model with W, W2, W3 uniform in [-init_range, init_range], zero biases
/// and zero momentum. Throws ConfigError on a bad mask or sizes.
FbnnModel init_fbnn(const FilterBank &mask, int hidden_nodes, int num_outputs,
                    std::uint64_t seed, double init_range = 0.05);

/// sigmoid(W) .* mask.
Matrix effective_weights(const FbnnModel &model);

/// effective_weights wrapped as a learned FilterBank.
FilterBank effective_filter_bank(const FbnnModel &model);

/// Throws NumericError naming the layer on any non-finite activation.
ForwardPass forward(const FbnnModel &model, const LabeledBatch &batch);

/// Gradient of the batch-mean cross entropy with respect to W given the
/// upstream gradient dL/dH1 (B x C) and the layer inputs F (B x D):
/// g_dc = sum_b dL/dH1_bc F_bd mask_dc s(W_dc)(1 - s(W_dc)).
Matrix filter_weight_gradient(const FbnnModel &model, const Matrix &inputs,
                              const Matrix &upstream);

/// Backpropagated gradients of the mean cross-entropy loss.
FbnnParams gradients(const FbnnModel &model, const LabeledBatch &batch,
                     const ForwardPass &pass);
FbnnParams gradients(const FbnnModel &model, const LabeledBatch &batch);

/// For every tensor: g_new = (1 - m) g + m g_old; param -= eta g_new;
/// g_old = g_new.
void sgd_update(FbnnModel &model, const FbnnParams &grads, double learning_rate,
                double momentum);

/// Mini-batch training over shuffled data. Every class in
/// [0, num_outputs) must appear. Bit-reproducible for a given seed.
TrainResult train_fbnn(const Matrix &inputs, const std::vector<int> &labels,
                       const FilterBank &mask, const TrainConfig &config);

}  // namespace fbcc

#endif  // FBCC_FBNN_H_
