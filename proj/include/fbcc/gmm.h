// fbcc/gmm.h

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

#ifndef FBCC_GMM_H_
#define FBCC_GMM_H_

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "fbcc/cepstral.h"
#include "fbcc/types.h"

namespace fbcc {

/// log(sum(exp(x))) without overflow; -inf for an empty or all -inf input.
template <typename Derived>
typename Derived::Scalar log_sum_exp(const Eigen::DenseBase<Derived> &x) {
  using Scalar = typename Derived::Scalar;
  if (x.size() == 0) return -std::numeric_limits<Scalar>::infinity();
  const Scalar peak = x.maxCoeff();
  if (!std::isfinite(peak)) return peak;
  return peak + std::log((x.derived().array() - peak).exp().sum());
}

/// Diagonal-covariance Gaussian mixture.
struct GmmModel {
  Vector weights;     // K, sums to 1
  Matrix means;       // K x dim
  Matrix variances;   // K x dim, positive

  Index components() const { return weights.size(); }
  Index dim() const { return means.cols(); }
  void validate() const;
};

enum class GmmInit { kKmeans, kRandomFrames };

struct GmmTrainConfig {
  int components = 512;
  int em_iters = 10;
  double var_floor_factor = 1e-3;  // of the per-dimension global variance
  std::uint64_t seed = 1;
  GmmInit init = GmmInit::kKmeans;
  int kmeans_iters = 10;
  // Rows drawn for k-means; 0 means min(N, 100 K).
  Index kmeans_subsample = 0;

  void validate() const;
};

struct GmmEvent {
  int iteration;
  Index component;
  std::string message;
};

struct GmmTrainResult {
  GmmModel model;
  // Total data log-likelihood under the initial model and after each EM
  // iteration: em_iters + 1 entries.
  std::vector<double> log_likelihood;
  // Iterations whose M-step re-seeded a collapsed component.
  std::vector<GmmEvent> events;
};

/// N x K matrix of log(w_k) + log N(x_n; mu_k, diag(var_k)).
Matrix weighted_log_densities(const GmmModel &model, const Matrix &frames);

/// Per-frame mixture log-likelihoods, N entries.
Vector frame_log_likelihoods(const GmmModel &model, const Matrix &frames);

/// Posterior component probabilities, N x K; each row sums to 1.
Matrix responsibilities(const GmmModel &model, const Matrix &frames);

/// log sum_k w_k N(frame; mu_k, diag(var_k)).
double gmm_log_likelihood(const GmmModel &model,
                          const Eigen::Ref<const Vector> &frame);

/// EM on pooled frames. Throws ConfigError when there are fewer rows than
/// components.
GmmTrainResult train_gmm(const Matrix &frames, const GmmTrainConfig &config);

/// Mean over frames of log P(x|human) - log P(x|spoof). Throws EvalError
/// for an utterance with no frames.
double llr_score(const FeatureMatrix &features, const GmmModel &human,
                 const GmmModel &spoof);

}  // namespace fbcc

#endif  // FBCC_GMM_H_
