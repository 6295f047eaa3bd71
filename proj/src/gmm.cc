// src/gmm.cc

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

#include "fbcc/gmm.h"

#include <algorithm>
#include <numbers>
#include <numeric>

#include "fbcc/random.h"

namespace fbcc {

namespace {

constexpr Index kChunkRows = 4096;
// A component whose soft count drops below this is treated as collapsed.
constexpr double kCollapsedCount = 1e-6;
constexpr double kMinVariance = 1e-12;

const double kLog2Pi = std::log(2.0 * std::numbers::pi);

}  // namespace

void GmmModel::validate() const {
  const Index k = components();
  if (k < 1) throw ConfigError("GMM has no components");
  if (means.rows() != k || variances.rows() != k ||
      variances.cols() != means.cols())
    throw ConfigError("GMM parameter shapes disagree");
  if (!weights.allFinite() || !means.allFinite() || !variances.allFinite())
    throw ConfigError("GMM has non-finite parameters");
  if (weights.minCoeff() < 0.0 || std::abs(weights.sum() - 1.0) > 1e-9)
    throw ConfigError("GMM weights must be a probability vector");
  if (variances.minCoeff() <= 0.0)
    throw ConfigError("GMM variances must be positive");
}

void GmmTrainConfig::validate() const {
  if (components < 1) throw ConfigError("GMM needs at least one component");
  if (em_iters < 1) throw ConfigError("em_iters must be >= 1");
  if (!(var_floor_factor >= 0.0))
    throw ConfigError("variance floor factor must be >= 0");
  if (kmeans_iters < 0) throw ConfigError("kmeans_iters must be >= 0");
}

Matrix weighted_log_densities(const GmmModel &model, const Matrix &frames) {
  if (frames.cols() != model.dim())
    throw ConfigError("frame dimension " + std::to_string(frames.cols()) +
                      " does not match GMM dimension " +
                      std::to_string(model.dim()));
  const Index k_count = model.components();
  Matrix out(frames.rows(), k_count);
  for (Index k = 0; k < k_count; ++k) {
    const auto var = model.variances.row(k).array();
    const double log_norm = std::log(model.weights(k)) -
                            0.5 * (model.dim() * kLog2Pi + var.log().sum());
    const RowVector inv_var = var.inverse().matrix();
    out.col(k) =
        (log_norm -
         0.5 * ((frames.rowwise() - model.means.row(k)).array().square().rowwise() *
                inv_var.array())
                   .rowwise()
                   .sum())
            .matrix();
  }
  return out;
}

Vector frame_log_likelihoods(const GmmModel &model, const Matrix &frames) {
  const Matrix dens = weighted_log_densities(model, frames);
  Vector out(frames.rows());
  for (Index n = 0; n < frames.rows(); ++n) out(n) = log_sum_exp(dens.row(n));
  return out;
}

Matrix responsibilities(const GmmModel &model, const Matrix &frames) {
  Matrix dens = weighted_log_densities(model, frames);
  for (Index n = 0; n < dens.rows(); ++n) {
    const double total = log_sum_exp(dens.row(n));
    dens.row(n) = (dens.row(n).array() - total).exp().matrix();
  }
  return dens;
}

double gmm_log_likelihood(const GmmModel &model,
                          const Eigen::Ref<const Vector> &frame) {
  if (frame.size() != model.dim())
    throw ConfigError("frame dimension does not match GMM dimension");
  Vector terms(model.components());
  for (Index k = 0; k < model.components(); ++k) {
    const auto var = model.variances.row(k).transpose().array();
    const auto diff = frame.array() - model.means.row(k).transpose().array();
    terms(k) = std::log(model.weights(k)) -
               0.5 * (model.dim() * kLog2Pi + var.log().sum() +
                      (diff.square() / var).sum());
  }
  return log_sum_exp(terms);
}

namespace {

struct Accumulators {
  Vector counts;
  Matrix first;   // sum r (x - shift)
  Matrix second;  // sum r (x - shift)^2
  double log_likelihood = 0.0;
};

// E-step over fixed-size chunks, combined in chunk order. Moments are taken
// about `shift` (the global mean) to limit cancellation in the variances.
Accumulators accumulate(const GmmModel &model, const Matrix &frames,
                        const RowVector &shift) {
  const Index k_count = model.components(), dim = model.dim();
  Accumulators acc{Vector::Zero(k_count), Matrix::Zero(k_count, dim),
                   Matrix::Zero(k_count, dim), 0.0};
  for (Index start = 0; start < frames.rows(); start += kChunkRows) {
    const Index rows = std::min(kChunkRows, frames.rows() - start);
    const Matrix chunk = frames.middleRows(start, rows);
    Matrix post = weighted_log_densities(model, chunk);
    for (Index n = 0; n < rows; ++n) {
      const double total = log_sum_exp(post.row(n));
      acc.log_likelihood += total;
      post.row(n) = (post.row(n).array() - total).exp().matrix();
    }
    acc.counts += post.colwise().sum().transpose();
    const Matrix centered = chunk.rowwise() - shift;
    acc.first.noalias() += post.transpose() * centered;
    acc.second.noalias() += post.transpose() * centered.cwiseAbs2();
  }
  return acc;
}

RowVector column_means(const Matrix &x) {
  return x.colwise().mean();
}

RowVector column_variances(const Matrix &x) {
  const RowVector mean = column_means(x);
  return (x.rowwise() - mean).array().square().colwise().mean().matrix();
}

std::vector<Index> distinct_sample(Rng &rng, Index population, Index count) {
  std::vector<Index> idx(static_cast<std::size_t>(population));
  std::iota(idx.begin(), idx.end(), Index{0});
  rng.shuffle(idx);
  idx.resize(static_cast<std::size_t>(count));
  return idx;
}

GmmModel init_random_frames(const Matrix &frames, const GmmTrainConfig &cfg,
                            const RowVector &floor, Rng &rng) {
  const Index k_count = cfg.components;
  GmmModel model;
  model.weights = Vector::Constant(k_count, 1.0 / k_count);
  model.means.resize(k_count, frames.cols());
  const auto picks = distinct_sample(rng, frames.rows(), k_count);
  for (Index k = 0; k < k_count; ++k)
    model.means.row(k) = frames.row(picks[static_cast<std::size_t>(k)]);
  const RowVector global = column_variances(frames).cwiseMax(floor);
  model.variances = global.replicate(k_count, 1);
  return model;
}

GmmModel init_kmeans(const Matrix &frames, const GmmTrainConfig &cfg,
                     const RowVector &floor, Rng &rng) {
  const Index k_count = cfg.components, dim = frames.cols();
  Index n_sub = cfg.kmeans_subsample > 0 ? cfg.kmeans_subsample : 100 * k_count;
  n_sub = std::clamp<Index>(n_sub, k_count, frames.rows());
  const auto rows = distinct_sample(rng, frames.rows(), n_sub);
  Matrix sub(n_sub, dim);
  for (Index i = 0; i < n_sub; ++i)
    sub.row(i) = frames.row(rows[static_cast<std::size_t>(i)]);

  Matrix centroids = sub.topRows(k_count);
  std::vector<Index> assign(static_cast<std::size_t>(n_sub), 0);
  auto assign_all = [&] {
    for (Index i = 0; i < n_sub; ++i) {
      Index best = 0;
      (centroids.rowwise() - sub.row(i)).rowwise().squaredNorm().minCoeff(&best);
      assign[static_cast<std::size_t>(i)] = best;
    }
  };
  for (int it = 0; it < cfg.kmeans_iters; ++it) {
    assign_all();
    Matrix sums = Matrix::Zero(k_count, dim);
    Vector counts = Vector::Zero(k_count);
    for (Index i = 0; i < n_sub; ++i) {
      sums.row(assign[static_cast<std::size_t>(i)]) += sub.row(i);
      counts(assign[static_cast<std::size_t>(i)]) += 1.0;
    }
    for (Index k = 0; k < k_count; ++k) {
      if (counts(k) > 0.0)
        centroids.row(k) = sums.row(k) / counts(k);
      else
        centroids.row(k) = sub.row(static_cast<Index>(rng.index(n_sub)));
    }
  }
  assign_all();

  const RowVector global = column_variances(frames).cwiseMax(floor);
  GmmModel model;
  model.weights.resize(k_count);
  model.means = centroids;
  model.variances.resize(k_count, dim);
  for (Index k = 0; k < k_count; ++k) {
    std::vector<Index> members;
    for (Index i = 0; i < n_sub; ++i)
      if (assign[static_cast<std::size_t>(i)] == k) members.push_back(i);
    model.weights(k) = std::max<double>(members.size(), 1.0);
    if (members.size() < 2) {
      model.variances.row(k) = global;
      continue;
    }
    Matrix block(static_cast<Index>(members.size()), dim);
    for (std::size_t j = 0; j < members.size(); ++j)
      block.row(static_cast<Index>(j)) = sub.row(members[j]);
    model.variances.row(k) = column_variances(block).cwiseMax(floor);
  }
  model.weights /= model.weights.sum();
  return model;
}

}  // namespace

GmmTrainResult train_gmm(const Matrix &frames, const GmmTrainConfig &config) {
  config.validate();
  if (frames.rows() < config.components)
    throw ConfigError("GMM with " + std::to_string(config.components) +
                      " components needs at least that many frames, got " +
                      std::to_string(frames.rows()));
  if (frames.cols() < 1) throw ConfigError("frames have zero dimension");
  if (!frames.allFinite()) throw ConfigError("non-finite training frames");

  Rng rng(config.seed);
  const RowVector floor =
      (config.var_floor_factor * column_variances(frames)).cwiseMax(kMinVariance);

  GmmTrainResult result;
  result.model = config.init == GmmInit::kKmeans
                     ? init_kmeans(frames, config, floor, rng)
                     : init_random_frames(frames, config, floor, rng);
  const RowVector global = column_variances(frames).cwiseMax(floor);
  const RowVector shift = column_means(frames);

  GmmModel &model = result.model;
  const double total_frames = static_cast<double>(frames.rows());
  for (int iter = 0; iter < config.em_iters; ++iter) {
    const Accumulators acc = accumulate(model, frames, shift);
    result.log_likelihood.push_back(acc.log_likelihood);

    bool reseeded = false;
    for (Index k = 0; k < model.components(); ++k) {
      const double count = acc.counts(k);
      if (count < kCollapsedCount) {
        model.means.row(k) = frames.row(static_cast<Index>(rng.index(frames.rows())));
        model.variances.row(k) = global;
        model.weights(k) = 1.0 / total_frames;
        result.events.push_back({iter, k, "collapsed component re-seeded"});
        reseeded = true;
        continue;
      }
      model.weights(k) = count / total_frames;
      const RowVector offset = acc.first.row(k) / count;
      model.means.row(k) = shift + offset;
      model.variances.row(k) =
          (acc.second.row(k) / count - offset.cwiseAbs2()).cwiseMax(floor);
    }
    if (reseeded) model.weights /= model.weights.sum();
  }
  result.log_likelihood.push_back(accumulate(model, frames, shift).log_likelihood);
  return result;
}

double llr_score(const FeatureMatrix &features, const GmmModel &human,
                 const GmmModel &spoof) {
  if (features.num_frames() == 0)
    throw EvalError("cannot score an empty utterance");
  if (human.dim() != spoof.dim())
    throw ConfigError("human and spoof models have different dimensions");
  return (frame_log_likelihoods(human, features.rows) -
          frame_log_likelihoods(spoof, features.rows))
      .mean();
}

}  // namespace fbcc
