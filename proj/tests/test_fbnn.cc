// tests/test_fbnn.cc

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

#include <cmath>
#include <vector>

#include "doctest.h"
#include "fbcc/fbnn.h"
#include "fbcc/filterbank.h"
#include "oracles.h"
#include "test_util.h"

namespace fbcc {
namespace {

// Random mask with a contiguous band per channel, like a manual bank.
FilterBank banded_mask(Rng &rng, Index d, Index c) {
  FilterBank mask;
  mask.weights = Matrix::Zero(d, c);
  for (Index j = 0; j < c; ++j) {
    const Index lo = static_cast<Index>(rng.index(static_cast<std::uint64_t>(d - 2)));
    const Index len = 2 + static_cast<Index>(rng.index(static_cast<std::uint64_t>(d - lo - 1)));
    for (Index i = lo; i < lo + len; ++i) mask.weights(i, j) = rng.uniform(0.2, 1.0);
  }
  mask.nfft = 2 * static_cast<int>(d - 1);
  return mask;
}

LabeledBatch random_batch(Rng &rng, Index b, Index d, int classes) {
  LabeledBatch batch;
  batch.inputs = testing::random_matrix(rng, b, d, 0.0, 2.0);
  for (Index i = 0; i < b; ++i)
    batch.labels.push_back(static_cast<int>(rng.index(static_cast<std::uint64_t>(classes))));
  return batch;
}

FbnnModel tiny_model(std::uint64_t seed, Index d = 9, Index c = 3, int h2 = 5, int out = 3) {
  Rng rng(seed);
  FbnnModel m = init_fbnn(banded_mask(rng, d, c), h2, out, seed, 0.5);
  return m;
}

TEST_SUITE("fbnn") {

TEST_CASE("effective filter bank") {
  FbnnModel m = tiny_model(1);
  m.params.W.setZero();
  CHECK((effective_weights(m) - 0.5 * m.mask).cwiseAbs().maxCoeff() == 0.0);
  m.params.W.setConstant(40.0);
  CHECK((effective_weights(m) - m.mask).cwiseAbs().maxCoeff() < 1e-12);
  Rng rng(2);
  m.params.W = testing::random_matrix(rng, 9, 3, -30, 30);
  const Matrix wfb = effective_weights(m);
  for (Index j = 0; j < 3; ++j)
    for (Index i = 0; i < 9; ++i) {
      if (m.mask(i, j) == 0.0) CHECK(wfb(i, j) == 0.0);
      CHECK(wfb(i, j) >= 0.0);
      CHECK(wfb(i, j) <= m.mask(i, j));
    }
  const FilterBank fb = effective_filter_bank(m);
  CHECK(fb.learned());
  CHECK(fb.weights == wfb);
}

TEST_CASE("forward pass") {
  FbnnModel m = tiny_model(3);
  Rng rng(4);
  LabeledBatch batch = random_batch(rng, 6, 9, 3);
  batch.inputs.row(2).setZero();
  const ForwardPass p = forward(m, batch);
  CHECK(p.h1.row(2).isZero(0.0));
  CHECK((p.h1 - batch.inputs * effective_weights(m)).cwiseAbs().maxCoeff() < 1e-14);
  for (Index i = 0; i < 6; ++i) CHECK(std::abs(p.probs.row(i).sum() - 1.0) < 1e-12);
  CHECK(p.loss >= 0.0);

  FbnnModel uniform = tiny_model(5, 9, 3, 5, 5);
  uniform.params.W3.setZero();
  uniform.params.b3.setZero();
  LabeledBatch five = random_batch(rng, 4, 9, 5);
  CHECK(forward(uniform, five).loss == doctest::Approx(std::log(5.0)).epsilon(1e-12));

  LabeledBatch bad = five;
  bad.labels[0] = 7;
  CHECK_THROWS_AS(forward(uniform, bad), ConfigError);
  bad = five;
  bad.inputs(0, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(forward(uniform, bad), NumericError);
}

TEST_CASE("gradients match central differences") {
  for (std::uint64_t seed : {7u, 8u, 9u}) {
    FbnnModel m = tiny_model(seed);
    Rng rng(seed + 100);
    const LabeledBatch batch = random_batch(rng, 4, 9, 3);
    CHECK(oracle::fbnn_gradient_error(m, batch) < 1e-5);
  }
}

TEST_CASE("masked-out entries have zero gradient") {
  FbnnModel m = tiny_model(10);
  Rng rng(11);
  const FbnnParams g = gradients(m, random_batch(rng, 8, 9, 3));
  for (Index j = 0; j < 3; ++j)
    for (Index i = 0; i < 9; ++i)
      if (m.mask(i, j) == 0.0) CHECK(g.W(i, j) == 0.0);
}

TEST_CASE("filter gradient is linear in the input with frozen upstream") {
  FbnnModel m = tiny_model(12);
  Rng rng(13);
  const Matrix f = testing::random_matrix(rng, 1, 9, 0.0, 1.0);
  const Matrix upstream = testing::random_matrix(rng, 1, 3);
  const Matrix g1 = filter_weight_gradient(m, f, upstream);
  const Matrix g2 = filter_weight_gradient(m, 2.0 * f, upstream);
  CHECK((g2 - 2.0 * g1).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("momentum recursion") {
  FbnnModel m = tiny_model(14);
  FbnnParams g = FbnnParams::zeros_like(m.params);
  g.W.setOnes();
  g.W2.setOnes();
  g.b2.setOnes();
  g.W3.setOnes();
  g.b3.setOnes();
  const FbnnParams start = m.params;
  sgd_update(m, g, 1.0, 0.9);
  sgd_update(m, g, 1.0, 0.9);
  CHECK(((m.params.W - start.W).array() + 0.29).abs().maxCoeff() < 1e-12);
  CHECK(((m.params.b3 - start.b3).array() + 0.29).abs().maxCoeff() < 1e-12);
  CHECK((m.momentum.W.array() - 0.19).abs().maxCoeff() < 1e-12);

  // eta = 0 leaves parameters but still advances the momentum.
  FbnnModel z = tiny_model(14);
  sgd_update(z, g, 0.0, 0.5);
  CHECK(z.params.W == start.W);
  CHECK((z.momentum.W.array() - 0.5).abs().maxCoeff() == 0.0);

  // m = 0 is plain SGD.
  FbnnModel p = tiny_model(14);
  sgd_update(p, g, 0.3, 0.0);
  CHECK(((p.params.W2 - start.W2).array() + 0.3).abs().maxCoeff() < 1e-15);
}

TEST_CASE("training reduces loss on separable data and is deterministic") {
  // Class 0 has low-band energy, class 1 high-band.
  const Index d = 17;
  Rng rng(15);
  Matrix x(400, d);
  std::vector<int> y(400);
  for (Index i = 0; i < 400; ++i) {
    y[i] = static_cast<int>(i % 2);
    for (Index k = 0; k < d; ++k) {
      const bool hot = y[i] == 0 ? k < d / 2 : k >= d / 2;
      x(i, k) = rng.uniform(0.0, 0.2) + (hot ? 1.0 : 0.0);
    }
  }
  FilterBank mask = build_filter_bank(BankSpec::with_defaults(BankKind::kTriangular, 4, 32));
  TrainConfig cfg;
  cfg.epochs = 30;
  cfg.batch_size = 32;
  cfg.hidden_nodes = 8;
  cfg.seed = 21;
  const TrainResult a = train_fbnn(x, y, mask, cfg);
  REQUIRE(a.epoch_losses.size() == 30);
  CHECK(a.epoch_losses.back() < a.epoch_losses.front());
  const TrainResult b = train_fbnn(x, y, mask, cfg);
  CHECK(a.model.params.W == b.model.params.W);
  CHECK(a.epoch_losses == b.epoch_losses);
  CHECK(a.learned_bank.weights == effective_weights(a.model));

  std::vector<int> missing = y;
  for (auto &v : missing) v = v == 1 ? 2 : v;
  cfg.num_outputs = 3;
  CHECK_THROWS_AS(train_fbnn(x, missing, mask, cfg), ConfigError);
}

TEST_CASE("five outputs with a shared class") {
  // Labels {human, S1, S2, S5, S3 and S4 together}.
  const Index d = 17;
  Rng rng(16);
  Matrix x = testing::random_matrix(rng, 50, d, 0.0, 1.0);
  std::vector<int> y(50);
  for (int i = 0; i < 50; ++i) y[i] = i % 5;
  FilterBank mask = build_filter_bank(BankSpec::with_defaults(BankKind::kTriangular, 4, 32));
  TrainConfig cfg;
  cfg.epochs = 2;
  cfg.hidden_nodes = 6;
  const TrainResult r = train_fbnn(x, y, mask, cfg);
  CHECK(r.model.outputs() == 5);
}

TEST_CASE("schedule") {
  TrainConfig cfg;
  CHECK(cfg.rule_for_epoch(0).learning_rate == 0.1);
  CHECK(cfg.rule_for_epoch(0).momentum == 0.0);
  CHECK(cfg.rule_for_epoch(1).learning_rate == 1.0);
  CHECK(cfg.rule_for_epoch(29).momentum == 0.9);
}

}  // TEST_SUITE

}  // namespace
}  // namespace fbcc
