// tests/oracles.h

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

// Independent reference computations shared by the unit and acceptance tests.

#ifndef FBCC_TESTS_ORACLES_H_
#define FBCC_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "fbcc/fbnn.h"
#include "fbcc/random.h"
#include "fbcc/types.h"

namespace fbcc::oracle {

// Largest relative error between analytic and central-difference gradients
// over all five tensors.
inline double fbnn_gradient_error(FbnnModel model, const LabeledBatch &batch,
                                  double eps = 1e-5) {
  const FbnnParams analytic = gradients(model, batch);
  std::vector<Matrix> exact;
  analytic.for_each([&](const char *, const Eigen::Ref<const Matrix> &g) {
    exact.emplace_back(g);
  });
  double worst = 0.0;
  std::size_t t = 0;
  model.params.for_each([&](const char *, Eigen::Ref<Matrix> p) {
    for (Index j = 0; j < p.cols(); ++j) {
      for (Index i = 0; i < p.rows(); ++i) {
        const double saved = p(i, j);
        p(i, j) = saved + eps;
        const double up = forward(model, batch).loss;
        p(i, j) = saved - eps;
        const double down = forward(model, batch).loss;
        p(i, j) = saved;
        const double numeric = (up - down) / (2.0 * eps);
        const double a = exact[t](i, j);
        const double scale = std::max({std::abs(a), std::abs(numeric), 1e-6});
        worst = std::max(worst, std::abs(a - numeric) / scale);
      }
    }
    ++t;
  });
  return worst;
}

// Naive orthonormal DCT-II of x, first m coefficients.
inline Vector naive_dct(const Vector &x, Index m) {
  const Index c = x.size();
  Vector out(m);
  for (Index k = 0; k < m; ++k) {
    double acc = 0.0;
    for (Index n = 0; n < c; ++n)
      acc += x(n) * std::cos(std::numbers::pi * k * (2.0 * n + 1.0) / (2.0 * c));
    out(k) = acc * std::sqrt((k == 0 ? 1.0 : 2.0) / c);
  }
  return out;
}

// EER by brute force: FRR/FAR at every distinct score and +inf, then the
// interpolated crossing between the last point with FRR < FAR and the next.
inline double brute_force_eer(const std::vector<double> &pos,
                              const std::vector<double> &neg) {
  std::vector<double> thresholds(pos);
  thresholds.insert(thresholds.end(), neg.begin(), neg.end());
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
  thresholds.push_back(std::numeric_limits<double>::infinity());
  std::vector<double> frr, far;
  for (double t : thresholds) {
    double below = 0, above = 0;
    for (double p : pos) below += p < t;
    for (double n : neg) above += n >= t;
    frr.push_back(below / pos.size());
    far.push_back(above / neg.size());
  }
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    const double d = frr[i] - far[i];
    if (d == 0.0) return frr[i];
    if (d > 0.0) {
      // Crossing between i-1 and i; i > 0 because FRR starts at 0.
      const double d0 = frr[i - 1] - far[i - 1], d1 = d;
      const double w = d0 / (d0 - d1);
      return frr[i - 1] + w * (frr[i] - frr[i - 1]);
    }
  }
  return frr.back();
}

// Diagonal Gaussian density written out directly.
inline double naive_gaussian(double x, double mean, double var) {
  return std::exp(-0.5 * (x - mean) * (x - mean) / var) /
         std::sqrt(2.0 * std::numbers::pi * var);
}

}  // namespace fbcc::oracle

#endif  // FBCC_TESTS_ORACLES_H_
