// tests/acceptance.cc

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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "fbcc/cepstral.h"
#include "fbcc/cli.h"
#include "fbcc/dsp.h"
#include "fbcc/eval.h"
#include "fbcc/fbnn.h"
#include "fbcc/gmm.h"
#include "fbcc/io.h"
#include "oracles.h"
#include "test_util.h"

namespace fs = std::filesystem;

namespace fbcc {
namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string &what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string fmt(const char *format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

// ----------------------------------------------------------------- 1

FbnnModel random_model(Rng &rng, Index d, Index c, int h2, int out, std::uint64_t seed) {
  FilterBank mask;
  mask.weights = Matrix::Zero(d, c);
  for (Index j = 0; j < c; ++j) {
    const Index lo = static_cast<Index>(rng.index(static_cast<std::uint64_t>(d / 2)));
    for (Index i = lo; i < std::min(d, lo + d / 2 + 1); ++i)
      mask.weights(i, j) = rng.uniform(0.1, 1.0);
  }
  mask.nfft = 2 * static_cast<int>(d - 1);
  return init_fbnn(mask, h2, out, seed, 0.5);
}

LabeledBatch random_batch(Rng &rng, Index b, Index d, int classes) {
  LabeledBatch batch{testing::random_matrix(rng, b, d, 0.0, 2.0), {}};
  for (Index i = 0; i < b; ++i)
    batch.labels.push_back(static_cast<int>(rng.index(static_cast<std::uint64_t>(classes))));
  return batch;
}

Outcome gradient_check() {
  Outcome o;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng rng(seed);
    FbnnModel m = random_model(rng, 9, 3, 5, 3, seed);
    worst = std::max(worst, oracle::fbnn_gradient_error(m, random_batch(rng, 4, 9, 3)));
  }
  o.require(worst < 1e-5, "max relative error " + fmt("%.3g", worst));
  o.detail = o.pass ? "max relative error " + fmt("%.3g", worst) + " over 5 models" : o.detail;
  return o;
}

// ----------------------------------------------------------------- 2

Outcome constraint_fuzz() {
  Outcome o;
  Rng rng(2);
  FbnnModel m = random_model(rng, 12, 4, 6, 3, 2);
  long violations = 0, grad_leaks = 0;
  for (int step = 0; step < 10000; ++step) {
    const FbnnParams g = gradients(m, random_batch(rng, 8, 12, 3));
    for (Index j = 0; j < 4; ++j)
      for (Index i = 0; i < 12; ++i)
        if (m.mask(i, j) == 0.0 && g.W(i, j) != 0.0) ++grad_leaks;
    // Large random steps push W into sigmoid saturation on both sides.
    sgd_update(m, g, rng.uniform(0.0, 50.0), rng.uniform(0.0, 0.99));
    const Matrix wfb = effective_weights(m);
    violations += ((wfb.array() < 0.0) || (wfb.array() > m.mask.array())).count();
  }
  o.require(violations == 0, std::to_string(violations) + " bound violations");
  o.require(grad_leaks == 0, std::to_string(grad_leaks) + " masked entries with gradient");
  if (o.pass) o.detail = "10000 steps, 0 <= W_fb <= mask, masked gradients zero";
  return o;
}

// ----------------------------------------------------------------- 3

Outcome momentum() {
  Outcome o;
  Rng rng(3);
  FbnnModel m = random_model(rng, 9, 3, 5, 3, 3);
  const FbnnParams start = m.params;
  FbnnParams g = FbnnParams::zeros_like(m.params);
  g.for_each([](const char *, Eigen::Ref<Matrix> t) { t.setOnes(); });
  sgd_update(m, g, 1.0, 0.9);
  sgd_update(m, g, 1.0, 0.9);
  double err = 0.0;
  for (const auto &[now, then] :
       {std::pair{&m.params.W, &start.W}, {&m.params.W2, &start.W2}, {&m.params.W3, &start.W3}})
    err = std::max(err, ((*now - *then).array() + 0.29).abs().maxCoeff());
  err = std::max(err, ((m.params.b2 - start.b2).array() + 0.29).abs().maxCoeff());
  o.require(err <= 1e-12, "two-step delta off by " + fmt("%.3g", err));

  // Constant gradient c: after n steps g_new = c (1 - m^n), so the
  // cumulative change is -eta c (n - m (1 - m^n) / (1 - m)).
  const double c = 0.7, mu = 0.8, eta = 0.05;
  FbnnModel q = random_model(rng, 9, 3, 5, 3, 4);
  const Matrix w0 = q.params.W;
  FbnnParams gc = FbnnParams::zeros_like(q.params);
  gc.W.setConstant(c);
  double geo = 0.0;
  for (int n = 1; n <= 50; ++n) {
    sgd_update(q, gc, eta, mu);
    const double expect = -eta * c * (n - mu * (1.0 - std::pow(mu, n)) / (1.0 - mu));
    geo = std::max(geo, ((q.params.W - w0).array() - expect).abs().maxCoeff());
  }
  o.require(geo <= 1e-12, "geometric closed form off by " + fmt("%.3g", geo));
  if (o.pass) o.detail = "two-step delta -0.29, 50-step closed form within " + fmt("%.2g", geo);
  return o;
}

// ----------------------------------------------------------------- 4

Outcome dsp_oracles() {
  Outcome o;
  Rng rng(4);
  double parseval = 0.0;
  for (int t = 0; t < 200; ++t) {
    const Index len = 1 + static_cast<Index>(rng.index(512));
    const Vector f = testing::random_matrix(rng, len, 1).col(0);
    const Vector p = power_spectrum(f, 512);
    const double two_sided = p(0) + p(256) + 2.0 * p.segment(1, 255).sum();
    const double energy = 512.0 * f.squaredNorm();
    parseval = std::max(parseval, std::abs(two_sided - energy) / energy);
    if (p.minCoeff() < 0.0) o.require(false, "negative power");
  }
  o.require(parseval <= 1e-9, "Parseval relative error " + fmt("%.3g", parseval));

  const Vector ones = power_spectrum(Vector::Ones(8), 8);
  o.require(std::abs(ones(0) - 64.0) < 1e-12 && ones.tail(4).cwiseAbs().maxCoeff() < 1e-12,
            "constant frame spectrum");
  Vector tone(8);
  for (int n = 0; n < 8; ++n) tone(n) = std::cos(2.0 * std::numbers::pi * 2.0 * n / 8.0);
  const Vector pt = power_spectrum(tone, 8);
  o.require(std::abs(pt(2) - 16.0) < 1e-12 && std::abs(pt(0)) + std::abs(pt(1)) +
                                                      std::abs(pt(3)) + std::abs(pt(4)) <
                                                  1e-12,
            "cosine spectrum");

  const Vector w = hamming_window<double>(5);
  Vector expect(5);
  expect << 0.08, 0.54, 1.0, 0.54, 0.08;
  o.require((w - expect).cwiseAbs().maxCoeff() < 1e-15, "Hamming length 5");

  int frame_errors = 0;
  for (int t = 0; t < 1000; ++t) {
    const Index frame = 1 + static_cast<Index>(rng.index(400));
    const Index hop = 1 + static_cast<Index>(rng.index(static_cast<std::uint64_t>(frame)));
    const Index len = static_cast<Index>(rng.index(4000));
    Index brute = 0;
    for (Index s = 0; s + frame <= len; s += hop) ++brute;
    frame_errors += num_frames(len, frame, hop) != brute;
  }
  o.require(frame_errors == 0, std::to_string(frame_errors) + " frame count mismatches");
  o.require(frame_and_window({Vector::Ones(480), 16000}, 20, 10).num_frames() == 2,
            "480 samples give 2 frames");
  if (o.pass) o.detail = "Parseval rel err " + fmt("%.2g", parseval) + ", hand FFTs, window, 1000 frame counts";
  return o;
}

// ----------------------------------------------------------------- 5

Outcome cepstral_oracle() {
  Outcome o;
  Rng rng(5);
  double err = 0.0;
  for (int t = 0; t < 100; ++t) {
    const Index c = 1 + static_cast<Index>(rng.index(40));
    const Index m = 1 + static_cast<Index>(rng.index(static_cast<std::uint64_t>(c)));
    const Vector x = testing::random_matrix(rng, c, 1, -5, 5).col(0);
    err = std::max(err, (dct_matrix<double>(m, c) * x - oracle::naive_dct(x, m))
                            .cwiseAbs()
                            .maxCoeff());
  }
  o.require(err <= 1e-10, "DCT vs naive " + fmt("%.3g", err));
  double orth = 0.0;
  for (Index c : {6, 20, 128, 256}) {
    const Matrix d = dct_matrix<double>(c, c);
    orth = std::max(orth, (d * d.transpose() - Matrix::Identity(c, c)).cwiseAbs().maxCoeff());
  }
  o.require(orth <= 1e-10, "orthogonality " + fmt("%.3g", orth));
  CepstralConfig cfg;
  cfg.bank = build_filter_bank(BankSpec::with_defaults(BankKind::kTriangular, 20, 512));
  const FeatureMatrix dd = append_deltas({Matrix::Random(10, 20), FeatureKind::kCep}, cfg);
  o.require(dd.dim() == 40, "delta dim " + std::to_string(dd.dim()));
  if (o.pass)
    o.detail = "DCT err " + fmt("%.2g", err) + ", orthogonality " + fmt("%.2g", orth) + ", dim 40";
  return o;
}

// ----------------------------------------------------------------- 6

Outcome gmm_checks() {
  Outcome o;
  int decreases = 0, skipped = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed + 600);
    const Index n = 40 + static_cast<Index>(rng.index(300));
    const Index dim = 1 + static_cast<Index>(rng.index(4));
    Matrix x = testing::random_matrix(rng, n, dim, -3, 3);
    for (Index i = 0; i < n; i += 3) x.row(i).array() += 4.0;
    GmmTrainConfig cfg;
    cfg.components = 1 + static_cast<int>(rng.index(8));
    cfg.seed = seed;
    cfg.init = seed % 2 ? GmmInit::kRandomFrames : GmmInit::kKmeans;
    const GmmTrainResult r = train_gmm(x, cfg);
    for (std::size_t i = 1; i < r.log_likelihood.size(); ++i) {
      bool reseed = false;
      for (const auto &e : r.events) reseed |= e.iteration == static_cast<int>(i);
      if (reseed) {
        ++skipped;
        continue;
      }
      decreases += r.log_likelihood[i] < r.log_likelihood[i - 1] - 1e-8;
    }
  }
  o.require(decreases == 0, std::to_string(decreases) + " EM decreases");

  Rng rng(60);
  Matrix x = testing::random_matrix(rng, 300, 3, -2, 5);
  GmmTrainConfig one;
  one.components = 1;
  const GmmModel g1 = train_gmm(x, one).model;
  const Vector mean = x.colwise().mean();
  const Vector var = (x.rowwise() - mean.transpose()).array().square().colwise().mean();
  const double k1 = std::max((g1.means.row(0).transpose() - mean).cwiseAbs().maxCoeff(),
                             (g1.variances.row(0).transpose() - var).cwiseAbs().maxCoeff());
  o.require(k1 <= 1e-12, "K=1 off by " + fmt("%.3g", k1));

  Matrix two(800, 2);
  for (Index i = 0; i < 800; ++i) {
    const double cx = i < 400 ? -4.0 : 3.0, cy = i < 400 ? 1.0 : -2.0;
    two.row(i) << cx + 0.4 * rng.gaussian(), cy + 0.4 * rng.gaussian();
  }
  GmmTrainConfig k2;
  k2.components = 2;
  const GmmModel g2 = train_gmm(two, k2).model;
  const Index a = g2.means(0, 0) < 0 ? 0 : 1;
  const double d = std::max(std::hypot(g2.means(a, 0) + 4.0, g2.means(a, 1) - 1.0),
                            std::hypot(g2.means(1 - a, 0) - 3.0, g2.means(1 - a, 1) + 2.0));
  o.require(d < 0.1, "cluster mean error " + fmt("%.3g", d));
  if (o.pass)
    o.detail = "100 datasets monotone (" + std::to_string(skipped) +
               " re-seed iterations skipped), K=1 err " + fmt("%.2g", k1) +
               ", cluster err " + fmt("%.3f", d);
  return o;
}

// ----------------------------------------------------------------- 7

Outcome eer_oracle() {
  Outcome o;
  Rng rng(7);
  double worst = 0.0;
  int transform_mismatch = 0;
  for (int t = 0; t < 1000; ++t) {
    const bool ties = t % 2;
    auto draw = [&](std::size_t n, double shift) {
      std::vector<double> v(n);
      for (auto &s : v) s = ties ? std::floor(rng.uniform(0, 6)) + shift : rng.gaussian() + shift;
      return v;
    };
    const auto pos = draw(1 + rng.index(40), 0.8);
    const auto neg = draw(1 + rng.index(40), 0.0);
    const double e = compute_eer(pos, neg);
    worst = std::max(worst, std::abs(e - oracle::brute_force_eer(pos, neg)));
    auto tp = pos, tn = neg;
    for (auto &s : tp) s = std::atan(s) * 5.0 - 2.0;
    for (auto &s : tn) s = std::atan(s) * 5.0 - 2.0;
    transform_mismatch += compute_eer(tp, tn) != e;
  }
  o.require(worst <= 1e-9, "brute-force difference " + fmt("%.3g", worst));
  o.require(transform_mismatch == 0,
            std::to_string(transform_mismatch) + " monotone-transform mismatches");
  if (o.pass) o.detail = "1000 sets, max diff " + fmt("%.2g", worst) + ", transform-invariant";
  return o;
}

// ----------------------------------------------------------------- 8, 9

struct PipelineRun {
  bool ok = true;
  std::string failure;
  double dnn_eer = NAN, manual_eer = NAN;
};

// Runs the full pipeline with relative paths inside `dir`.
PipelineRun run_pipeline(const fs::path &dir, const fs::path &synth_tool) {
  PipelineRun r;
  const fs::path cwd = fs::current_path();
  fs::remove_all(dir);
  fs::create_directories(dir);
  fs::current_path(dir);
  auto step = [&](std::vector<std::string> args) {
    if (!r.ok) return;
    std::ostringstream out, err;
    if (run_command(args, out, err) != kExitOk) {
      r.ok = false;
      r.failure = args[0] + ": " + err.str();
    }
  };
  const std::string synth = "\"" + synth_tool.string() +
                            "\" --out-dir corpus --train 200 --test 200 --seed 2026 > synth.log";
  if (std::system(synth.c_str()) != 0) {
    r.ok = false;
    r.failure = "fbcc-synth failed";
  }
  for (const std::string split : {"train", "test"}) {
    step({"extract", "--manifest", "corpus/" + split + ".tsv", "--out-dir", "power_" + split,
          "--mode", "power", "--threads", "4"});
    step({"extract", "--manifest", "corpus/" + split + ".tsv", "--out-dir", "lfcc_" + split,
          "--preset", "lfcc", "--threads", "4"});
  }
  step({"train-fbnn", "--features", "power_train/features.tsv", "--preset", "dnn-lfcc",
        "--epochs", "10", "--seed", "11", "--out", "fbnn.json"});
  step({"export-learned-bank", "--fbnn", "fbnn.json", "--out", "learned_bank.csv"});
  for (const std::string split : {"train", "test"})
    step({"extract", "--manifest", "corpus/" + split + ".tsv", "--out-dir", "dnn_" + split,
          "--preset", "dnn-lfcc", "--fbnn", "fbnn.json", "--threads", "4"});
  for (const std::string f : {"lfcc", "dnn"}) {
    for (const std::string label : {"human", "spoof"})
      step({"train-gmm", "--features", f + "_train/features.tsv", "--label", label,
            "--gmm-k", "8", "--em-iters", "10", "--seed", "5", "--out",
            "gmm_" + f + "_" + label + ".json"});
    step({"score", "--features", f + "_test/features.tsv", "--human",
          "gmm_" + f + "_human.json", "--spoof", "gmm_" + f + "_spoof.json", "--threads", "4",
          "--out", "scores_" + f + ".tsv"});
    step({"eval", "--scores", "scores_" + f + ".tsv", "--known", "S1", "--json",
          "report_" + f + ".json"});
  }
  if (r.ok) {
    r.dnn_eer = read_json("report_dnn.json")["all_avg"].get<double>();
    r.manual_eer = read_json("report_lfcc.json")["all_avg"].get<double>();
  }
  fs::current_path(cwd);
  return r;
}

Outcome end_to_end(const PipelineRun &r, double seconds) {
  Outcome o;
  if (!r.ok) {
    o.require(false, r.failure);
    return o;
  }
  o.require(r.dnn_eer <= 5.0, "DNN-LFCC EER " + fmt("%.2f%%", r.dnn_eer) + " > 5%");
  o.require(r.dnn_eer <= r.manual_eer, "DNN-LFCC EER " + fmt("%.2f%%", r.dnn_eer) +
                                           " above LFCC " + fmt("%.2f%%", r.manual_eer));
  o.require(seconds < 300.0, "took " + fmt("%.0f s", seconds));
  if (o.pass)
    o.detail = "DNN-LFCC EER " + fmt("%.2f%%", r.dnn_eer) + ", LFCC EER " +
               fmt("%.2f%%", r.manual_eer) + ", " + fmt("%.1f s", seconds);
  return o;
}

Outcome reproducibility(const fs::path &a, const fs::path &b, const PipelineRun &rb) {
  Outcome o;
  if (!rb.ok) {
    o.require(false, rb.failure);
    return o;
  }
  int files = 0, differing = 0;
  std::string first;
  for (const auto &entry : fs::recursive_directory_iterator(a)) {
    if (!entry.is_regular_file()) continue;
    const fs::path rel = fs::relative(entry.path(), a);
    ++files;
    if (!fs::exists(b / rel) || read_file_bytes(entry.path()) != read_file_bytes(b / rel)) {
      if (first.empty()) first = rel.string();
      ++differing;
    }
  }
  o.require(differing == 0, std::to_string(differing) + " of " + std::to_string(files) +
                                " files differ, e.g. " + first);
  if (o.pass)
    o.detail = std::to_string(files) + " files byte-identical (audio, features, models, scores, reports, sidecars)";
  return o;
}

}  // namespace
}  // namespace fbcc

int main(int argc, char **argv) {
  using namespace fbcc;
  using Clock = std::chrono::steady_clock;
  const fs::path root = fs::absolute(FBCC_TEST_TMPDIR);
  const fs::path synth_tool =
      fs::absolute(fs::path(argv[0])).parent_path().parent_path() / "tools" / "fbcc-synth";
  (void)argc;

  int failures = 0;
  auto report = [&](int id, const char *name, double budget,
                    const std::function<Outcome()> &check) {
    const auto t0 = Clock::now();
    Outcome o = check();
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (budget > 0 && secs >= budget) o.require(false, "took " + fmt("%.1f s", secs));
    failures += !o.pass;
    std::printf("[%s] criterion %d: %s (%s) [%.2f s]\n", o.pass ? "PASS" : "FAIL", id, name,
                o.detail.c_str(), secs);
    std::fflush(stdout);
  };

  report(1, "FBNN gradients match central differences", 5, gradient_check);
  report(2, "filter bank constraint invariants", 30, constraint_fuzz);
  report(3, "momentum recursion", 0, momentum);
  report(4, "DSP oracles", 10, dsp_oracles);
  report(5, "cepstral oracle", 0, cepstral_oracle);
  report(6, "GMM EM properties", 60, gmm_checks);
  report(7, "EER oracle", 0, eer_oracle);

  PipelineRun first;
  report(8, "synthetic end-to-end", 0, [&] {
    const auto t0 = Clock::now();
    first = run_pipeline(root / "run_a", synth_tool);
    return end_to_end(first, std::chrono::duration<double>(Clock::now() - t0).count());
  });
  report(9, "reproducible reruns", 0, [&] {
    const PipelineRun second = run_pipeline(root / "run_b", synth_tool);
    if (!first.ok) {
      Outcome o;
      o.require(false, "first run failed: " + first.failure);
      return o;
    }
    return reproducibility(root / "run_a", root / "run_b", second);
  });

  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
