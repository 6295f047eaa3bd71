// src/synth.cc

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

#include "fbcc/synth.h"

#include <cmath>
#include <numbers>

#include "fbcc/random.h"

namespace fbcc {

namespace {

Vector white(Rng &rng, Index n) {
  Vector x(n);
  for (Index i = 0; i < n; ++i) x(i) = rng.gaussian();
  return x;
}

double rms_of(const Vector &x) {
  return x.size() ? std::sqrt(x.squaredNorm() / static_cast<double>(x.size()))
                  : 0.0;
}

}  // namespace

AudioBuffer synth_utterance(SynthClass cls, std::uint64_t seed,
                            const SynthConfig &config) {
  if (config.sample_rate <= 0 || !(config.duration_s > 0.0))
    throw ConfigError("synthesis needs a positive rate and duration");
  const double fs = config.sample_rate;
  const auto n = static_cast<Index>(std::llround(config.duration_s * fs));
  // Both classes draw the same random stream for the shared part.
  Rng rng(seed);

  Vector speech = white(rng, n);
  for (Index i = 1; i < n; ++i) speech(i) += config.integrator_pole * speech(i - 1);

  const double rate = rng.uniform(config.envelope_rate_lo, config.envelope_rate_hi);
  const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
  for (Index i = 0; i < n; ++i) {
    const double swing =
        0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * rate * i / fs + phase));
    speech(i) *= config.envelope_floor + (1.0 - config.envelope_floor) * swing;
  }
  const double jitter_db =
      rng.uniform(-config.level_jitter_db, config.level_jitter_db);
  const double target = config.rms * std::pow(10.0, jitter_db / 20.0);
  if (const double r = rms_of(speech); r > 0.0) speech *= target / r;

  Vector resonance = white(rng, n);
  if (cls == SynthClass::kSynthetic) {
    const double radius =
        std::exp(-std::numbers::pi * config.resonance_bandwidth_hz / fs);
    const double theta = 2.0 * std::numbers::pi * config.resonance_hz / fs;
    const double a1 = 2.0 * radius * std::cos(theta), a2 = -radius * radius;
    for (Index i = 0; i < n; ++i) {
      if (i >= 1) resonance(i) += a1 * resonance(i - 1);
      if (i >= 2) resonance(i) += a2 * resonance(i - 2);
    }
    const double level = target * std::pow(10.0, config.resonance_db / 20.0);
    if (const double r = rms_of(resonance); r > 0.0) speech += resonance * (level / r);
  }
  return {speech, config.sample_rate};
}

}  // namespace fbcc
