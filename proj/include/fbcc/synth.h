// fbcc/synth.h

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

// Synthetic two-class corpus for desk-scale experiments. The "natural" class
// is speech-shaped noise: white noise through a leaky integrator (-6 dB per
// octave above ~130 Hz) under a slow syllable-rate envelope. The "synthetic"
// class adds a stationary narrow-band resonance in the high band, standing in
// for vocoder artifacts.

#ifndef FBCC_SYNTH_H_
#define FBCC_SYNTH_H_

#include <cstdint>

#include "fbcc/dsp.h"

namespace fbcc {

enum class SynthClass { kNatural, kSynthetic };

struct SynthConfig {
  int sample_rate = kDefaultSampleRate;
  double duration_s = 1.0;
  double rms = 0.2;                // of the speech-shaped part
  double level_jitter_db = 3.0;    // per-utterance uniform +/- jitter
  double integrator_pole = 0.95;
  double envelope_rate_lo = 3.0;   // Hz
  double envelope_rate_hi = 6.0;
  double envelope_floor = 0.15;    // envelope minimum, fraction of peak
  double resonance_hz = 6000.0;
  double resonance_bandwidth_hz = 200.0;
  double resonance_db = -35.0;     // resonance power relative to speech part
};

/// Deterministic in (cls, seed, config).
AudioBuffer synth_utterance(SynthClass cls, std::uint64_t seed,
                            const SynthConfig &config = {});

}  // namespace fbcc

#endif  // FBCC_SYNTH_H_
