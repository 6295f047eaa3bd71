// fbcc/preset.h

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

#ifndef FBCC_PRESET_H_
#define FBCC_PRESET_H_

#include <span>
#include <string>
#include <string_view>

#include "fbcc/filterbank.h"

namespace fbcc {

/// A named cepstral feature configuration. Learned presets take their bank
/// from a trained FBNN whose mask is built from `kind`.
struct PipelinePreset {
  std::string_view name;
  int nfft;
  int channels;
  int coeffs;
  BankKind kind;
  bool learned;

  BankSpec bank_spec(int sample_rate = kDefaultSampleRate) const {
    return BankSpec::with_defaults(kind, channels, nfft, sample_rate);
  }
};

/// lfcc, rfcc, gfcc, igfcc and their dnn- counterparts.
std::span<const PipelinePreset> all_presets();

/// Throws ConfigError for an unknown name.
const PipelinePreset &find_preset(std::string_view name);

}  // namespace fbcc

#endif  // FBCC_PRESET_H_
