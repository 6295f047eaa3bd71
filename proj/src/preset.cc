// src/preset.cc

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

#include "fbcc/preset.h"

#include <array>

namespace fbcc {

namespace {

constexpr std::array<PipelinePreset, 8> kPresets = {{
    {"lfcc", 512, 20, 20, BankKind::kTriangular, false},
    {"rfcc", 512, 20, 20, BankKind::kRectangular, false},
    {"gfcc", 1024, 128, 20, BankKind::kGammatone, false},
    {"igfcc", 1024, 128, 20, BankKind::kInvertedGammatone, false},
    {"dnn-lfcc", 512, 20, 20, BankKind::kTriangular, true},
    {"dnn-rfcc", 512, 20, 20, BankKind::kRectangular, true},
    {"dnn-gfcc", 1024, 128, 20, BankKind::kGammatone, true},
    {"dnn-igfcc", 1024, 128, 20, BankKind::kInvertedGammatone, true},
}};

}  // namespace

std::span<const PipelinePreset> all_presets() { return kPresets; }

const PipelinePreset &find_preset(std::string_view name) {
  for (const auto &p : kPresets)
    if (p.name == name) return p;
  throw ConfigError("unknown preset '" + std::string(name) + "'");
}

}  // namespace fbcc
