// fbcc/manifest.h

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

#ifndef FBCC_MANIFEST_H_
#define FBCC_MANIFEST_H_

#include <filesystem>
#include <string>
#include <vector>

#include "fbcc/eval.h"

namespace fbcc {

struct ManifestRow {
  std::filesystem::path path;  // resolved against the manifest's directory
  TrialLabel label = TrialLabel::kHuman;
  std::string attack_id = "-";
  int class_index = -1;  // -1 when the manifest has no fourth column

  /// File name without extension.
  std::string utt_id() const { return path.stem().string(); }
};

struct Manifest {
  std::vector<ManifestRow> rows;
};

/// Reads a TSV of `path  label  attack_id  [class_index]`. Blank lines and
/// lines starting with '#' are skipped. Relative paths are resolved against
/// the manifest's directory and must exist.
///
/// Rejected with a ParseError carrying the line number: wrong field count,
/// a label other than human/spoof, a spoof row with attack "-", a human row
/// with an attack id, a human row with class_index != 0, a spoof row with
/// class_index 0, class_index outside [0, max_classes) when max_classes > 0,
/// a missing file and a duplicate path.
Manifest parse_manifest(const std::filesystem::path &path, int max_classes = 0);

/// Writes rows with paths relative to the manifest's directory when they
/// live below it.
void write_manifest(const std::filesystem::path &path, const Manifest &manifest);

}  // namespace fbcc

#endif  // FBCC_MANIFEST_H_
