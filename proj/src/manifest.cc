// src/manifest.cc

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

#include "fbcc/manifest.h"

#include <fstream>
#include <set>
#include <sstream>

#include "fbcc/types.h"

namespace fbcc {

Manifest parse_manifest(const std::filesystem::path &path, int max_classes) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest " + path.string());
  const std::filesystem::path base = path.parent_path();

  Manifest manifest;
  std::set<std::filesystem::path> seen;
  std::string line;
  std::int64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, '\t')) cells.push_back(cell);
    if (cells.size() < 3 || cells.size() > 4)
      throw ParseError("expected 3 or 4 tab-separated fields, got " +
                           std::to_string(cells.size()),
                       lineno);

    ManifestRow row;
    const std::filesystem::path raw(cells[0]);
    row.path = raw.is_absolute() ? raw : base / raw;
    if (cells[1] == "human") {
      row.label = TrialLabel::kHuman;
    } else if (cells[1] == "spoof") {
      row.label = TrialLabel::kSpoof;
    } else {
      throw ParseError("label must be human or spoof, got '" + cells[1] + "'",
                       lineno);
    }
    row.attack_id = cells[2];
    if (row.attack_id.empty()) throw ParseError("empty attack id", lineno);
    if (row.label == TrialLabel::kSpoof && row.attack_id == "-")
      throw ParseError("spoof row needs an attack id", lineno);
    if (row.label == TrialLabel::kHuman && row.attack_id != "-")
      throw ParseError("human row must use attack id '-'", lineno);

    if (cells.size() == 4) {
      try {
        std::size_t used = 0;
        row.class_index = std::stoi(cells[3], &used);
        if (used != cells[3].size()) throw std::invalid_argument(cells[3]);
      } catch (const std::exception &) {
        throw ParseError("bad class index '" + cells[3] + "'", lineno);
      }
      if (row.class_index < 0 ||
          (max_classes > 0 && row.class_index >= max_classes))
        throw ParseError("class index " + cells[3] + " out of range", lineno);
      if (row.label == TrialLabel::kHuman && row.class_index != 0)
        throw ParseError("human rows must have class index 0", lineno);
      if (row.label == TrialLabel::kSpoof && row.class_index == 0)
        throw ParseError("class index 0 is reserved for human rows", lineno);
    }

    if (!std::filesystem::exists(row.path))
      throw ParseError("file not found: " + row.path.string(), lineno);
    const auto key = row.path.lexically_normal();
    if (!seen.insert(key).second)
      throw ParseError("duplicate path " + cells[0], lineno);
    manifest.rows.push_back(std::move(row));
  }
  return manifest;
}

void write_manifest(const std::filesystem::path &path, const Manifest &manifest) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  const std::filesystem::path base = path.parent_path();
  for (const auto &row : manifest.rows) {
    std::filesystem::path shown = row.path;
    if (!base.empty()) {
      const auto rel = row.path.lexically_relative(base);
      if (!rel.empty() && *rel.begin() != "..") shown = rel;
    }
    out << shown.generic_string() << '\t' << to_string(row.label) << '\t'
        << row.attack_id;
    if (row.class_index >= 0) out << '\t' << row.class_index;
    out << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace fbcc
