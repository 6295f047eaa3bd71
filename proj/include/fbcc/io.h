// fbcc/io.h

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

// File formats: FBF1 feature files and the JSON model container shared by
// FBNN and GMM models.

#ifndef FBCC_IO_H_
#define FBCC_IO_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "fbcc/cepstral.h"
#include "fbcc/fbnn.h"
#include "fbcc/gmm.h"
#include "json.hpp"

namespace fbcc {

// FBF1 layout: "FBF1", u32 rows, u32 cols, u8 kind, rows*cols f32 row-major,
// all little-endian.
std::string encode_fbf1(const FeatureMatrix &features);
FeatureMatrix decode_fbf1(std::string_view bytes);
void write_features(const std::filesystem::path &path,
                    const FeatureMatrix &features);
FeatureMatrix read_features(const std::filesystem::path &path);

std::string base64_encode(std::string_view bytes);
/// Throws FormatError on characters outside the alphabet or bad padding.
std::string base64_decode(std::string_view text);

/// {"shape": [rows, cols], "dtype": "f64le", "data": base64 of row-major
/// little-endian doubles}.
nlohmann::json tensor_to_json(const Eigen::Ref<const Matrix> &m);
Matrix tensor_from_json(const nlohmann::json &j);

/// Provenance stored next to the tensors of an FBNN model.
struct FbnnProvenance {
  TrainConfig config;
  std::string mask_kind = "learned";  // bank kind of the mask, if known
  std::vector<double> epoch_losses;
};

nlohmann::json fbnn_to_json(const FbnnModel &model,
                            const FbnnProvenance &provenance);
FbnnModel fbnn_from_json(const nlohmann::json &j);

nlohmann::json gmm_to_json(const GmmModel &model, const GmmTrainConfig &config,
                           const std::vector<double> &log_likelihood);
GmmModel gmm_from_json(const nlohmann::json &j);

/// Writes `j.dump(2)` plus a trailing newline.
void write_json(const std::filesystem::path &path, const nlohmann::json &j);
nlohmann::json read_json(const std::filesystem::path &path);

std::string read_file_bytes(const std::filesystem::path &path);
void write_file_bytes(const std::filesystem::path &path, std::string_view bytes);

/// Hex SHA-256 of the file contents.
std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path &path);

}  // namespace fbcc

#endif  // FBCC_IO_H_
