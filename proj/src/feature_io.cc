// src/feature_io.cc

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

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include <openssl/evp.h>

#include "fbcc/io.h"

namespace fbcc {

namespace {

constexpr std::size_t kHeaderBytes = 4 + 4 + 4 + 1;

void put_u32(std::string &out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>(v >> (8 * i)));
}

std::uint32_t get_u32(std::string_view b, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i)
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(b[at + i]))
         << (8 * i);
  return v;
}

}  // namespace

std::string encode_fbf1(const FeatureMatrix &features) {
  const Index rows = features.num_frames(), cols = features.dim();
  if (rows > std::numeric_limits<std::uint32_t>::max() ||
      cols > std::numeric_limits<std::uint32_t>::max())
    throw ConfigError("feature matrix too large for FBF1");
  std::string out;
  out.reserve(kHeaderBytes + static_cast<std::size_t>(rows * cols) * 4);
  out += "FBF1";
  put_u32(out, static_cast<std::uint32_t>(rows));
  put_u32(out, static_cast<std::uint32_t>(cols));
  out.push_back(static_cast<char>(features.kind));
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      const auto bits = std::bit_cast<std::uint32_t>(
          static_cast<float>(features.rows(r, c)));
      put_u32(out, bits);
    }
  }
  return out;
}

FeatureMatrix decode_fbf1(std::string_view bytes) {
  if (bytes.size() < 4 || bytes.substr(0, 4) != "FBF1")
    throw FormatError("bad FBF1 magic", 0);
  if (bytes.size() < kHeaderBytes)
    throw FormatError("truncated FBF1 header",
                      static_cast<std::int64_t>(bytes.size()));
  const std::uint32_t rows = get_u32(bytes, 4);
  const std::uint32_t cols = get_u32(bytes, 8);
  const auto kind = static_cast<std::uint8_t>(bytes[12]);
  if (kind > static_cast<std::uint8_t>(FeatureKind::kCepDeltas))
    throw FormatError("unknown FBF1 feature kind " + std::to_string(kind), 12);
  const std::uint64_t payload = std::uint64_t{rows} * cols * 4;
  if (kHeaderBytes + payload > bytes.size())
    throw FormatError("FBF1 payload truncated: header declares " +
                          std::to_string(rows) + "x" + std::to_string(cols),
                      static_cast<std::int64_t>(bytes.size()));
  if (kHeaderBytes + payload < bytes.size())
    throw FormatError("trailing bytes after FBF1 payload",
                      static_cast<std::int64_t>(kHeaderBytes + payload));
  FeatureMatrix out{Matrix(rows, cols), static_cast<FeatureKind>(kind)};
  std::size_t at = kHeaderBytes;
  for (std::uint32_t r = 0; r < rows; ++r) {
    for (std::uint32_t c = 0; c < cols; ++c, at += 4)
      out.rows(r, c) = std::bit_cast<float>(get_u32(bytes, at));
  }
  return out;
}

std::string read_file_bytes(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::filesystem::path &path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

void write_features(const std::filesystem::path &path,
                    const FeatureMatrix &features) {
  write_file_bytes(path, encode_fbf1(features));
}

FeatureMatrix read_features(const std::filesystem::path &path) {
  try {
    return decode_fbf1(read_file_bytes(path));
  } catch (const FormatError &e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(),
                 nullptr) != 1)
    throw IoError("SHA-256 failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < length; ++i) {
    hex.push_back(kHex[digest[i] >> 4]);
    hex.push_back(kHex[digest[i] & 15]);
  }
  return hex;
}

std::string sha256_file(const std::filesystem::path &path) {
  return sha256_hex(read_file_bytes(path));
}

}  // namespace fbcc
