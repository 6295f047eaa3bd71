// src/model_io.cc

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

#include <array>
#include <bit>
#include <fstream>

#include "fbcc/io.h"

namespace fbcc {

namespace {

constexpr char kAlphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
constexpr const char *kFormat = "fbcc-model";
constexpr int kVersion = 1;

std::array<int, 256> decode_table() {
  std::array<int, 256> t{};
  t.fill(-1);
  for (int i = 0; i < 64; ++i) t[static_cast<unsigned char>(kAlphabet[i])] = i;
  return t;
}

void check_header(const nlohmann::json &j, std::string_view type) {
  if (!j.is_object() || j.value("format", "") != kFormat)
    throw FormatError("not an fbcc model document");
  if (j.value("version", 0) != kVersion)
    throw FormatError("unsupported model version");
  if (j.value("type", "") != type)
    throw FormatError("expected a " + std::string(type) + " model, got '" +
                      j.value("type", "") + "'");
}

}  // namespace

std::string base64_encode(std::string_view bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  auto byte = [&](std::size_t k) {
    return static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[k]));
  };
  for (; i + 3 <= bytes.size(); i += 3) {
    const std::uint32_t v = byte(i) << 16 | byte(i + 1) << 8 | byte(i + 2);
    for (int s = 18; s >= 0; s -= 6) out.push_back(kAlphabet[(v >> s) & 63]);
  }
  const std::size_t rest = bytes.size() - i;
  if (rest == 1) {
    const std::uint32_t v = byte(i) << 16;
    out.push_back(kAlphabet[(v >> 18) & 63]);
    out.push_back(kAlphabet[(v >> 12) & 63]);
    out += "==";
  } else if (rest == 2) {
    const std::uint32_t v = byte(i) << 16 | byte(i + 1) << 8;
    out.push_back(kAlphabet[(v >> 18) & 63]);
    out.push_back(kAlphabet[(v >> 12) & 63]);
    out.push_back(kAlphabet[(v >> 6) & 63]);
    out.push_back('=');
  }
  return out;
}

std::string base64_decode(std::string_view text) {
  static const std::array<int, 256> table = decode_table();
  if (text.size() % 4 != 0)
    throw FormatError("base64 length is not a multiple of 4");
  std::string out;
  out.reserve(text.size() / 4 * 3);
  for (std::size_t i = 0; i < text.size(); i += 4) {
    int vals[4];
    int pad = 0;
    for (int k = 0; k < 4; ++k) {
      const char ch = text[i + k];
      if (ch == '=' && i + 4 == text.size() && k >= 2) {
        vals[k] = 0;
        ++pad;
        continue;
      }
      if (pad > 0) throw FormatError("bad base64 padding", static_cast<std::int64_t>(i + k));
      vals[k] = table[static_cast<unsigned char>(ch)];
      if (vals[k] < 0)
        throw FormatError("bad base64 character", static_cast<std::int64_t>(i + k));
    }
    const std::uint32_t v = static_cast<std::uint32_t>(vals[0]) << 18 |
                            static_cast<std::uint32_t>(vals[1]) << 12 |
                            static_cast<std::uint32_t>(vals[2]) << 6 |
                            static_cast<std::uint32_t>(vals[3]);
    out.push_back(static_cast<char>(v >> 16));
    if (pad < 2) out.push_back(static_cast<char>((v >> 8) & 0xff));
    if (pad < 1) out.push_back(static_cast<char>(v & 0xff));
  }
  return out;
}

nlohmann::json tensor_to_json(const Eigen::Ref<const Matrix> &m) {
  std::string raw;
  raw.reserve(static_cast<std::size_t>(m.size()) * 8);
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      const auto bits = std::bit_cast<std::uint64_t>(m(r, c));
      for (int i = 0; i < 8; ++i) raw.push_back(static_cast<char>(bits >> (8 * i)));
    }
  }
  return {{"shape", {m.rows(), m.cols()}}, {"dtype", "f64le"},
          {"data", base64_encode(raw)}};
}

Matrix tensor_from_json(const nlohmann::json &j) {
  if (!j.is_object() || !j.contains("shape") || !j.contains("data") ||
      j.value("dtype", "") != "f64le")
    throw FormatError("malformed tensor");
  const auto shape = j.at("shape").get<std::vector<Index>>();
  if (shape.size() != 2 || shape[0] < 0 || shape[1] < 0)
    throw FormatError("tensor shape must be [rows, cols]");
  const std::string raw = base64_decode(j.at("data").get<std::string>());
  if (raw.size() != static_cast<std::size_t>(shape[0] * shape[1]) * 8)
    throw FormatError("tensor data size does not match its shape");
  Matrix m(shape[0], shape[1]);
  std::size_t at = 0;
  for (Index r = 0; r < shape[0]; ++r) {
    for (Index c = 0; c < shape[1]; ++c) {
      std::uint64_t bits = 0;
      for (int i = 0; i < 8; ++i, ++at)
        bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(raw[at]))
                << (8 * i);
      m(r, c) = std::bit_cast<double>(bits);
    }
  }
  return m;
}

nlohmann::json fbnn_to_json(const FbnnModel &model,
                            const FbnnProvenance &provenance) {
  const TrainConfig &cfg = provenance.config;
  nlohmann::json schedule = nlohmann::json::array();
  for (const auto &rule : cfg.schedule)
    schedule.push_back(
        {{"learning_rate", rule.learning_rate}, {"momentum", rule.momentum}});
  nlohmann::json j;
  j["format"] = kFormat;
  j["version"] = kVersion;
  j["type"] = "fbnn";
  j["sample_rate"] = model.sample_rate;
  j["log_compress"] = model.log_compress;
  j["mask_kind"] = provenance.mask_kind;
  j["seed"] = cfg.seed;
  j["config"] = {{"epochs", cfg.epochs},
                 {"batch_size", cfg.batch_size},
                 {"schedule", schedule},
                 {"seed", cfg.seed},
                 {"hidden_nodes", cfg.hidden_nodes},
                 {"num_outputs", model.outputs()},
                 {"init_range", cfg.init_range},
                 {"log_compress", cfg.log_compress}};
  j["epoch_losses"] = provenance.epoch_losses;
  nlohmann::json tensors;
  tensors["mask"] = tensor_to_json(model.mask);
  model.params.for_each([&](const char *name, const Eigen::Ref<const Matrix> &t) {
    tensors[name] = tensor_to_json(t);
  });
  model.momentum.for_each([&](const char *name, const Eigen::Ref<const Matrix> &t) {
    tensors[std::string("momentum.") + name] = tensor_to_json(t);
  });
  j["tensors"] = tensors;
  return j;
}

FbnnModel fbnn_from_json(const nlohmann::json &j) {
  check_header(j, "fbnn");
  try {
    const auto &t = j.at("tensors");
    FbnnModel model;
    model.sample_rate = j.at("sample_rate").get<int>();
    model.log_compress = j.value("log_compress", false);
    model.mask = tensor_from_json(t.at("mask"));
    model.params.W = tensor_from_json(t.at("W"));
    model.params.W2 = tensor_from_json(t.at("W2"));
    model.params.b2 = tensor_from_json(t.at("b2")).reshaped();
    model.params.W3 = tensor_from_json(t.at("W3"));
    model.params.b3 = tensor_from_json(t.at("b3")).reshaped();
    model.momentum.W = tensor_from_json(t.at("momentum.W"));
    model.momentum.W2 = tensor_from_json(t.at("momentum.W2"));
    model.momentum.b2 = tensor_from_json(t.at("momentum.b2")).reshaped();
    model.momentum.W3 = tensor_from_json(t.at("momentum.W3"));
    model.momentum.b3 = tensor_from_json(t.at("momentum.b3")).reshaped();

    const auto &p = model.params;
    if (p.W.rows() != model.mask.rows() || p.W.cols() != model.mask.cols() ||
        p.W2.rows() != p.W.cols() || p.b2.size() != p.W2.cols() ||
        p.W3.rows() != p.W2.cols() || p.b3.size() != p.W3.cols() ||
        model.momentum.W.rows() != p.W.rows() ||
        model.momentum.W.cols() != p.W.cols())
      throw FormatError("FBNN tensor shapes are inconsistent");
    return model;
  } catch (const nlohmann::json::exception &e) {
    throw FormatError(std::string("malformed FBNN model: ") + e.what());
  }
}

nlohmann::json gmm_to_json(const GmmModel &model, const GmmTrainConfig &config,
                           const std::vector<double> &log_likelihood) {
  nlohmann::json j;
  j["format"] = kFormat;
  j["version"] = kVersion;
  j["type"] = "gmm";
  j["seed"] = config.seed;
  j["config"] = {{"components", config.components},
                 {"em_iters", config.em_iters},
                 {"var_floor_factor", config.var_floor_factor},
                 {"seed", config.seed},
                 {"init", config.init == GmmInit::kKmeans ? "kmeans"
                                                          : "random_frames"},
                 {"kmeans_iters", config.kmeans_iters}};
  j["log_likelihood"] = log_likelihood;
  j["tensors"] = {{"weights", tensor_to_json(model.weights)},
                  {"means", tensor_to_json(model.means)},
                  {"variances", tensor_to_json(model.variances)}};
  return j;
}

GmmModel gmm_from_json(const nlohmann::json &j) {
  check_header(j, "gmm");
  try {
    const auto &t = j.at("tensors");
    GmmModel model;
    model.weights = tensor_from_json(t.at("weights")).reshaped();
    model.means = tensor_from_json(t.at("means"));
    model.variances = tensor_from_json(t.at("variances"));
    model.validate();
    return model;
  } catch (const nlohmann::json::exception &e) {
    throw FormatError(std::string("malformed GMM model: ") + e.what());
  } catch (const ConfigError &e) {
    throw FormatError(std::string("invalid GMM model: ") + e.what());
  }
}

void write_json(const std::filesystem::path &path, const nlohmann::json &j) {
  write_file_bytes(path, j.dump(2) + "\n");
}

nlohmann::json read_json(const std::filesystem::path &path) {
  try {
    return nlohmann::json::parse(read_file_bytes(path));
  } catch (const nlohmann::json::parse_error &e) {
    throw FormatError(path.string() + ": " + e.what(),
                      static_cast<std::int64_t>(e.byte));
  }
}

}  // namespace fbcc
