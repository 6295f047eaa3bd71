// src/cepstral.cc

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

#include "fbcc/cepstral.h"

#include <algorithm>

namespace fbcc {

std::string_view to_string(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::kPower: return "power";
    case FeatureKind::kFbank: return "fbank";
    case FeatureKind::kCep: return "cep";
    case FeatureKind::kCepDeltas: return "cep_deltas";
  }
  return "unknown";
}

void CepstralConfig::validate() const {
  if (num_coeffs < 1 || num_coeffs > bank.num_channels())
    throw ConfigError("need 1 <= num_coeffs <= channels, got M=" +
                      std::to_string(num_coeffs) +
                      ", C=" + std::to_string(bank.num_channels()));
  if (!(log_floor > 0.0)) throw ConfigError("log floor must be positive");
  if (delta_window < 1) throw ConfigError("delta window must be >= 1");
}

Matrix filter_bank_energies(const Matrix &power, const FilterBank &bank) {
  if (power.cols() != bank.num_bins())
    throw ConfigError("power spectrum has " + std::to_string(power.cols()) +
                      " bins, filter bank expects " +
                      std::to_string(bank.num_bins()));
  return power * bank.weights;
}

FeatureMatrix cepstra(const Matrix &power, const CepstralConfig &config) {
  config.validate();
  const Matrix energies = filter_bank_energies(power, config.bank);
  const Matrix dct = dct_matrix(config.num_coeffs, config.bank.num_channels());
  const Matrix logs = energies.array().max(config.log_floor).log().matrix();
  return {logs * dct.transpose(), FeatureKind::kCep};
}

Matrix regression_deltas(const Matrix &x, int window) {
  if (window < 1) throw ConfigError("delta window must be >= 1");
  const Index frames = x.rows();
  Matrix out = Matrix::Zero(frames, x.cols());
  if (frames == 0) return out;
  double denom = 0.0;
  for (int k = 1; k <= window; ++k) denom += static_cast<double>(k) * k;
  denom *= 2.0;
  for (Index t = 0; t < frames; ++t) {
    for (int k = 1; k <= window; ++k) {
      const Index ahead = std::min<Index>(t + k, frames - 1);
      const Index behind = std::max<Index>(t - k, 0);
      out.row(t) += k * (x.row(ahead) - x.row(behind));
    }
  }
  return out / denom;
}

FeatureMatrix append_deltas(const FeatureMatrix &cep,
                            const CepstralConfig &config) {
  const Matrix delta = regression_deltas(cep.rows, config.delta_window);
  const Matrix delta2 = regression_deltas(delta, config.delta_window);
  const Index dim = cep.dim();
  const Index blocks = config.include_static ? 3 : 2;
  FeatureMatrix out{Matrix(cep.num_frames(), blocks * dim),
                    FeatureKind::kCepDeltas};
  Index at = 0;
  if (config.include_static) {
    out.rows.middleCols(at, dim) = cep.rows;
    at += dim;
  }
  out.rows.middleCols(at, dim) = delta;
  out.rows.middleCols(at + dim, dim) = delta2;
  return out;
}

void PipelineConfig::validate() const {
  if (!(preemphasis >= 0.0 && preemphasis < 1.0))
    throw ConfigError("pre-emphasis coefficient must be in [0, 1)");
  if (!is_power_of_two(nfft)) throw ConfigError("nfft must be a power of two");
  if (cepstral.bank.num_bins() != nfft / 2 + 1)
    throw ConfigError("filter bank has " +
                      std::to_string(cepstral.bank.num_bins()) +
                      " bins but nfft=" + std::to_string(nfft) + " gives " +
                      std::to_string(nfft / 2 + 1));
  cepstral.validate();
}

Matrix utterance_power_spectra(const AudioBuffer &audio,
                               const PipelineConfig &config) {
  const AudioBuffer emphasized = pre_emphasize(audio, config.preemphasis);
  const FrameMatrix frames =
      frame_and_window(emphasized, config.frame_ms, config.hop_ms);
  return power_spectra(frames, config.nfft);
}

FeatureMatrix extract_utterance(const AudioBuffer &audio,
                                const PipelineConfig &config,
                                std::string_view utt_id) {
  try {
    config.validate();
    const Matrix power = utterance_power_spectra(audio, config);
    return append_deltas(cepstra(power, config.cepstral), config.cepstral);
  } catch (const ConfigError &e) {
    if (utt_id.empty()) throw;
    throw ConfigError(std::string(utt_id) + ": " + e.what());
  } catch (const NumericError &e) {
    if (utt_id.empty()) throw;
    throw NumericError(std::string(utt_id) + ": " + e.what());
  }
}

}  // namespace fbcc
