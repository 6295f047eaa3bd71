// fbcc/cepstral.h

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

#ifndef FBCC_CEPSTRAL_H_
#define FBCC_CEPSTRAL_H_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>

#include "fbcc/dsp.h"
#include "fbcc/filterbank.h"
#include "fbcc/types.h"

namespace fbcc {

enum class FeatureKind : std::uint8_t {
  kPower = 0,
  kFbank = 1,
  kCep = 2,
  kCepDeltas = 3,
};

std::string_view to_string(FeatureKind kind);

/// Per-utterance features, one frame per row.
struct FeatureMatrix {
  Matrix rows;
  FeatureKind kind = FeatureKind::kCep;

  Index num_frames() const { return rows.rows(); }
  Index dim() const { return rows.cols(); }
};

struct CepstralConfig {
  FilterBank bank;
  int num_coeffs = 20;  // includes c0
  double log_floor = 1e-10;
  int delta_window = 2;
  bool include_static = false;

  void validate() const;
};

/// Orthonormal DCT-II basis, num_coeffs x num_channels:
/// D(m, c) = s_m cos(pi m (c + 1/2) / C), s_0 = sqrt(1/C), s_m = sqrt(2/C).
template <typename Scalar = double>
MatrixX<Scalar> dct_matrix(Index num_coeffs, Index num_channels) {
  MatrixX<Scalar> d(num_coeffs, num_channels);
  const Scalar c = static_cast<Scalar>(num_channels);
  for (Index m = 0; m < num_coeffs; ++m) {
    const Scalar scale = std::sqrt((m == 0 ? Scalar(1) : Scalar(2)) / c);
    for (Index k = 0; k < num_channels; ++k)
      d(m, k) = scale * std::cos(std::numbers::pi_v<Scalar> *
                                 static_cast<Scalar>(m) *
                                 (static_cast<Scalar>(k) + Scalar(0.5)) / c);
  }
  return d;
}

/// power (T x D) times bank (D x C).
Matrix filter_bank_energies(const Matrix &power, const FilterBank &bank);

/// First num_coeffs orthonormal DCT-II coefficients of
/// log(max(power * bank, log_floor)). Throws ConfigError on a D mismatch.
FeatureMatrix cepstra(const Matrix &power, const CepstralConfig &config);

/// Regression deltas sum_k k (x[t+k] - x[t-k]) / (2 sum_k k^2), k = 1..window,
/// with out-of-range frames clamped to the first/last frame.
Matrix regression_deltas(const Matrix &x, int window);

/// [delta, delta-delta], or [static, delta, delta-delta] with include_static.
FeatureMatrix append_deltas(const FeatureMatrix &cep,
                            const CepstralConfig &config);

struct PipelineConfig {
  double preemphasis = kDefaultPreemphasis;
  double frame_ms = 20.0;
  double hop_ms = 10.0;
  int nfft = 512;
  CepstralConfig cepstral;

  void validate() const;
};

/// Pre-emphasis, framing/windowing and power spectra: T x (nfft/2 + 1).
Matrix utterance_power_spectra(const AudioBuffer &audio,
                               const PipelineConfig &config);

/// Full cepstral pipeline: power spectra, cepstra, then deltas. Errors are
/// rethrown with `utt_id` prefixed to the message.
FeatureMatrix extract_utterance(const AudioBuffer &audio,
                                const PipelineConfig &config,
                                std::string_view utt_id = {});

}  // namespace fbcc

#endif  // FBCC_CEPSTRAL_H_
