// fbcc/dsp.h

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

#ifndef FBCC_DSP_H_
#define FBCC_DSP_H_

#include <cmath>
#include <filesystem>
#include <numbers>

#include "fbcc/types.h"

namespace fbcc {

inline constexpr int kDefaultSampleRate = 16000;
inline constexpr double kDefaultPreemphasis = 0.97;

/// Mono audio with samples nominally in [-1, 1].
struct AudioBuffer {
  Vector samples;
  int sample_rate = kDefaultSampleRate;

  Index size() const { return samples.size(); }
};

/// Windowed frames, one per row.
struct FrameMatrix {
  Matrix frames;  // T x frame_len
  Index frame_len = 0;
  Index hop = 0;

  Index num_frames() const { return frames.rows(); }
};

/// y[0] = x[0], y[n] = x[n] - coeff * x[n-1].
AudioBuffer pre_emphasize(const AudioBuffer &audio,
                          double coeff = kDefaultPreemphasis);

/// Symmetric Hamming window 0.54 - 0.46 cos(2 pi n / (L - 1)).
/// A length-1 window is [1].
template <typename Scalar = double>
VectorX<Scalar> hamming_window(Index length) {
  VectorX<Scalar> w(length);
  if (length == 1) {
    w(0) = Scalar(1);
    return w;
  }
  const Scalar denom = static_cast<Scalar>(length - 1);
  for (Index n = 0; n < length; ++n) {
    w(n) = Scalar(0.54) -
           Scalar(0.46) * std::cos(Scalar(2) * std::numbers::pi_v<Scalar> *
                                   static_cast<Scalar>(n) / denom);
  }
  return w;
}

/// round(ms * sample_rate / 1000).
Index ms_to_samples(double ms, int sample_rate);

/// 0 if signal_len < frame_len, else floor((signal_len - frame_len) / hop) + 1.
Index num_frames(Index signal_len, Index frame_len, Index hop);

/// Splits into overlapping frames and applies a Hamming window to each.
/// Requires frame_ms >= hop_ms > 0. Too-short signals give zero rows.
FrameMatrix frame_and_window(const AudioBuffer &audio, double frame_ms,
                             double hop_ms);

bool is_power_of_two(Index n);

/// |FFT_N(frame)|^2 for bins 0..N/2, frame zero-padded to N. Unscaled.
/// Throws ConfigError if nfft is not a power of two or frame is longer.
Vector power_spectrum(const Eigen::Ref<const Vector> &frame, Index nfft);

/// Row-wise power_spectrum; returns T x (nfft/2 + 1).
Matrix power_spectra(const FrameMatrix &frames, Index nfft);

/// 16-bit PCM mono RIFF/WAVE. Samples are scaled by 1/32768.
AudioBuffer read_wav(const std::filesystem::path &path);

/// Writes 16-bit PCM mono, clipping to the representable range.
void write_wav(const std::filesystem::path &path, const AudioBuffer &audio);

}  // namespace fbcc

#endif  // FBCC_DSP_H_
