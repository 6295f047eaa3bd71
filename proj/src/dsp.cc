// src/dsp.cc

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

#include "fbcc/dsp.h"

#include <complex>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace fbcc {

AudioBuffer pre_emphasize(const AudioBuffer &audio, double coeff) {
  if (!(coeff >= 0.0 && coeff < 1.0))
    throw ConfigError("pre-emphasis coefficient must be in [0, 1)");
  AudioBuffer out{Vector(audio.size()), audio.sample_rate};
  if (audio.size() == 0) return out;
  out.samples(0) = audio.samples(0);
  const Index n = audio.size();
  out.samples.tail(n - 1) =
      audio.samples.tail(n - 1) - coeff * audio.samples.head(n - 1);
  return out;
}

Index ms_to_samples(double ms, int sample_rate) {
  return static_cast<Index>(std::llround(ms * sample_rate / 1000.0));
}

Index num_frames(Index signal_len, Index frame_len, Index hop) {
  if (frame_len <= 0 || hop <= 0)
    throw ConfigError("frame length and hop must be positive");
  if (signal_len < frame_len) return 0;
  return (signal_len - frame_len) / hop + 1;
}

FrameMatrix frame_and_window(const AudioBuffer &audio, double frame_ms,
                             double hop_ms) {
  if (audio.sample_rate <= 0) throw ConfigError("sample rate must be positive");
  if (!(hop_ms > 0.0) || frame_ms < hop_ms)
    throw ConfigError("framing requires frame_ms >= hop_ms > 0");
  FrameMatrix out;
  out.frame_len = ms_to_samples(frame_ms, audio.sample_rate);
  out.hop = ms_to_samples(hop_ms, audio.sample_rate);
  if (out.frame_len < 1 || out.hop < 1)
    throw ConfigError("frame or hop shorter than one sample");

  const Index count = num_frames(audio.size(), out.frame_len, out.hop);
  const RowVector window = hamming_window(out.frame_len).transpose();
  out.frames.resize(count, out.frame_len);
  for (Index t = 0; t < count; ++t) {
    out.frames.row(t) =
        audio.samples.segment(t * out.hop, out.frame_len).transpose().cwiseProduct(
            window);
  }
  return out;
}

bool is_power_of_two(Index n) { return n > 0 && (n & (n - 1)) == 0; }

namespace {

void check_nfft(Index frame_len, Index nfft) {
  if (!is_power_of_two(nfft))
    throw ConfigError("nfft must be a power of two, got " +
                      std::to_string(nfft));
  if (frame_len > nfft)
    throw ConfigError("frame length " + std::to_string(frame_len) +
                      " exceeds nfft " + std::to_string(nfft));
}

}  // namespace

Vector power_spectrum(const Eigen::Ref<const Vector> &frame, Index nfft) {
  check_nfft(frame.size(), nfft);
  std::vector<double> padded(static_cast<std::size_t>(nfft), 0.0);
  std::copy(frame.data(), frame.data() + frame.size(), padded.begin());

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spectrum;
  fft.fwd(spectrum, padded);

  const Index bins = nfft / 2 + 1;
  Vector out(bins);
  for (Index k = 0; k < bins; ++k) out(k) = std::norm(spectrum[k]);
  return out;
}

Matrix power_spectra(const FrameMatrix &frames, Index nfft) {
  check_nfft(frames.frames.cols(), nfft);
  Matrix out(frames.num_frames(), nfft / 2 + 1);
  for (Index t = 0; t < frames.num_frames(); ++t) {
    Vector row = frames.frames.row(t).transpose();
    out.row(t) = power_spectrum(row, nfft).transpose();
  }
  return out;
}

}  // namespace fbcc
