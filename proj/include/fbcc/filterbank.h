// fbcc/filterbank.h

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

#ifndef FBCC_FILTERBANK_H_
#define FBCC_FILTERBANK_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "fbcc/dsp.h"
#include "fbcc/types.h"

namespace fbcc {

enum class BankKind { kTriangular, kRectangular, kGammatone, kInvertedGammatone };

std::string_view to_string(BankKind kind);
/// Accepts "triangular", "rectangular", "gammatone", "inverted_gammatone"
/// and the short forms tfb, rfb, gfb, igfb.
BankKind parse_bank_kind(std::string_view name);

struct BankSpec {
  BankKind kind = BankKind::kTriangular;
  int channels = 20;
  int nfft = 512;
  int sample_rate = kDefaultSampleRate;
  double f_low = 0.0;
  double f_high = kDefaultSampleRate / 2.0;
  // Gammatone kinds only.
  int gammatone_order = 4;
  double bandwidth_factor = 1.019;

  /// Spec with the default band edges for `kind`: [0, sr/2] for the linear
  /// banks, [20, sr/2] for the gammatone banks.
  static BankSpec with_defaults(BankKind kind, int channels, int nfft,
                                int sample_rate = kDefaultSampleRate);

  /// Throws ConfigError unless channels >= 1, nfft is a power of two and
  /// 0 <= f_low < f_high <= sample_rate / 2.
  void validate() const;
};

/// D x C non-negative weights, D = nfft/2 + 1. Used both as a feature
/// extractor and as the band-limiting mask of the filter bank network.
/// `spec` is empty for learned banks.
struct FilterBank {
  Matrix weights;
  int sample_rate = kDefaultSampleRate;
  int nfft = 512;
  std::optional<BankSpec> spec;

  Index num_bins() const { return weights.rows(); }
  Index num_channels() const { return weights.cols(); }
  bool learned() const { return !spec.has_value(); }
};

/// Glasberg-Moore equivalent rectangular bandwidth, 24.7 (4.37 fc/1000 + 1).
/// Throws std::domain_error for negative fc.
double erb_bandwidth(double fc);

/// ERB-rate scale 21.4 log10(4.37 f/1000 + 1) and its inverse.
double erb_rate(double f);
double erb_rate_to_hz(double erb);

/// Frequencies k * sr / nfft of bins 0..nfft/2.
Vector bin_frequencies(int nfft, int sample_rate);

/// Channel center frequencies in Hz, in column order (ascending for every
/// kind). Triangular and rectangular centers are the bin-snapped values the
/// bank actually uses.
Vector channel_centers(const BankSpec &spec);

/// Builds the bank. Columns are ordered by ascending center frequency for
/// all kinds; for the inverted gammatone bank column c is gammatone channel
/// C-1-c mirrored about (f_low + f_high) / 2.
///
/// Triangular: C+2 edge points equally spaced in Hz over [f_low, f_high] and
/// snapped to the nearest bin; channel c rises linearly from edge c to 1 at
/// edge c+1 and falls to 0 at edge c+2.
/// Rectangular: C+1 snapped edges; channel c is 1 on bins [e_c, e_{c+1}),
/// the last channel also includes e_C.
/// Gammatone: |G(f)| = (1 + ((f - fc)/b)^2)^(-order/2), b = factor * ERB(fc),
/// each column peak-normalized to 1.
FilterBank build_filter_bank(const BankSpec &spec);

/// Throws ConfigError if an entry is negative or non-finite, above 1, a
/// column is all zero, or a column's support is not contiguous.
void validate_filter_bank(const FilterBank &bank);

/// Index of the first maximum in each column.
Eigen::VectorXi peak_bins(const Matrix &weights);

/// CSV with header `bin_hz,ch_0,...` and one row per bin, %.17g precision.
void export_bank_csv(const FilterBank &bank, const std::filesystem::path &path);
FilterBank read_bank_csv(const std::filesystem::path &path);

}  // namespace fbcc

#endif  // FBCC_FILTERBANK_H_
