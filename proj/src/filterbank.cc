// src/filterbank.cc

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

#include "fbcc/filterbank.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace fbcc {

std::string_view to_string(BankKind kind) {
  switch (kind) {
    case BankKind::kTriangular: return "triangular";
    case BankKind::kRectangular: return "rectangular";
    case BankKind::kGammatone: return "gammatone";
    case BankKind::kInvertedGammatone: return "inverted_gammatone";
  }
  return "unknown";
}

BankKind parse_bank_kind(std::string_view name) {
  if (name == "triangular" || name == "tfb") return BankKind::kTriangular;
  if (name == "rectangular" || name == "rfb") return BankKind::kRectangular;
  if (name == "gammatone" || name == "gfb") return BankKind::kGammatone;
  if (name == "inverted_gammatone" || name == "igfb")
    return BankKind::kInvertedGammatone;
  throw ConfigError("unknown filter bank kind '" + std::string(name) + "'");
}

BankSpec BankSpec::with_defaults(BankKind kind, int channels, int nfft,
                                 int sample_rate) {
  BankSpec spec;
  spec.kind = kind;
  spec.channels = channels;
  spec.nfft = nfft;
  spec.sample_rate = sample_rate;
  const bool gammatone =
      kind == BankKind::kGammatone || kind == BankKind::kInvertedGammatone;
  spec.f_low = gammatone ? 20.0 : 0.0;
  spec.f_high = sample_rate / 2.0;
  return spec;
}

void BankSpec::validate() const {
  if (channels < 1) throw ConfigError("filter bank needs at least one channel");
  if (!is_power_of_two(nfft)) throw ConfigError("nfft must be a power of two");
  if (sample_rate <= 0) throw ConfigError("sample rate must be positive");
  if (!(f_low >= 0.0 && f_low < f_high && f_high <= sample_rate / 2.0))
    throw ConfigError("need 0 <= f_low < f_high <= sample_rate/2");
  if (gammatone_order < 1 || !(bandwidth_factor > 0.0))
    throw ConfigError("bad gammatone order or bandwidth factor");
}

double erb_bandwidth(double fc) {
  if (fc < 0.0) throw std::domain_error("erb_bandwidth: negative frequency");
  return 24.7 * (4.37 * fc / 1000.0 + 1.0);
}

double erb_rate(double f) { return 21.4 * std::log10(4.37 * f / 1000.0 + 1.0); }

double erb_rate_to_hz(double erb) {
  return (std::pow(10.0, erb / 21.4) - 1.0) * 1000.0 / 4.37;
}

Vector bin_frequencies(int nfft, int sample_rate) {
  const Index bins = nfft / 2 + 1;
  return Vector::LinSpaced(bins, 0.0, 1.0) *
         (static_cast<double>(bins - 1) * sample_rate / nfft);
}

namespace {

// Nearest-bin edges for `count` equally spaced points over [f_low, f_high].
std::vector<Index> snapped_edges(const BankSpec &spec, Index count) {
  std::vector<Index> edges(static_cast<std::size_t>(count));
  const double step = (spec.f_high - spec.f_low) / (count - 1);
  for (Index i = 0; i < count; ++i) {
    const double hz = spec.f_low + step * i;
    edges[i] = static_cast<Index>(std::llround(hz * spec.nfft / spec.sample_rate));
  }
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (edges[i] <= edges[i - 1])
      throw ConfigError(std::string(to_string(spec.kind)) + " bank with " +
                        std::to_string(spec.channels) +
                        " channels is too dense for nfft=" +
                        std::to_string(spec.nfft) +
                        " (empty channel support)");
  }
  return edges;
}

// Gammatone centers as built, before any mirroring: ERB-rate spaced.
Vector gammatone_centers(const BankSpec &spec) {
  const double lo = erb_rate(spec.f_low), hi = erb_rate(spec.f_high);
  Vector centers(spec.channels);
  if (spec.channels == 1) {
    centers(0) = erb_rate_to_hz(0.5 * (lo + hi));
    return centers;
  }
  for (int c = 0; c < spec.channels; ++c)
    centers(c) = erb_rate_to_hz(lo + (hi - lo) * c / (spec.channels - 1));
  // Clamp away round-off at the ends.
  centers(0) = spec.f_low;
  centers(spec.channels - 1) = spec.f_high;
  return centers;
}

Matrix triangular_bank(const BankSpec &spec) {
  const auto edges = snapped_edges(spec, spec.channels + 2);
  Matrix w = Matrix::Zero(spec.nfft / 2 + 1, spec.channels);
  for (int c = 0; c < spec.channels; ++c) {
    const Index left = edges[c], center = edges[c + 1], right = edges[c + 2];
    for (Index k = left + 1; k <= center; ++k)
      w(k, c) = static_cast<double>(k - left) / (center - left);
    for (Index k = center + 1; k < right; ++k)
      w(k, c) = static_cast<double>(right - k) / (right - center);
  }
  return w;
}

Matrix rectangular_bank(const BankSpec &spec) {
  const auto edges = snapped_edges(spec, spec.channels + 1);
  Matrix w = Matrix::Zero(spec.nfft / 2 + 1, spec.channels);
  for (int c = 0; c < spec.channels; ++c) {
    const Index end = c + 1 == spec.channels ? edges[c + 1] + 1 : edges[c + 1];
    w.col(c).segment(edges[c], end - edges[c]).setOnes();
  }
  return w;
}

Matrix gammatone_bank(const BankSpec &spec, bool inverted) {
  const Vector freqs = bin_frequencies(spec.nfft, spec.sample_rate);
  const Vector centers = gammatone_centers(spec);
  const int channels = spec.channels;
  Matrix w(freqs.size(), channels);
  for (int c = 0; c < channels; ++c) {
    // Inverted column c is gammatone channel C-1-c with its center mirrored;
    // the bandwidth stays that of the source channel.
    const int source = inverted ? channels - 1 - c : c;
    const double fc = inverted ? spec.f_low + spec.f_high - centers(source)
                               : centers(source);
    const double b = spec.bandwidth_factor * erb_bandwidth(centers(source));
    const double exponent = -0.5 * spec.gammatone_order;
    w.col(c) = (1.0 + ((freqs.array() - fc) / b).square()).pow(exponent);
    w.col(c) /= w.col(c).maxCoeff();
  }
  return w;
}

}  // namespace

Vector channel_centers(const BankSpec &spec) {
  spec.validate();
  const double hz_per_bin = static_cast<double>(spec.sample_rate) / spec.nfft;
  switch (spec.kind) {
    case BankKind::kTriangular: {
      const auto edges = snapped_edges(spec, spec.channels + 2);
      Vector out(spec.channels);
      for (int c = 0; c < spec.channels; ++c) out(c) = edges[c + 1] * hz_per_bin;
      return out;
    }
    case BankKind::kRectangular: {
      const auto edges = snapped_edges(spec, spec.channels + 1);
      Vector out(spec.channels);
      for (int c = 0; c < spec.channels; ++c)
        out(c) = 0.5 * (edges[c] + edges[c + 1]) * hz_per_bin;
      return out;
    }
    case BankKind::kGammatone:
      return gammatone_centers(spec);
    case BankKind::kInvertedGammatone:
      return (spec.f_low + spec.f_high - gammatone_centers(spec).reverse().array())
          .matrix();
  }
  return {};
}

FilterBank build_filter_bank(const BankSpec &spec) {
  spec.validate();
  FilterBank bank;
  bank.sample_rate = spec.sample_rate;
  bank.nfft = spec.nfft;
  bank.spec = spec;
  switch (spec.kind) {
    case BankKind::kTriangular: bank.weights = triangular_bank(spec); break;
    case BankKind::kRectangular: bank.weights = rectangular_bank(spec); break;
    case BankKind::kGammatone: bank.weights = gammatone_bank(spec, false); break;
    case BankKind::kInvertedGammatone:
      bank.weights = gammatone_bank(spec, true);
      break;
  }
  validate_filter_bank(bank);
  return bank;
}

void validate_filter_bank(const FilterBank &bank) {
  const Matrix &w = bank.weights;
  if (w.rows() != bank.nfft / 2 + 1)
    throw ConfigError("filter bank has " + std::to_string(w.rows()) +
                      " rows, expected nfft/2+1 = " +
                      std::to_string(bank.nfft / 2 + 1));
  if (!w.allFinite()) throw ConfigError("filter bank has non-finite entries");
  if (w.size() > 0 && (w.minCoeff() < 0.0 || w.maxCoeff() > 1.0))
    throw ConfigError("filter bank entries must lie in [0, 1]");
  for (Index c = 0; c < w.cols(); ++c) {
    Index first = -1, last = -1;
    for (Index k = 0; k < w.rows(); ++k) {
      if (w(k, c) > 0.0) {
        if (first < 0) first = k;
        last = k;
      }
    }
    if (first < 0)
      throw ConfigError("filter bank channel " + std::to_string(c) +
                        " is all zero");
    if ((w.col(c).segment(first, last - first + 1).array() > 0.0).count() !=
        last - first + 1)
      throw ConfigError("filter bank channel " + std::to_string(c) +
                        " has non-contiguous support");
  }
}

Eigen::VectorXi peak_bins(const Matrix &weights) {
  Eigen::VectorXi out(weights.cols());
  for (Index c = 0; c < weights.cols(); ++c) {
    Index at = 0;
    weights.col(c).maxCoeff(&at);
    out(c) = static_cast<int>(at);
  }
  return out;
}

void export_bank_csv(const FilterBank &bank, const std::filesystem::path &path) {
  validate_filter_bank(bank);
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "bin_hz";
  for (Index c = 0; c < bank.num_channels(); ++c) out << ",ch_" << c;
  out << '\n';
  const Vector freqs = bin_frequencies(bank.nfft, bank.sample_rate);
  char buf[32];
  for (Index k = 0; k < bank.num_bins(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", freqs(k));
    out << buf;
    for (Index c = 0; c < bank.num_channels(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", bank.weights(k, c));
      out << ',' << buf;
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

FilterBank read_bank_csv(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("bin_hz", 0) != 0)
    throw ParseError("expected header starting with bin_hz", 1);
  const auto channels =
      static_cast<Index>(std::count(line.begin(), line.end(), ','));
  std::vector<std::vector<double>> rows;
  std::int64_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception &) {
        throw ParseError("bad number '" + cell + "'", lineno);
      }
    }
    if (static_cast<Index>(row.size()) != channels + 1)
      throw ParseError("expected " + std::to_string(channels + 1) + " cells",
                       lineno);
    rows.push_back(std::move(row));
  }
  if (rows.size() < 2) throw ParseError("filter bank needs at least 2 bins", lineno);

  FilterBank bank;
  const auto bins = static_cast<Index>(rows.size());
  bank.nfft = static_cast<int>(2 * (bins - 1));
  bank.sample_rate = static_cast<int>(std::llround(rows[1][0] * bank.nfft));
  bank.weights.resize(bins, channels);
  for (Index k = 0; k < bins; ++k)
    for (Index c = 0; c < channels; ++c) bank.weights(k, c) = rows[k][c + 1];
  validate_filter_bank(bank);
  return bank;
}

}  // namespace fbcc
