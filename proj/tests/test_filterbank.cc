// tests/test_filterbank.cc

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

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "fbcc/filterbank.h"
#include "test_util.h"

namespace fbcc {
namespace {

FilterBank make(BankKind kind, int channels, int nfft) {
  return build_filter_bank(BankSpec::with_defaults(kind, channels, nfft));
}

TEST_SUITE("filterbank") {

TEST_CASE("ERB bandwidth") {
  CHECK(erb_bandwidth(0.0) == doctest::Approx(24.7).epsilon(1e-12));
  CHECK(erb_bandwidth(1000.0) == doctest::Approx(132.639).epsilon(1e-12));
  CHECK(erb_bandwidth(500.0) < erb_bandwidth(501.0));
  CHECK_THROWS_AS(erb_bandwidth(-1.0), std::domain_error);
  CHECK(erb_rate_to_hz(erb_rate(1234.5)) == doctest::Approx(1234.5).epsilon(1e-12));
}

TEST_CASE("triangular bank shape") {
  const FilterBank b = make(BankKind::kTriangular, 5, 512);
  REQUIRE(b.num_bins() == 257);
  REQUIRE(b.num_channels() == 5);
  validate_filter_bank(b);
  for (Index c = 0; c < 5; ++c) {
    const auto col = b.weights.col(c);
    CHECK(col.maxCoeff() == 1.0);
    // Unimodal: non-decreasing up to the peak, non-increasing after.
    Index peak;
    col.maxCoeff(&peak);
    for (Index k = 1; k <= peak; ++k) CHECK(col(k) >= col(k - 1));
    for (Index k = peak + 1; k < col.size(); ++k) CHECK(col(k) <= col(k - 1));
  }
}

TEST_CASE("triangular partition of unity between centers") {
  const FilterBank b = make(BankKind::kTriangular, 20, 512);
  const Eigen::VectorXi peaks = peak_bins(b.weights);
  for (Index k = peaks(0); k <= peaks(19); ++k) {
    Index covered = 0;
    for (Index c = 0; c < 20; ++c) covered += b.weights(k, c) > 0.0;
    if (covered == 2) CHECK(std::abs(b.weights.row(k).sum() - 1.0) < 1e-9);
  }
}

TEST_CASE("rectangular bank partitions the band") {
  const FilterBank b = make(BankKind::kRectangular, 2, 512);
  validate_filter_bank(b);
  const Vector coverage = b.weights.rowwise().sum();
  CHECK(coverage.minCoeff() == 1.0);
  CHECK(coverage.maxCoeff() == 1.0);
  CHECK(b.weights.col(0).head(128).minCoeff() == 1.0);
  CHECK(b.weights.col(1).tail(129).minCoeff() == 1.0);
}

TEST_CASE("gammatone and inverted gammatone peak ordering") {
  const FilterBank g = make(BankKind::kGammatone, 128, 1024);
  const FilterBank ig = make(BankKind::kInvertedGammatone, 128, 1024);
  validate_filter_bank(g);
  validate_filter_bank(ig);
  const Eigen::VectorXi pg = peak_bins(g.weights), pig = peak_bins(ig.weights);
  const double bin_hz = 16000.0 / 1024.0, mirror = 20.0 + 8000.0;
  for (Index c = 0; c < 128; ++c) {
    if (c > 0) {
      CHECK(pg(c) >= pg(c - 1));
      CHECK(pig(c) >= pig(c - 1));
    }
    const double expect = (mirror - pg(127 - c) * bin_hz) / bin_hz;
    CHECK(std::abs(pig(c) - expect) <= 1.0);
  }
  // Low channels of the plain bank are denser than its high channels.
  CHECK(pg(1) - pg(0) < pg(127) - pg(126));
  CHECK(pig(1) - pig(0) > pig(127) - pig(126));
  CHECK(g.weights.minCoeff() >= 0.0);
  CHECK(g.weights.maxCoeff() <= 1.0);
}

TEST_CASE("gammatone response formula") {
  BankSpec spec = BankSpec::with_defaults(BankKind::kGammatone, 4, 512);
  const FilterBank g = build_filter_bank(spec);
  const Vector centers = channel_centers(spec);
  const Vector freqs = bin_frequencies(512, 16000);
  for (Index c = 0; c < 4; ++c) {
    const double b = 1.019 * erb_bandwidth(centers(c));
    Vector raw(freqs.size());
    for (Index k = 0; k < freqs.size(); ++k)
      raw(k) = std::pow(1.0 + std::pow((freqs(k) - centers(c)) / b, 2), -2.0);
    raw /= raw.maxCoeff();
    CHECK((raw - g.weights.col(c)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("configuration errors") {
  CHECK_THROWS_AS(make(BankKind::kTriangular, 300, 512), ConfigError);
  CHECK_THROWS_AS(make(BankKind::kTriangular, 20, 500), ConfigError);
  BankSpec bad = BankSpec::with_defaults(BankKind::kRectangular, 4, 512);
  bad.f_high = 9000;
  CHECK_THROWS_AS(build_filter_bank(bad), ConfigError);
  CHECK(parse_bank_kind("igfb") == BankKind::kInvertedGammatone);
  CHECK_THROWS_AS(parse_bank_kind("mel"), ConfigError);
}

TEST_CASE("CSV export round trip") {
  const auto dir = testing::scratch_dir("filterbank_csv");
  const FilterBank b = make(BankKind::kGammatone, 5, 512);
  export_bank_csv(b, dir / "bank.csv");
  std::ifstream in(dir / "bank.csv");
  std::string line;
  int lines = 0;
  std::getline(in, line);
  CHECK(line == "bin_hz,ch_0,ch_1,ch_2,ch_3,ch_4");
  for (++lines; std::getline(in, line);) ++lines;
  CHECK(lines == 258);
  const FilterBank r = read_bank_csv(dir / "bank.csv");
  CHECK(r.nfft == 512);
  CHECK(r.sample_rate == 16000);
  CHECK((r.weights - b.weights).cwiseAbs().maxCoeff() < 1e-12);

  FilterBank zero = b;
  zero.weights.col(2).setZero();
  CHECK_THROWS_AS(export_bank_csv(zero, dir / "zero.csv"), ConfigError);
}

}  // TEST_SUITE

}  // namespace
}  // namespace fbcc
