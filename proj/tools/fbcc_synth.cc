// tools/fbcc_synth.cc

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


// Writes a synthetic two-class corpus: train/ and test/ WAV directories and
// matching manifests. Spoof attacks differ in resonance frequency; unknown
// attacks appear only in the test split.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fbcc/synth.h"
#include "fbcc/types.h"

namespace fs = std::filesystem;

namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct Attack {
  std::string id;
  double resonance_hz;
};

void write_split(const fs::path &root, const std::string &split, int count,
                 const std::vector<Attack> &attacks, std::uint64_t seed,
                 const fbcc::SynthConfig &base, bool with_class) {
  const fs::path dir = root / split;
  fs::create_directories(dir);
  std::ofstream tsv(root / (split + ".tsv"));
  if (!tsv) throw fbcc::IoError("cannot write " + (root / (split + ".tsv")).string());
  const int humans = count / 2;
  for (int i = 0; i < count; ++i) {
    const bool human = i < humans;
    const std::uint64_t utt_seed = mix(seed ^ mix(std::hash<std::string>{}(split)) ^ mix(i));
    fbcc::SynthConfig cfg = base;
    std::string attack = "-";
    int cls = 0;
    if (!human) {
      const auto a = static_cast<std::size_t>(i - humans) % attacks.size();
      cfg.resonance_hz = attacks[a].resonance_hz;
      attack = attacks[a].id;
      cls = static_cast<int>(a) + 1;
    }
    char name[64];
    std::snprintf(name, sizeof name, "%s_%s_%04d.wav", split.c_str(),
                  human ? "human" : "spoof", i);
    const auto audio = fbcc::synth_utterance(
        human ? fbcc::SynthClass::kNatural : fbcc::SynthClass::kSynthetic, utt_seed, cfg);
    fbcc::write_wav(dir / name, audio);
    tsv << split << "/" << name << "\t" << (human ? "human" : "spoof") << "\t" << attack;
    if (with_class) tsv << "\t" << cls;
    tsv << "\n";
  }
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Synthetic human/spoof corpus generator", "fbcc-synth"};
  std::string out_dir;
  int train = 200, test = 200;
  std::uint64_t seed = 1;
  double duration = 1.0;
  double resonance_db = fbcc::SynthConfig{}.resonance_db;
  double rms = fbcc::SynthConfig{}.rms;
  std::vector<double> known_hz{6000.0}, unknown_hz{};
  app.add_option("--out-dir", out_dir)->required();
  app.add_option("--train", train, "Training utterances (half human)");
  app.add_option("--test", test, "Test utterances (half human)");
  app.add_option("--seed", seed);
  app.add_option("--duration", duration, "Seconds per utterance");
  app.add_option("--resonance-db", resonance_db, "Resonance level relative to the speech part");
  app.add_option("--rms", rms, "Level of the speech-shaped part");
  app.add_option("--known-hz", known_hz, "Resonance of each known attack");
  app.add_option("--unknown-hz", unknown_hz, "Resonance of each test-only attack");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  try {
    fbcc::SynthConfig base;
    base.duration_s = duration;
    base.resonance_db = resonance_db;
    base.rms = rms;
    std::vector<Attack> known, all;
    for (std::size_t i = 0; i < known_hz.size(); ++i)
      known.push_back({"S" + std::to_string(i + 1), known_hz[i]});
    all = known;
    for (std::size_t i = 0; i < unknown_hz.size(); ++i)
      all.push_back({"S" + std::to_string(known.size() + i + 1), unknown_hz[i]});
    if (known.empty()) throw fbcc::ConfigError("need at least one known attack");
    write_split(out_dir, "train", train, known, seed, base, true);
    write_split(out_dir, "test", test, all, seed, base, false);
  } catch (const std::exception &e) {
    std::cerr << "fbcc-synth: error: " << e.what() << "\n";
    return 1;
  }
  std::cout << "wrote " << train << " train and " << test << " test utterances to "
            << out_dir << "\n";
  return 0;
}
