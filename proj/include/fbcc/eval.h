// fbcc/eval.h

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

#ifndef FBCC_EVAL_H_
#define FBCC_EVAL_H_

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace fbcc {

enum class TrialLabel { kHuman, kSpoof };

std::string_view to_string(TrialLabel label);
/// "human" or "spoof"; anything else throws ConfigError.
TrialLabel parse_trial_label(std::string_view text);

struct ScoreEntry {
  std::string utt_id;
  double score = 0.0;
  TrialLabel label = TrialLabel::kHuman;
  std::string attack_id = "-";
};

using ScoreSet = std::vector<ScoreEntry>;

/**
   Equal error rate of human (positive) scores against spoof (negative)
   scores, as a fraction in [0, 1].

   Thresholds are swept over every distinct score plus +infinity, with
   FRR(t) = P(pos < t) and FAR(t) = P(neg >= t). The EER is read off where
   FRR - FAR changes sign, linearly interpolating between the two operating
   points on either side. Throws EvalError if either side is empty.
*/
double compute_eer(std::span<const double> positives,
                   std::span<const double> negatives);

enum class GroupAveraging {
  kPerAttack,  // unweighted mean of per-attack EERs
  kPooled,     // one EER over the pooled spoof trials of the group
};

/// EERs in percent.
struct EvalReport {
  std::map<std::string, double> per_attack_eer;
  std::optional<double> known_avg;
  std::optional<double> unknown_avg;
  std::optional<double> all_avg;
  // Listed attacks without spoof trials; excluded from every average.
  std::vector<std::string> flagged;
  std::vector<std::string> known;
  std::vector<std::string> unknown;
  GroupAveraging averaging = GroupAveraging::kPerAttack;
};

/// Per-attack EER uses every human trial against that attack's spoof trials.
/// Throws EvalError for a spoof trial whose attack is in neither set, or
/// when there are no human trials.
EvalReport aggregate_report(const ScoreSet &scores,
                            const std::vector<std::string> &known,
                            const std::vector<std::string> &unknown,
                            GroupAveraging averaging = GroupAveraging::kPerAttack);

nlohmann::json report_to_json(const EvalReport &report);

/// Plain-text table with one row per attack and a Known / Unknown / All
/// summary row.
std::string format_report(const EvalReport &report);

/// TSV: utt_id, score, label, attack_id.
ScoreSet read_scores(const std::filesystem::path &path);
void write_scores(const std::filesystem::path &path, const ScoreSet &scores);

}  // namespace fbcc

#endif  // FBCC_EVAL_H_
