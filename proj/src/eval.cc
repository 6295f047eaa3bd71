// src/eval.cc

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

#include "fbcc/eval.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "fbcc/types.h"

namespace fbcc {

std::string_view to_string(TrialLabel label) {
  return label == TrialLabel::kHuman ? "human" : "spoof";
}

TrialLabel parse_trial_label(std::string_view text) {
  if (text == "human") return TrialLabel::kHuman;
  if (text == "spoof") return TrialLabel::kSpoof;
  throw ConfigError("label must be 'human' or 'spoof', got '" +
                    std::string(text) + "'");
}

double compute_eer(std::span<const double> positives,
                   std::span<const double> negatives) {
  if (positives.empty() || negatives.empty())
    throw EvalError("EER needs at least one human and one spoof score");
  std::vector<double> pos(positives.begin(), positives.end());
  std::vector<double> neg(negatives.begin(), negatives.end());
  std::sort(pos.begin(), pos.end());
  std::sort(neg.begin(), neg.end());
  std::vector<double> thresholds;
  thresholds.reserve(pos.size() + neg.size());
  std::merge(pos.begin(), pos.end(), neg.begin(), neg.end(),
             std::back_inserter(thresholds));
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());

  const double n_pos = static_cast<double>(pos.size());
  const double n_neg = static_cast<double>(neg.size());
  std::size_t pos_below = 0, neg_below = 0;
  double prev_frr = 0.0, prev_far = 1.0;
  bool have_prev = false;

  // Returns the EER once FRR - FAR turns non-negative at (frr, far).
  auto crossing = [&](double frr, double far) -> std::optional<double> {
    const double diff = frr - far;
    if (diff < 0.0) return std::nullopt;
    if (diff == 0.0 || !have_prev) return frr;
    const double prev_diff = prev_frr - prev_far;
    const double alpha = -prev_diff / (diff - prev_diff);
    return prev_frr + alpha * (frr - prev_frr);
  };

  for (double t : thresholds) {
    while (pos_below < pos.size() && pos[pos_below] < t) ++pos_below;
    while (neg_below < neg.size() && neg[neg_below] < t) ++neg_below;
    const double frr = static_cast<double>(pos_below) / n_pos;
    const double far = static_cast<double>(neg.size() - neg_below) / n_neg;
    if (auto eer = crossing(frr, far)) return *eer;
    prev_frr = frr;
    prev_far = far;
    have_prev = true;
  }
  // Threshold above every score: FRR = 1, FAR = 0.
  return *crossing(1.0, 0.0);
}

namespace {

std::optional<double> mean_of(const std::vector<double> &values) {
  if (values.empty()) return std::nullopt;
  double total = 0.0;
  for (double v : values) total += v;
  return total / static_cast<double>(values.size());
}

}  // namespace

EvalReport aggregate_report(const ScoreSet &scores,
                            const std::vector<std::string> &known,
                            const std::vector<std::string> &unknown,
                            GroupAveraging averaging) {
  EvalReport report;
  report.known = known;
  report.unknown = unknown;
  report.averaging = averaging;

  const std::set<std::string> known_set(known.begin(), known.end());
  const std::set<std::string> unknown_set(unknown.begin(), unknown.end());
  for (const auto &a : known_set)
    if (unknown_set.count(a))
      throw EvalError("attack '" + a + "' is listed as both known and unknown");

  std::vector<double> human;
  std::map<std::string, std::vector<double>> spoof_by_attack;
  for (const auto &e : scores) {
    if (e.label == TrialLabel::kHuman) {
      human.push_back(e.score);
      continue;
    }
    if (!known_set.count(e.attack_id) && !unknown_set.count(e.attack_id))
      throw EvalError("spoof trial '" + e.utt_id + "' has attack '" +
                      e.attack_id + "' outside the known and unknown sets");
    spoof_by_attack[e.attack_id].push_back(e.score);
  }
  if (human.empty()) throw EvalError("score set has no human trials");

  auto per_attack_group = [&](const std::vector<std::string> &attacks,
                              std::vector<double> &eers,
                              std::vector<double> &pooled) {
    for (const auto &a : attacks) {
      auto it = spoof_by_attack.find(a);
      if (it == spoof_by_attack.end()) {
        if (std::find(report.flagged.begin(), report.flagged.end(), a) ==
            report.flagged.end())
          report.flagged.push_back(a);
        continue;
      }
      const double eer = 100.0 * compute_eer(human, it->second);
      report.per_attack_eer[a] = eer;
      eers.push_back(eer);
      pooled.insert(pooled.end(), it->second.begin(), it->second.end());
    }
  };

  std::vector<double> known_eers, unknown_eers, known_pool, unknown_pool;
  per_attack_group(known, known_eers, known_pool);
  per_attack_group(unknown, unknown_eers, unknown_pool);

  if (averaging == GroupAveraging::kPerAttack) {
    report.known_avg = mean_of(known_eers);
    report.unknown_avg = mean_of(unknown_eers);
    std::vector<double> all = known_eers;
    all.insert(all.end(), unknown_eers.begin(), unknown_eers.end());
    report.all_avg = mean_of(all);
  } else {
    auto pooled_eer = [&](const std::vector<double> &spoof) -> std::optional<double> {
      if (spoof.empty()) return std::nullopt;
      return 100.0 * compute_eer(human, spoof);
    };
    report.known_avg = pooled_eer(known_pool);
    report.unknown_avg = pooled_eer(unknown_pool);
    std::vector<double> all = known_pool;
    all.insert(all.end(), unknown_pool.begin(), unknown_pool.end());
    report.all_avg = pooled_eer(all);
  }
  return report;
}

nlohmann::json report_to_json(const EvalReport &report) {
  auto opt = [](const std::optional<double> &v) -> nlohmann::json {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  nlohmann::json j;
  j["per_attack_eer"] = report.per_attack_eer;
  j["known_avg"] = opt(report.known_avg);
  j["unknown_avg"] = opt(report.unknown_avg);
  j["all_avg"] = opt(report.all_avg);
  j["known"] = report.known;
  j["unknown"] = report.unknown;
  j["flagged"] = report.flagged;
  j["averaging"] =
      report.averaging == GroupAveraging::kPerAttack ? "per_attack" : "pooled";
  j["units"] = "percent";
  return j;
}

std::string format_report(const EvalReport &report) {
  auto cell = [](const std::optional<double> &v) {
    if (!v) return std::string("-");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", *v);
    return std::string(buf);
  };
  std::ostringstream out;
  char line[128];
  out << "Attack      EER(%)\n";
  for (const auto *group : {&report.known, &report.unknown}) {
    for (const auto &a : *group) {
      auto it = report.per_attack_eer.find(a);
      std::snprintf(line, sizeof line, "%-10s  %s%s\n", a.c_str(),
                    cell(it == report.per_attack_eer.end()
                             ? std::nullopt
                             : std::optional<double>(it->second))
                        .c_str(),
                    group == &report.known ? "" : "  (unknown)");
      out << line;
    }
  }
  out << "\nAvg.EER(%)  Known   Unknown  All\n";
  std::snprintf(line, sizeof line, "%-10s  %-6s  %-7s  %s\n",
                report.averaging == GroupAveraging::kPerAttack ? "per-attack"
                                                               : "pooled",
                cell(report.known_avg).c_str(), cell(report.unknown_avg).c_str(),
                cell(report.all_avg).c_str());
  out << line;
  if (!report.flagged.empty()) {
    out << "\nexcluded (no trials):";
    for (const auto &a : report.flagged) out << ' ' << a;
    out << '\n';
  }
  return out.str();
}

ScoreSet read_scores(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  ScoreSet out;
  std::string line;
  std::int64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, '\t')) cells.push_back(cell);
    if (cells.size() != 4)
      throw ParseError("expected 4 tab-separated fields", lineno);
    ScoreEntry e;
    e.utt_id = cells[0];
    try {
      std::size_t used = 0;
      e.score = std::stod(cells[1], &used);
      if (used != cells[1].size()) throw std::invalid_argument(cells[1]);
      e.label = parse_trial_label(cells[2]);
    } catch (const ConfigError &err) {
      throw ParseError(err.what(), lineno);
    } catch (const std::exception &) {
      throw ParseError("bad score '" + cells[1] + "'", lineno);
    }
    e.attack_id = cells[3];
    out.push_back(std::move(e));
  }
  return out;
}

void write_scores(const std::filesystem::path &path, const ScoreSet &scores) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  char buf[32];
  for (const auto &e : scores) {
    std::snprintf(buf, sizeof buf, "%.17g", e.score);
    out << e.utt_id << '\t' << buf << '\t' << to_string(e.label) << '\t'
        << e.attack_id << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace fbcc
