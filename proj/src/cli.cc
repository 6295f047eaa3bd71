// src/cli.cc

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

#include "fbcc/cli.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "fbcc/cepstral.h"
#include "fbcc/eval.h"
#include "fbcc/fbnn.h"
#include "fbcc/filterbank.h"
#include "fbcc/gmm.h"
#include "fbcc/io.h"
#include "fbcc/manifest.h"
#include "fbcc/preset.h"

namespace fbcc {

namespace fs = std::filesystem;

namespace {

// Runs fn(i) for i in [0, count) on up to `threads` workers. Each index is
// handled exactly once; callers store results by index so output order does
// not depend on scheduling. The first exception is rethrown.
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)> &fn) {
  const auto workers = static_cast<std::size_t>(std::max(1, threads));
  if (workers == 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, count); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto &t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<std::string> split_list(const std::string &text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

// Provenance sidecar written next to a command's primary output.
class Sidecar {
 public:
  Sidecar(std::string command, const std::vector<std::string> &args)
      : doc_{{"command", std::move(command)}, {"args", args}} {}

  void set(const std::string &key, nlohmann::json value) {
    doc_[key] = std::move(value);
  }

  void add_input(const fs::path &path) {
    doc_["inputs"][path.generic_string()] = sha256_file(path);
  }

  // One digest over the member digests, in list order.
  void add_list_members(const fs::path &list, const Manifest &manifest) {
    std::string joined;
    for (const auto &row : manifest.rows) joined += sha256_file(row.path);
    doc_["members"][list.generic_string()] = {
        {"count", manifest.rows.size()}, {"sha256_of_sha256s", sha256_hex(joined)}};
  }

  void write(const fs::path &primary_output) const {
    write_json(primary_output.string() + ".meta.json", doc_);
  }

 private:
  nlohmann::json doc_;
};

struct LoadedList {
  Manifest manifest;
  std::vector<FeatureMatrix> features;
};

LoadedList load_feature_list(const fs::path &list, int threads) {
  LoadedList out;
  out.manifest = parse_manifest(list);
  out.features.resize(out.manifest.rows.size());
  parallel_for(out.features.size(), threads, [&](std::size_t i) {
    out.features[i] = read_features(out.manifest.rows[i].path);
  });
  return out;
}

Matrix stack_rows(const std::vector<const FeatureMatrix *> &parts) {
  Index rows = 0, dim = -1;
  for (const auto *p : parts) {
    if (dim >= 0 && p->dim() != dim && p->num_frames() > 0)
      throw ConfigError("feature files have inconsistent dimensions");
    if (p->num_frames() > 0) dim = p->dim();
    rows += p->num_frames();
  }
  Matrix out(rows, std::max<Index>(dim, 0));
  Index at = 0;
  for (const auto *p : parts) {
    if (p->num_frames() == 0) continue;
    out.middleRows(at, p->num_frames()) = p->rows;
    at += p->num_frames();
  }
  return out;
}

void require_kind(const LoadedList &list, FeatureKind kind, const fs::path &path) {
  for (std::size_t i = 0; i < list.features.size(); ++i)
    if (list.features[i].kind != kind)
      throw ConfigError(path.string() + ": " + list.manifest.rows[i].path.string() +
                        " holds " + std::string(to_string(list.features[i].kind)) +
                        " features, expected " + std::string(to_string(kind)));
}

std::vector<StepRule> parse_schedule(const std::string &text) {
  std::vector<StepRule> out;
  for (const auto &item : split_list(text)) {
    const auto colon = item.find(':');
    if (colon == std::string::npos)
      throw ConfigError("schedule entries look like lr:momentum, got '" + item + "'");
    out.push_back({std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1))});
  }
  if (out.empty()) throw ConfigError("empty schedule");
  return out;
}

// ---------------------------------------------------------------- options

struct BankOptions {
  std::string preset;
  std::string kind = "triangular";
  int channels = 20;
  int nfft = 512;
  int sample_rate = kDefaultSampleRate;
  std::optional<double> f_low, f_high;
  std::string out;
};

struct ExtractOptions {
  std::string manifest, wav, out_dir, out, preset = "lfcc", fbnn, mode = "cep";
  std::optional<int> nfft, channels, coeffs;
  int sample_rate = kDefaultSampleRate;
  double preemph = kDefaultPreemphasis, frame_ms = 20.0, hop_ms = 10.0;
  bool include_static = false;
  int threads = 1;
};

struct TrainFbnnOptions {
  std::string features, preset = "dnn-lfcc", mask_csv, out, schedule = "0.1:0,1:0.9";
  std::optional<int> nfft, channels;
  int epochs = 30, batch_size = 128, hidden = 100, outputs = 0;
  std::uint64_t seed = 1;
  bool log_compress = false;
  int threads = 1;
};

struct ExportBankOptions {
  std::string fbnn, out;
};

struct TrainGmmOptions {
  std::string features, label = "human", out, init = "kmeans";
  int gmm_k = 512, em_iters = 10;
  double var_floor = 1e-3;
  std::uint64_t seed = 1;
  int threads = 1;
};

struct ScoreOptions {
  std::string features, human, spoof, out;
  int threads = 1;
};

struct EvalOptions {
  std::string scores, known, unknown, json;
  bool pooled = false;
};

struct InspectOptions {
  std::string path;
};

// ---------------------------------------------------------------- commands

FilterBank bank_for(const PipelinePreset &preset, std::optional<int> nfft,
                    std::optional<int> channels, int sample_rate) {
  BankSpec spec = BankSpec::with_defaults(preset.kind, channels.value_or(preset.channels),
                                          nfft.value_or(preset.nfft), sample_rate);
  return build_filter_bank(spec);
}

void cmd_make_bank(const BankOptions &o, const std::vector<std::string> &args,
                   std::ostream &out) {
  BankSpec spec;
  if (!o.preset.empty()) {
    spec = find_preset(o.preset).bank_spec(o.sample_rate);
  } else {
    spec = BankSpec::with_defaults(parse_bank_kind(o.kind), o.channels, o.nfft,
                                   o.sample_rate);
  }
  if (o.f_low) spec.f_low = *o.f_low;
  if (o.f_high) spec.f_high = *o.f_high;
  const FilterBank bank = build_filter_bank(spec);
  export_bank_csv(bank, o.out);

  Sidecar meta("make-bank", args);
  meta.set("preset", o.preset.empty() ? nlohmann::json(nullptr) : nlohmann::json(o.preset));
  meta.set("bank", {{"kind", to_string(spec.kind)},
                    {"channels", spec.channels},
                    {"nfft", spec.nfft},
                    {"sample_rate", spec.sample_rate},
                    {"f_low", spec.f_low},
                    {"f_high", spec.f_high}});
  meta.write(o.out);
  out << "wrote " << bank.num_bins() << "x" << bank.num_channels() << " "
      << to_string(spec.kind) << " bank to " << o.out << "\n";
}

void cmd_extract(const ExtractOptions &o, const std::vector<std::string> &args,
                 std::ostream &out) {
  const PipelinePreset &preset = find_preset(o.preset);
  if (o.mode != "cep" && o.mode != "power" && o.mode != "fbank")
    throw ConfigError("--mode must be cep, power or fbank");

  PipelineConfig pipeline;
  pipeline.preemphasis = o.preemph;
  pipeline.frame_ms = o.frame_ms;
  pipeline.hop_ms = o.hop_ms;
  pipeline.nfft = o.nfft.value_or(preset.nfft);
  pipeline.cepstral.num_coeffs = o.coeffs.value_or(preset.coeffs);
  pipeline.cepstral.include_static = o.include_static;

  Sidecar meta("extract", args);
  meta.set("preset", std::string(preset.name));
  meta.set("mode", o.mode);

  if (o.mode != "power") {
    if (preset.learned) {
      if (o.fbnn.empty())
        throw ConfigError("preset " + std::string(preset.name) +
                          " needs a trained network (--fbnn)");
      const FbnnModel model = fbnn_from_json(read_json(o.fbnn));
      pipeline.cepstral.bank = effective_filter_bank(model);
      if (pipeline.cepstral.bank.num_bins() != pipeline.nfft / 2 + 1)
        throw ConfigError("network input dimension " +
                          std::to_string(model.input_dim()) +
                          " does not match nfft " + std::to_string(pipeline.nfft));
      meta.add_input(o.fbnn);
    } else {
      pipeline.cepstral.bank = bank_for(preset, o.nfft, o.channels, o.sample_rate);
    }
    pipeline.validate();
  }

  auto features_of = [&](const AudioBuffer &audio, const std::string &utt) {
    if (audio.sample_rate != o.sample_rate)
      throw ConfigError(utt + ": sample rate " + std::to_string(audio.sample_rate) +
                        " differs from expected " + std::to_string(o.sample_rate));
    if (o.mode == "cep") return extract_utterance(audio, pipeline, utt);
    Matrix power = utterance_power_spectra(audio, pipeline);
    if (o.mode == "power") return FeatureMatrix{std::move(power), FeatureKind::kPower};
    return FeatureMatrix{filter_bank_energies(power, pipeline.cepstral.bank),
                         FeatureKind::kFbank};
  };

  if (!o.wav.empty()) {
    if (o.out.empty()) throw ConfigError("--wav needs --out");
    const FeatureMatrix f = features_of(read_wav(o.wav), fs::path(o.wav).stem().string());
    write_features(o.out, f);
    meta.add_input(o.wav);
    meta.write(o.out);
    out << "wrote " << f.num_frames() << "x" << f.dim() << " " << to_string(f.kind)
        << " features to " << o.out << "\n";
    return;
  }
  if (o.manifest.empty() || o.out_dir.empty())
    throw ConfigError("extract needs --wav/--out or --manifest/--out-dir");

  const Manifest manifest = parse_manifest(o.manifest);
  std::set<std::string> ids;
  for (const auto &row : manifest.rows)
    if (!ids.insert(row.utt_id()).second)
      throw ConfigError("duplicate utterance id '" + row.utt_id() + "' in manifest");
  fs::create_directories(o.out_dir);

  Manifest listing;
  listing.rows.resize(manifest.rows.size());
  parallel_for(manifest.rows.size(), o.threads, [&](std::size_t i) {
    const ManifestRow &row = manifest.rows[i];
    const FeatureMatrix f = features_of(read_wav(row.path), row.utt_id());
    const fs::path dest = fs::path(o.out_dir) / (row.utt_id() + ".fbf");
    write_features(dest, f);
    listing.rows[i] = row;
    listing.rows[i].path = dest;
  });
  const fs::path list_path = fs::path(o.out_dir) / "features.tsv";
  write_manifest(list_path, listing);
  meta.add_input(o.manifest);
  meta.add_list_members(o.manifest, manifest);
  meta.write(list_path);
  out << "extracted " << listing.rows.size() << " utterances (" << o.mode
      << ") to " << list_path.string() << "\n";
}

void cmd_train_fbnn(const TrainFbnnOptions &o, const std::vector<std::string> &args,
                    std::ostream &out) {
  FilterBank mask;
  std::string mask_kind = "learned";
  if (!o.mask_csv.empty()) {
    mask = read_bank_csv(o.mask_csv);
    mask_kind = "csv";
  } else {
    const PipelinePreset &preset = find_preset(o.preset);
    mask = bank_for(preset, o.nfft, o.channels, kDefaultSampleRate);
    mask_kind = std::string(to_string(preset.kind));
  }

  const LoadedList list = load_feature_list(o.features, o.threads);
  require_kind(list, FeatureKind::kPower, o.features);
  std::vector<const FeatureMatrix *> parts;
  std::vector<int> labels;
  for (std::size_t i = 0; i < list.features.size(); ++i) {
    const int cls = list.manifest.rows[i].class_index;
    if (cls < 0)
      throw ConfigError(list.manifest.rows[i].path.string() +
                        ": FBNN training needs a class index column");
    parts.push_back(&list.features[i]);
    labels.insert(labels.end(), static_cast<std::size_t>(list.features[i].num_frames()),
                  cls);
  }
  const Matrix inputs = stack_rows(parts);

  TrainConfig cfg;
  cfg.epochs = o.epochs;
  cfg.batch_size = o.batch_size;
  cfg.schedule = parse_schedule(o.schedule);
  cfg.seed = o.seed;
  cfg.hidden_nodes = o.hidden;
  cfg.num_outputs = o.outputs;
  cfg.log_compress = o.log_compress;
  const TrainResult result = train_fbnn(inputs, labels, mask, cfg);

  write_json(o.out, fbnn_to_json(result.model, {cfg, mask_kind, result.epoch_losses}));
  Sidecar meta("train-fbnn", args);
  meta.set("preset", o.mask_csv.empty() ? nlohmann::json(o.preset) : nlohmann::json(nullptr));
  meta.set("seed", o.seed);
  meta.set("frames", inputs.rows());
  meta.set("epoch_losses", result.epoch_losses);
  meta.add_input(o.features);
  meta.add_list_members(o.features, list.manifest);
  if (!o.mask_csv.empty()) meta.add_input(o.mask_csv);
  meta.write(o.out);
  out << "trained FBNN on " << inputs.rows() << " frames; final epoch loss "
      << result.epoch_losses.back() << "\n";
}

void cmd_export_bank(const ExportBankOptions &o, const std::vector<std::string> &args,
                     std::ostream &out) {
  const FbnnModel model = fbnn_from_json(read_json(o.fbnn));
  const FilterBank bank = effective_filter_bank(model);
  export_bank_csv(bank, o.out);
  Sidecar meta("export-learned-bank", args);
  meta.add_input(o.fbnn);
  meta.write(o.out);
  out << "wrote learned " << bank.num_bins() << "x" << bank.num_channels()
      << " bank to " << o.out << "\n";
}

void cmd_train_gmm(const TrainGmmOptions &o, const std::vector<std::string> &args,
                   std::ostream &out) {
  const TrialLabel label = parse_trial_label(o.label);
  const LoadedList list = load_feature_list(o.features, o.threads);
  std::vector<const FeatureMatrix *> parts;
  for (std::size_t i = 0; i < list.features.size(); ++i)
    if (list.manifest.rows[i].label == label) parts.push_back(&list.features[i]);
  if (parts.empty()) throw ConfigError("no " + o.label + " utterances in " + o.features);
  const Matrix frames = stack_rows(parts);

  GmmTrainConfig cfg;
  cfg.components = o.gmm_k;
  cfg.em_iters = o.em_iters;
  cfg.var_floor_factor = o.var_floor;
  cfg.seed = o.seed;
  if (o.init == "kmeans") {
    cfg.init = GmmInit::kKmeans;
  } else if (o.init == "random_frames") {
    cfg.init = GmmInit::kRandomFrames;
  } else {
    throw ConfigError("--init must be kmeans or random_frames");
  }
  const GmmTrainResult result = train_gmm(frames, cfg);
  write_json(o.out, gmm_to_json(result.model, cfg, result.log_likelihood));

  Sidecar meta("train-gmm", args);
  meta.set("label", o.label);
  meta.set("seed", o.seed);
  meta.set("frames", frames.rows());
  nlohmann::json events = nlohmann::json::array();
  for (const auto &e : result.events)
    events.push_back({{"iteration", e.iteration}, {"component", e.component},
                      {"message", e.message}});
  meta.set("events", events);
  meta.add_input(o.features);
  meta.add_list_members(o.features, list.manifest);
  meta.write(o.out);
  out << "trained " << o.label << " GMM (K=" << cfg.components << ") on "
      << frames.rows() << " frames; final log-likelihood "
      << result.log_likelihood.back() << "\n";
}

void cmd_score(const ScoreOptions &o, const std::vector<std::string> &args,
               std::ostream &out) {
  const GmmModel human = gmm_from_json(read_json(o.human));
  const GmmModel spoof = gmm_from_json(read_json(o.spoof));
  const LoadedList list = load_feature_list(o.features, o.threads);
  ScoreSet scores(list.features.size());
  parallel_for(scores.size(), o.threads, [&](std::size_t i) {
    const ManifestRow &row = list.manifest.rows[i];
    try {
      scores[i] = {row.utt_id(), llr_score(list.features[i], human, spoof), row.label,
                   row.attack_id};
    } catch (const EvalError &e) {
      throw EvalError(row.utt_id() + ": " + e.what());
    }
  });
  write_scores(o.out, scores);
  Sidecar meta("score", args);
  meta.add_input(o.features);
  meta.add_list_members(o.features, list.manifest);
  meta.add_input(o.human);
  meta.add_input(o.spoof);
  meta.write(o.out);
  out << "scored " << scores.size() << " utterances to " << o.out << "\n";
}

void cmd_eval(const EvalOptions &o, const std::vector<std::string> &args,
              std::ostream &out) {
  const ScoreSet scores = read_scores(o.scores);
  const EvalReport report =
      aggregate_report(scores, split_list(o.known), split_list(o.unknown),
                       o.pooled ? GroupAveraging::kPooled : GroupAveraging::kPerAttack);
  out << format_report(report);
  if (!o.json.empty()) {
    write_json(o.json, report_to_json(report));
    Sidecar meta("eval", args);
    meta.add_input(o.scores);
    meta.write(o.json);
  }
}

void cmd_inspect(const InspectOptions &o, std::ostream &out) {
  const std::string bytes = read_file_bytes(o.path);
  if (bytes.rfind("FBF1", 0) == 0) {
    const FeatureMatrix f = decode_fbf1(bytes);
    out << "FBF1 features: " << f.num_frames() << " frames x " << f.dim()
        << " dims, kind " << to_string(f.kind) << "\n";
    if (f.num_frames() > 0)
      out << "  min " << f.rows.minCoeff() << "  max " << f.rows.maxCoeff()
          << "  mean " << f.rows.mean() << "\n";
    return;
  }
  if (bytes.rfind("RIFF", 0) == 0) {
    const AudioBuffer audio = read_wav(o.path);
    out << "WAV: " << audio.size() << " samples at " << audio.sample_rate << " Hz ("
        << static_cast<double>(audio.size()) / audio.sample_rate << " s)\n";
    return;
  }
  if (!bytes.empty() && bytes[0] == '{') {
    const nlohmann::json j = nlohmann::json::parse(bytes);
    const std::string type = j.value("type", "");
    if (type == "fbnn") {
      const FbnnModel m = fbnn_from_json(j);
      out << "FBNN model: D=" << m.input_dim() << " C=" << m.channels()
          << " H2=" << m.hidden() << " N_out=" << m.outputs()
          << " mask=" << j.value("mask_kind", "?") << " seed=" << j.value("seed", 0ULL)
          << "\n";
      if (j.contains("epoch_losses") && !j["epoch_losses"].empty())
        out << "  epoch losses: first " << j["epoch_losses"].front().get<double>()
            << " last " << j["epoch_losses"].back().get<double>() << "\n";
      return;
    }
    if (type == "gmm") {
      const GmmModel m = gmm_from_json(j);
      out << "GMM model: K=" << m.components() << " dim=" << m.dim()
          << " seed=" << j.value("seed", 0ULL) << "\n";
      return;
    }
    out << "JSON document (" << j.size() << " keys)\n";
    return;
  }
  if (bytes.rfind("bin_hz", 0) == 0) {
    const FilterBank bank = read_bank_csv(o.path);
    out << "filter bank CSV: " << bank.num_bins() << " bins x " << bank.num_channels()
        << " channels, nfft " << bank.nfft << ", " << bank.sample_rate << " Hz\n";
    return;
  }
  throw FormatError("unrecognized file type: " + o.path, 0);
}

}  // namespace

int run_command(const std::vector<std::string> &args, std::ostream &out,
                std::ostream &err) {
  CLI::App app{"Filter bank cepstral features, FBNN training and GMM spoofing detection",
               "fbcc"};
  app.require_subcommand(1);

  BankOptions bank;
  auto *make_bank = app.add_subcommand("make-bank", "Build a manual filter bank, export CSV");
  make_bank->add_option("--preset", bank.preset, "Take kind/nfft/channels from a preset");
  make_bank->add_option("--kind", bank.kind,
                        "triangular|rectangular|gammatone|inverted_gammatone");
  make_bank->add_option("--channels", bank.channels);
  make_bank->add_option("--nfft", bank.nfft);
  make_bank->add_option("--sample-rate", bank.sample_rate);
  make_bank->add_option("--f-low", bank.f_low);
  make_bank->add_option("--f-high", bank.f_high);
  make_bank->add_option("--out", bank.out)->required();

  ExtractOptions ex;
  auto *extract = app.add_subcommand("extract", "Extract features from WAV files");
  extract->add_option("--manifest", ex.manifest, "TSV: wav label attack [class]");
  extract->add_option("--out-dir", ex.out_dir);
  extract->add_option("--wav", ex.wav, "Single WAV input");
  extract->add_option("--out", ex.out, "Output FBF1 file for --wav");
  extract->add_option("--preset", ex.preset);
  extract->add_option("--fbnn", ex.fbnn, "Trained network for dnn-* presets");
  extract->add_option("--mode", ex.mode, "cep (default), power or fbank");
  extract->add_option("--nfft", ex.nfft);
  extract->add_option("--channels", ex.channels);
  extract->add_option("--coeffs", ex.coeffs);
  extract->add_option("--sample-rate", ex.sample_rate, "Expected input sample rate");
  extract->add_option("--preemph", ex.preemph);
  extract->add_option("--frame-ms", ex.frame_ms);
  extract->add_option("--hop-ms", ex.hop_ms);
  extract->add_flag("--include-static", ex.include_static);
  extract->add_option("--threads", ex.threads);

  TrainFbnnOptions tf;
  auto *train_fbnn_cmd = app.add_subcommand("train-fbnn", "Train the filter bank network");
  train_fbnn_cmd->add_option("--features", tf.features, "List of power features")->required();
  train_fbnn_cmd->add_option("--preset", tf.preset, "Preset whose bank is the mask");
  train_fbnn_cmd->add_option("--mask-csv", tf.mask_csv, "Mask from a bank CSV instead");
  train_fbnn_cmd->add_option("--nfft", tf.nfft);
  train_fbnn_cmd->add_option("--channels", tf.channels);
  train_fbnn_cmd->add_option("--epochs", tf.epochs);
  train_fbnn_cmd->add_option("--batch-size", tf.batch_size);
  train_fbnn_cmd->add_option("--schedule", tf.schedule, "lr:momentum per epoch, last repeats");
  train_fbnn_cmd->add_option("--hidden", tf.hidden);
  train_fbnn_cmd->add_option("--outputs", tf.outputs, "Output nodes (0 = infer)");
  train_fbnn_cmd->add_option("--seed", tf.seed);
  train_fbnn_cmd->add_flag("--log-compress", tf.log_compress);
  train_fbnn_cmd->add_option("--threads", tf.threads);
  train_fbnn_cmd->add_option("--out", tf.out)->required();

  ExportBankOptions eb;
  auto *export_bank = app.add_subcommand("export-learned-bank", "Write sigmoid(W).*mask as CSV");
  export_bank->add_option("--fbnn", eb.fbnn)->required();
  export_bank->add_option("--out", eb.out)->required();

  TrainGmmOptions tg;
  auto *train_gmm_cmd = app.add_subcommand("train-gmm", "Train one class GMM");
  train_gmm_cmd->add_option("--features", tg.features)->required();
  train_gmm_cmd->add_option("--label", tg.label, "human or spoof");
  train_gmm_cmd->add_option("--gmm-k", tg.gmm_k);
  train_gmm_cmd->add_option("--em-iters", tg.em_iters);
  train_gmm_cmd->add_option("--var-floor", tg.var_floor);
  train_gmm_cmd->add_option("--init", tg.init, "kmeans or random_frames");
  train_gmm_cmd->add_option("--seed", tg.seed);
  train_gmm_cmd->add_option("--threads", tg.threads);
  train_gmm_cmd->add_option("--out", tg.out)->required();

  ScoreOptions sc;
  auto *score = app.add_subcommand("score", "Log-likelihood-ratio scores");
  score->add_option("--features", sc.features)->required();
  score->add_option("--human", sc.human)->required();
  score->add_option("--spoof", sc.spoof)->required();
  score->add_option("--threads", sc.threads);
  score->add_option("--out", sc.out)->required();

  EvalOptions ev;
  auto *eval = app.add_subcommand("eval", "EER report from a score file");
  eval->add_option("--scores", ev.scores)->required();
  eval->add_option("--known", ev.known, "Comma-separated known attacks");
  eval->add_option("--unknown", ev.unknown, "Comma-separated unknown attacks");
  eval->add_flag("--pooled", ev.pooled, "Pool trials per group instead of averaging");
  eval->add_option("--json", ev.json, "Also write the report as JSON");

  InspectOptions in;
  auto *inspect = app.add_subcommand("inspect", "Describe a feature, model, WAV or bank file");
  inspect->add_option("path", in.path)->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  std::string stage;
  try {
    if (*make_bank) {
      stage = "make-bank";
      cmd_make_bank(bank, args, out);
    } else if (*extract) {
      stage = "extract";
      cmd_extract(ex, args, out);
    } else if (*train_fbnn_cmd) {
      stage = "train-fbnn";
      cmd_train_fbnn(tf, args, out);
    } else if (*export_bank) {
      stage = "export-learned-bank";
      cmd_export_bank(eb, args, out);
    } else if (*train_gmm_cmd) {
      stage = "train-gmm";
      cmd_train_gmm(tg, args, out);
    } else if (*score) {
      stage = "score";
      cmd_score(sc, args, out);
    } else if (*eval) {
      stage = "eval";
      cmd_eval(ev, args, out);
    } else if (*inspect) {
      stage = "inspect";
      cmd_inspect(in, out);
    }
  } catch (const std::exception &e) {
    err << "fbcc " << stage << ": error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace fbcc
