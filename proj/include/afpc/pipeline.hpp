// Copyright 2026 The afpc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "afpc/config.hpp"
#include "afpc/manifest.hpp"
#include "afpc/metrics.hpp"
#include "afpc/nn/gan.hpp"

namespace afpc {

// synth: a zero-data corpus of speech-like utterances plus a manifest that
// pairs each one with every requested synthetic noise.
struct SynthOptions {
  std::filesystem::path out_dir;
  std::size_t utterances = 20;
  std::size_t test_utterances = 4;
  double duration_s = 6.0;
  std::vector<std::string> noises = {"white", "babble_like"};
  std::uint64_t seed = 0;
};

/// Writes out_dir/clean/uttNNN.wav and out_dir/manifest.tsv. Returns the manifest path.
std::filesystem::path cmd_synth(const SynthOptions& opt);

struct MixOptions {
  std::filesystem::path manifest;
  std::filesystem::path out_dir;
  /// Replaces each entry's SNR by every value in the list when non-empty.
  std::vector<double> snrs;
  std::uint64_t seed = 0;
};

struct MixRecord {
  std::string stem;
  double requested_snr_db = 0.0;
  double achieved_snr_db = 0.0;  // measured before PCM16 quantization
  double gain = 0.0;
};

struct MixResult {
  std::filesystem::path manifest;  // out_dir/manifest.tsv, mixed form
  std::vector<MixRecord> records;
};

/// Writes out_dir/{clean,noise,noisy}/<stem>.wav, manifest.tsv and
/// mix_report.tsv. Files written before a failure are removed.
MixResult cmd_mix(const MixOptions& opt);

struct ExtractOptions {
  std::filesystem::path manifest;  // mixed manifest
  std::filesystem::path cache_dir;
  /// Overwrite caches whose key disagrees instead of failing.
  bool force = false;
};

struct ExtractResult {
  std::size_t written = 0;
  std::size_t hits = 0;
  std::size_t context_dim = 0;
  std::size_t feature_dim = 0;
};

/// Per stem: <stem>.ctx.afpc, <stem>.cur.afpc, <stem>.irm, <stem>.spec and
/// <stem>.key (config echo plus input digests).
ExtractResult cmd_extract(const RunConfig& cfg, const ExtractOptions& opt);

/// Cache key text for one manifest entry under `cfg`.
std::string cache_key(const RunConfig& cfg, const ManifestEntry& entry);

/// Loads the train-split caches of a mixed manifest into one frame pool.
nn::TrainingSet load_training_set(const RunConfig& cfg, const std::filesystem::path& manifest,
                                  const std::filesystem::path& cache_dir);

struct TrainOptions {
  std::filesystem::path manifest;
  std::filesystem::path cache_dir;
  std::filesystem::path checkpoint;
  /// Continue from an existing checkpoint when present.
  bool resume = false;
  std::ostream* log = nullptr;
};

struct TrainResult {
  nn::GanModel model;
  std::filesystem::path loss_csv;  // <checkpoint>.loss.csv
};

TrainResult cmd_train(const RunConfig& cfg, const TrainOptions& opt);

struct EnhanceOptions {
  std::filesystem::path checkpoint;
  std::vector<std::filesystem::path> inputs;  // WAV files or directories of WAVs
  std::filesystem::path out_dir;
  /// When set, must agree with the checkpoint (DimensionMismatch otherwise).
  std::optional<FeatureConfig> features;
  nn::ZPolicy z;
};

AudioBuffer enhance(const nn::GanModel& model, const AudioBuffer& noisy, const nn::ZPolicy& z = {});
std::vector<std::filesystem::path> cmd_enhance(const EnhanceOptions& opt);

struct EvaluateOptions {
  std::filesystem::path clean_dir;
  std::filesystem::path processed_dir;
  std::filesystem::path report;
  /// Mixed manifest: limits evaluation to its test split and adds SNR/noise groups.
  std::optional<std::filesystem::path> manifest;
  /// CSV of file,pesq rows merged into the report.
  std::optional<std::filesystem::path> pesq_csv;
};

struct EvaluateResult {
  std::vector<EvalResult> rows;
  EvalResult aggregate;
};

EvaluateResult cmd_evaluate(const EvaluateOptions& opt);

struct InfoRow {
  FeatureSet set = FeatureSet::MfccNssc;
  std::size_t feature_dim = 0;
  std::size_t context_dim = 0;
  std::size_t generator_params = 0;
  std::size_t discriminator_params = 0;
};

InfoRow info_for(const RunConfig& cfg, FeatureSet set);
void cmd_info(const RunConfig& cfg, std::ostream& out);

}  // namespace afpc
