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

// afpc: command-line front end for corpus mixing, feature extraction, GAN
// training, enhancement and evaluation.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "afpc/config.hpp"
#include "afpc/error.hpp"
#include "afpc/pipeline.hpp"
#include "afpc/simd/kernels.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

struct SharedFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string feature_set;
  std::optional<std::size_t> context;
  std::string out;
  std::optional<std::size_t> epochs;
  std::optional<std::size_t> batch_size;
};

void add_shared(CLI::App* cmd, SharedFlags& f) {
  cmd->add_option("--config", f.config, "Config file (key = value lines in sections)");
  cmd->add_option("--seed", f.seed, "Seed for every random draw");
  cmd->add_option("--feature-set", f.feature_set, "stft, mfcc, nssc, stft+mfcc, stft+nssc or mfcc+nssc");
  cmd->add_option("--context", f.context, "Context frames j on each side");
  cmd->add_option("--out", f.out, "Output directory");
}

afpc::RunConfig resolve(const SharedFlags& f) {
  afpc::RunConfig cfg = f.config.empty() ? afpc::RunConfig{} : afpc::load_run_config(f.config);
  if (f.seed) cfg.seed = *f.seed;
  if (!f.feature_set.empty()) {
    const auto set = afpc::parse_feature_set(f.feature_set);
    if (!set) throw CLI::ValidationError("--feature-set", "unknown feature set " + f.feature_set);
    cfg.features.feature_set = *set;
  }
  if (f.context) cfg.features.context = *f.context;
  if (!f.out.empty()) cfg.paths.out_dir = f.out;
  if (f.epochs) cfg.train.epochs = *f.epochs;
  if (f.batch_size) cfg.train.batch_size = *f.batch_size;
  cfg.validate();
  return cfg;
}

std::vector<double> parse_snrs(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw CLI::ValidationError("--snrs", "bad SNR value '" + item + "'");
    out.push_back(v);
  }
  return out;
}

fs::path pick(const fs::path& flag, const fs::path& from_config, const char* what) {
  if (!flag.empty()) return flag;
  if (!from_config.empty()) return from_config;
  throw CLI::RequiredError(what);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Speech enhancement with fingerprint features and a conditional least-squares GAN", "afpc"};
  app.require_subcommand(1);
  std::string kernels = "auto";
  app.add_option("--kernels", kernels, "Compute kernels: auto, scalar or avx2")
      ->check(CLI::IsMember({"auto", "scalar", "avx2"}));

  SharedFlags shared;

  auto* synth = app.add_subcommand("synth", "Write a synthetic speech-like corpus and its manifest");
  afpc::SynthOptions synth_opt;
  std::string synth_noises = "white,babble_like";
  add_shared(synth, shared);
  synth->add_option("--utterances", synth_opt.utterances, "Number of utterances");
  synth->add_option("--test-utterances", synth_opt.test_utterances, "How many of them go to the test split");
  synth->add_option("--duration", synth_opt.duration_s, "Seconds per utterance");
  synth->add_option("--noises", synth_noises, "Comma-separated synthetic noises (white, pink_like, babble_like)");

  auto* mix = app.add_subcommand("mix", "Mix clean speech with noise at the requested SNRs");
  afpc::MixOptions mix_opt;
  std::string mix_snrs;
  add_shared(mix, shared);
  mix->add_option("--manifest", mix_opt.manifest, "Input manifest")->required();
  mix->add_option("--snrs", mix_snrs, "Comma-separated SNRs in dB, e.g. --snrs=-5,0,5");

  auto* extract = app.add_subcommand("extract", "Compute feature, spectrogram and mask caches");
  afpc::ExtractOptions extract_opt;
  std::string extract_manifest;
  add_shared(extract, shared);
  extract->add_option("--manifest", extract_manifest, "Mixed manifest");
  extract->add_flag("--force", extract_opt.force, "Rebuild caches whose key disagrees");

  auto* train = app.add_subcommand("train", "Train the GAN on extracted caches");
  afpc::TrainOptions train_opt;
  std::string train_manifest, train_cache, train_ckpt;
  add_shared(train, shared);
  train->add_option("--manifest", train_manifest, "Mixed manifest");
  train->add_option("--cache-dir", train_cache, "Cache directory written by extract");
  train->add_option("--checkpoint", train_ckpt, "Checkpoint path to write");
  train->add_option("--epochs", shared.epochs, "Number of epochs");
  train->add_option("--batch-size", shared.batch_size, "Frames per batch");
  train->add_flag("--resume", train_opt.resume, "Continue from the checkpoint if it exists");

  auto* enh = app.add_subcommand("enhance", "Enhance noisy WAV files with a trained generator");
  afpc::EnhanceOptions enh_opt;
  std::string z_policy = "sample";
  std::string enh_ckpt;
  add_shared(enh, shared);
  enh->add_option("--checkpoint", enh_ckpt, "Trained checkpoint");
  enh->add_option("inputs", enh_opt.inputs, "Noisy WAV files or directories")->required();
  enh->add_option("--z", z_policy, "Latent input at inference: sample or zeros")
      ->check(CLI::IsMember({"sample", "zeros"}));

  auto* eval = app.add_subcommand("evaluate", "Score processed audio against clean references");
  afpc::EvaluateOptions eval_opt;
  std::string eval_manifest, eval_pesq;
  add_shared(eval, shared);
  eval->add_option("--clean", eval_opt.clean_dir, "Directory of clean references");
  eval->add_option("--processed", eval_opt.processed_dir, "Directory of processed files")->required();
  eval->add_option("--report", eval_opt.report, "CSV report path (default <out>/report.csv)");
  eval->add_option("--manifest", eval_manifest, "Mixed manifest for test-split selection and grouping");
  eval->add_option("--pesq", eval_pesq, "CSV of file,pesq values to merge");

  auto* info = app.add_subcommand("info", "Print feature sizes and parameter counts");
  add_shared(info, shared);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (kernels != "auto") afpc::simd::set_backend(*afpc::simd::parse_backend(kernels));
    const afpc::RunConfig cfg = resolve(shared);

    if (*synth) {
      synth_opt.out_dir = pick(shared.out, cfg.paths.out_dir, "--out");
      synth_opt.seed = cfg.seed;
      synth_opt.noises.clear();
      std::stringstream ss(synth_noises);
      for (std::string n; std::getline(ss, n, ',');) synth_opt.noises.push_back(n);
      std::cout << afpc::cmd_synth(synth_opt).string() << '\n';
    } else if (*mix) {
      mix_opt.out_dir = pick(shared.out, cfg.paths.out_dir, "--out");
      mix_opt.seed = cfg.seed;
      if (!mix_snrs.empty()) mix_opt.snrs = parse_snrs(mix_snrs);
      const auto res = afpc::cmd_mix(mix_opt);
      double worst = 0.0;
      for (const auto& r : res.records) worst = std::max(worst, std::abs(r.achieved_snr_db - r.requested_snr_db));
      std::cout << res.records.size() << " mixtures, max |achieved - requested| SNR = " << worst << " dB\n"
                << res.manifest.string() << '\n';
    } else if (*extract) {
      extract_opt.manifest = pick(extract_manifest, cfg.paths.manifest, "--manifest");
      extract_opt.cache_dir = pick(shared.out, cfg.paths.cache_dir, "--out");
      const auto res = afpc::cmd_extract(cfg, extract_opt);
      std::cout << "features " << afpc::to_string(cfg.features.feature_set) << ": dim " << res.feature_dim
                << ", context dim " << res.context_dim << "; " << res.written << " written, " << res.hits
                << " cached\n";
    } else if (*train) {
      train_opt.manifest = pick(train_manifest, cfg.paths.manifest, "--manifest");
      train_opt.cache_dir = pick(train_cache, cfg.paths.cache_dir, "--cache-dir");
      train_opt.checkpoint = train_ckpt.empty() && !shared.out.empty() ? fs::path(shared.out) / "model.ganc"
                                                                       : pick(train_ckpt, cfg.paths.checkpoint,
                                                                              "--checkpoint");
      train_opt.log = &std::cerr;
      const auto res = afpc::cmd_train(cfg, train_opt);
      std::cout << train_opt.checkpoint.string() << '\n' << res.loss_csv.string() << '\n';
    } else if (*enh) {
      enh_opt.checkpoint = pick(enh_ckpt, cfg.paths.checkpoint, "--checkpoint");
      enh_opt.out_dir = pick(shared.out, cfg.paths.out_dir, "--out");
      if (!shared.feature_set.empty() || shared.context) enh_opt.features = cfg.features;
      enh_opt.z.kind = z_policy == "zeros" ? afpc::nn::ZPolicy::Kind::Zeros : afpc::nn::ZPolicy::Kind::Sample;
      enh_opt.z.seed = cfg.seed;
      const auto written = afpc::cmd_enhance(enh_opt);
      std::cout << written.size() << " files written to " << enh_opt.out_dir.string() << '\n';
    } else if (*eval) {
      if (eval_opt.report.empty()) eval_opt.report = pick(shared.out, cfg.paths.out_dir, "--report") / "report.csv";
      if (!eval_manifest.empty()) eval_opt.manifest = fs::path(eval_manifest);
      else if (!cfg.paths.manifest.empty()) eval_opt.manifest = cfg.paths.manifest;
      if (!eval_pesq.empty()) eval_opt.pesq_csv = fs::path(eval_pesq);
      if (eval_opt.clean_dir.empty() && !eval_opt.manifest) throw CLI::RequiredError("--clean or --manifest");
      const auto res = afpc::cmd_evaluate(eval_opt);
      std::cout << res.rows.size() << " files: mean SDR " << res.aggregate.sdr_db << " dB, mean STOI "
                << res.aggregate.stoi << '\n'
                << eval_opt.report.string() << '\n';
    } else if (*info) {
      afpc::cmd_info(cfg, std::cout);
    }
  } catch (const CLI::Error& e) {
    std::cerr << "afpc: " << e.what() << '\n';
    return kExitUsage;
  } catch (const afpc::Error& e) {
    std::cerr << "afpc: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "afpc: internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitOk;
}
