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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
// Usage: afpc_acceptance <work_dir>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "afpc/audio.hpp"
#include "afpc/error.hpp"
#include "afpc/features.hpp"
#include "afpc/mask.hpp"
#include "afpc/metrics.hpp"
#include "afpc/nn/checkpoint.hpp"
#include "afpc/pipeline.hpp"
#include "afpc/simd/kernels.hpp"
#include "afpc/stft.hpp"
#include "afpc/synth.hpp"
#include "unit/gradcheck.hpp"
#include "unit/oracles.hpp"

using namespace afpc;
namespace fs = std::filesystem;

namespace {

// Tolerances and gates.
constexpr double kStftRoundTripTol = 1e-6;
constexpr double kFeatureOracleTol = 1e-12;
constexpr double kGradCheckTol = 1e-4;
constexpr double kOracleMaskGainDb = 5.0;
constexpr double kLearnedSdrGainDb = 1.0;
constexpr double kMaxStoiDrop = 0.01;
constexpr double kSelfStoiMin = 0.999;
constexpr double kMixSnrTol = 1e-9;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const Outcome& o, double seconds) {
  if (!o.pass) ++failures;
  std::printf("%s  [%2d] %-28s %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(),
              seconds);
  std::fflush(stdout);
}

template <typename F>
void run(int id, const std::string& name, F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = f();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  report(id, name, o, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

std::string fmt(double v, int prec = 4) {
  std::ostringstream s;
  s.precision(prec);
  s << v;
  return s.str();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

// 1 ----------------------------------------------------------------------

Outcome feature_sizes() {
  const std::string cmd = std::string(AFPC_CLI_PATH) + " info";
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
  if (!pipe) return {false, "cannot run " + cmd};
  std::map<std::string, std::size_t> dims;
  char line[512];
  while (std::fgets(line, sizeof line, pipe.get())) {
    std::istringstream in(line);
    std::string name;
    std::size_t dim = 0;
    if (in >> name >> dim) dims[name] = dim;
  }
  const std::map<std::string, std::size_t> expected = {
      {"stft", 257}, {"stft+nssc", 323}, {"stft+mfcc", 323}, {"mfcc+nssc", 132}};
  std::string detail;
  bool ok = true;
  for (const auto& [name, dim] : expected) {
    const auto it = dims.find(name);
    const std::size_t got = it == dims.end() ? 0 : it->second;
    ok = ok && got == dim;
    detail += name + "=" + std::to_string(got) + " ";
  }
  return {ok, detail};
}

// 2 ----------------------------------------------------------------------

Outcome parameter_counts() {
  // Closed form sum(in*out + out) for the four reference generators, and the rounded
  // figures they must reproduce.
  struct Row {
    FeatureSet set;
    std::size_t exact;
    double rounded;
    double unit;
  };
  const Row rows[] = {{FeatureSet::Stft, 1060097, 1.06e6, 1e4},
                      {FeatureSet::StftNssc, 1161473, 1.16e6, 1e4},
                      {FeatureSet::StftMfcc, 1161473, 1.16e6, 1e4},
                      {FeatureSet::MfccNssc, 868097, 870e3, 1e4}};
  bool ok = true;
  std::string detail;
  for (const auto& r : rows) {
    const auto info = info_for(RunConfig{}, r.set);
    const double rounded = std::round(static_cast<double>(info.generator_params) / r.unit) * r.unit;
    ok = ok && info.generator_params == r.exact && rounded == r.rounded;
    detail += std::string(to_string(r.set)) + "=" + std::to_string(info.generator_params) + " ";
  }
  return {ok, detail};
}

// 3 ----------------------------------------------------------------------

Outcome stft_round_trip() {
  const StftConfig cfg;
  AudioBuffer x;
  x.samples = oracle::random_signal(101, 16000);
  const AudioBuffer y = istft(stft(x, cfg), x.size());
  const std::size_t covered = (cfg.frame_count(x.size()) - 1) * cfg.hop + cfg.frame_size;
  double err = 0.0, ref = 0.0;
  for (std::size_t n = cfg.frame_size; n + cfg.frame_size < covered; ++n) {
    err += (y.samples[n] - x.samples[n]) * (y.samples[n] - x.samples[n]);
    ref += x.samples[n] * x.samples[n];
  }
  const double rel = std::sqrt(err / ref);
  return {rel < kStftRoundTripTol, "interior rel L2 " + fmt(rel)};
}

// 4 ----------------------------------------------------------------------

Outcome feature_oracles() {
  const StftConfig s;
  const oracle::BankSpec spec{8, 0.0, 8000.0, 512, 16000};
  const auto fb = build_mel_filterbank(8, 0.0, 8000.0, s);
  double worst_sse = 0, worst_mfcc = 0, worst_ssc = 0, worst_nssc = 0, worst_delta = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto frame = oracle::random_spectrum(seed, s.bins());
    const auto sse = compute_sse(frame, fb);
    const auto sse_ref = oracle::sse(frame, spec);
    worst_sse = std::max(worst_sse, oracle::max_rel_error(sse, sse_ref));
    worst_mfcc = std::max(worst_mfcc, oracle::max_rel_error(compute_mfcc(sse, 8), oracle::mfcc(sse_ref, 8)));
    const auto ssc = compute_ssc(frame, fb);
    const auto ssc_ref = oracle::ssc(frame, spec);
    worst_ssc = std::max(worst_ssc, oracle::max_rel_error(ssc, ssc_ref));
    worst_nssc =
        std::max(worst_nssc, oracle::max_rel_error(compute_nssc(ssc, fb, 8), oracle::nssc(ssc_ref, spec, 8)));

    Matrix<double> x(12, 8);
    Matrix<long double> xl(12, 8);
    const auto r = oracle::random_signal(seed + 50, x.size(), 1.0);
    for (std::size_t i = 0; i < x.size(); ++i) xl.data[i] = x.data[i] = r[i];
    const Deltas d = compute_deltas(x, 2);
    const auto d_ref = oracle::delta(xl, 2);
    worst_delta = std::max(worst_delta, oracle::max_rel_error(d.delta.data, d_ref.data, 1e-9));
    worst_delta =
        std::max(worst_delta, oracle::max_rel_error(d.double_delta.data, oracle::delta(d_ref, 2).data, 1e-9));
  }
  const double worst = std::max({worst_sse, worst_mfcc, worst_ssc, worst_nssc, worst_delta});
  return {worst < kFeatureOracleTol, "sse " + fmt(worst_sse, 2) + " mfcc " + fmt(worst_mfcc, 2) + " ssc " +
                                         fmt(worst_ssc, 2) + " nssc " + fmt(worst_nssc, 2) + " delta " +
                                         fmt(worst_delta, 2)};
}

// 5 ----------------------------------------------------------------------

Outcome gradient_check() {
  double worst_d = 0, worst_g0 = 0, worst_g100 = 0;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    worst_d = std::max(worst_d, gradcheck::check_discriminator(seed).max_rel_error);
    worst_g0 = std::max(worst_g0, gradcheck::check_generator(seed, 0.0).max_rel_error);
    worst_g100 = std::max(worst_g100, gradcheck::check_generator(seed, 100.0).max_rel_error);
  }
  const bool ok = worst_d < kGradCheckTol && worst_g0 < kGradCheckTol && worst_g100 < kGradCheckTol;
  return {ok, "D " + fmt(worst_d, 2) + ", G(l=0) " + fmt(worst_g0, 2) + ", G(l=100) " + fmt(worst_g100, 2)};
}

// 6 ----------------------------------------------------------------------

Outcome oracle_mask() {
  const StftConfig cfg;
  const AudioBuffer clean = synth_speech_like(7, 4.0);
  const AudioBuffer noise = synth_noise(NoiseKind::White, 8, clean.size());
  const Mixture mix = mix_at_snr(clean, noise, 0.0);
  const auto irm = compute_irm(stft(clean, cfg), stft(mix.scaled_noise, cfg));
  const AudioBuffer est = apply_mask_and_reconstruct(irm, stft(mix.noisy, cfg), clean.size());
  const double before = sdr(clean, mix.noisy), after = sdr(clean, est);
  return {after - before >= kOracleMaskGainDb,
          "SDR " + fmt(before, 3) + " -> " + fmt(after, 3) + " dB (gain " + fmt(after - before, 3) + ")"};
}

// 7, 8, 10 ----------------------------------------------------------------

struct DeskRun {
  fs::path root;
  fs::path mixed_manifest;
  fs::path cache_dir;
  fs::path checkpoint;
  fs::path enhanced_dir;
  EvaluateResult noisy_eval;
  EvaluateResult enhanced_eval;
  double mask_min = 1.0, mask_max = 0.0;
  std::size_t mask_cells = 0;
};

RunConfig desk_config() {
  RunConfig cfg;
  cfg.features.feature_set = FeatureSet::MfccNssc;
  cfg.features.context = 1;
  cfg.train.epochs = 10;
  cfg.train.batch_size = 128;
  cfg.seed = 3;
  return cfg;
}

DeskRun desk_run(const fs::path& root) {
  fs::remove_all(root);
  DeskRun r;
  r.root = root;
  const RunConfig cfg = desk_config();

  SynthOptions so;
  so.out_dir = root / "corpus";
  so.utterances = 20;
  so.test_utterances = 4;
  so.duration_s = 6.0;
  so.noises = {"white", "babble_like"};
  so.seed = 1;
  const fs::path corpus = cmd_synth(so);

  MixOptions mo;
  mo.manifest = corpus;
  mo.out_dir = root / "mixed";
  mo.snrs = {-5, 0, 5};
  mo.seed = 2;
  r.mixed_manifest = cmd_mix(mo).manifest;

  r.cache_dir = root / "cache";
  cmd_extract(cfg, {r.mixed_manifest, r.cache_dir, false});

  r.checkpoint = root / "model.ganc";
  cmd_train(cfg, {r.mixed_manifest, r.cache_dir, r.checkpoint, false, &std::cerr});

  EnhanceOptions eo;
  eo.checkpoint = r.checkpoint;
  eo.out_dir = root / "enhanced";
  eo.z = {};  // default policy: sampled z, seed 0
  const auto test = read_manifest(r.mixed_manifest).split(Split::Test);
  for (const auto& e : test) eo.inputs.push_back(e.noisy);
  cmd_enhance(eo);
  r.enhanced_dir = eo.out_dir;

  const fs::path clean_dir = root / "mixed" / "clean";
  r.noisy_eval = cmd_evaluate({clean_dir, root / "mixed" / "noisy", root / "eval_noisy.csv", r.mixed_manifest, {}});
  r.enhanced_eval = cmd_evaluate({clean_dir, r.enhanced_dir, root / "eval_enhanced.csv", r.mixed_manifest, {}});

  const nn::GanModel model = nn::load_checkpoint(r.checkpoint);
  for (const auto& e : test) {
    const auto feats = extract_features(read_wav(e.noisy), model.features, model.stft);
    Matrix<float> ctx(feats.context.values.rows, feats.context.values.cols);
    for (std::size_t i = 0; i < ctx.size(); ++i) ctx.data[i] = static_cast<float>(feats.context.values.data[i]);
    const auto mask = nn::infer_mask(model, ctx, eo.z);
    for (double v : mask.data) {
      r.mask_min = std::min(r.mask_min, v);
      r.mask_max = std::max(r.mask_max, v);
    }
    r.mask_cells += mask.size();
  }
  return r;
}

struct Means {
  double sdr = 0, stoi = 0;
  std::size_t n = 0;
};

Means means(const EvaluateResult& e, std::optional<double> snr) {
  Means m;
  for (const auto& r : e.rows) {
    if (snr && r.snr_db != *snr) continue;
    m.sdr += r.sdr_db;
    m.stoi += r.stoi;
    ++m.n;
  }
  if (m.n) {
    m.sdr /= static_cast<double>(m.n);
    m.stoi /= static_cast<double>(m.n);
  }
  return m;
}

Outcome learning_gate(const DeskRun& r) {
  const Means n0 = means(r.noisy_eval, 0.0), e0 = means(r.enhanced_eval, 0.0);
  const Means na = means(r.noisy_eval, std::nullopt), ea = means(r.enhanced_eval, std::nullopt);
  for (double snr : {-5.0, 0.0, 5.0}) {
    const Means a = means(r.noisy_eval, snr), b = means(r.enhanced_eval, snr);
    std::printf("      snr %+.0f dB  SDR %7.3f -> %7.3f  STOI %.4f -> %.4f  (%zu files)\n", snr, a.sdr, b.sdr, a.stoi,
                b.stoi, a.n);
  }
  // Informational only: the same 0 dB comparison on the enhanced signal
  // before it is written as PCM16. The gate above uses the written files.
  {
    const nn::GanModel model = nn::load_checkpoint(r.checkpoint);
    double noisy_stoi = 0, enh_stoi = 0, noisy_sdr = 0, enh_sdr = 0;
    std::size_t n = 0;
    for (const auto& e : read_manifest(r.mixed_manifest).split(Split::Test)) {
      if (e.snr_db != 0.0) continue;
      const AudioBuffer clean = read_wav(r.root / "mixed" / "clean" / (e.stem() + ".wav"));
      const AudioBuffer noisy = read_wav(e.noisy);
      const AudioBuffer enh = enhance(model, noisy);
      noisy_stoi += stoi(clean, noisy);
      enh_stoi += stoi(clean, enh);
      noisy_sdr += sdr(clean, noisy);
      enh_sdr += sdr(clean, enh);
      ++n;
    }
    const double k = static_cast<double>(n);
    std::printf("      before PCM16 quantization, 0 dB: SDR %7.3f -> %7.3f  STOI %.4f -> %.4f\n", noisy_sdr / k,
                enh_sdr / k, noisy_stoi / k, enh_stoi / k);
  }
  const bool ok = n0.n > 0 && e0.sdr - n0.sdr >= kLearnedSdrGainDb && n0.stoi - e0.stoi <= kMaxStoiDrop &&
                  na.stoi - ea.stoi <= kMaxStoiDrop;
  return {ok, "0 dB SDR gain " + fmt(e0.sdr - n0.sdr, 3) + " dB, STOI change " + fmt(e0.stoi - n0.stoi, 3) +
                  " at 0 dB, " + fmt(ea.stoi - na.stoi, 3) + " overall"};
}

Outcome determinism(const DeskRun& a, const DeskRun& b) {
  std::size_t compared = 0;
  std::vector<std::pair<fs::path, fs::path>> files;
  for (const auto& e : fs::directory_iterator(a.cache_dir))
    files.emplace_back(e.path(), b.cache_dir / e.path().filename());
  for (const auto& e : fs::directory_iterator(a.enhanced_dir))
    files.emplace_back(e.path(), b.enhanced_dir / e.path().filename());
  files.emplace_back(a.checkpoint, b.checkpoint);
  for (const auto& [pa, pb] : files) {
    if (!fs::exists(pb) || slurp(pa) != slurp(pb)) return {false, "differs: " + pa.filename().string()};
    ++compared;
  }
  const bool counts_match = std::distance(fs::directory_iterator(a.cache_dir), fs::directory_iterator{}) ==
                                std::distance(fs::directory_iterator(b.cache_dir), fs::directory_iterator{}) &&
                            std::distance(fs::directory_iterator(a.enhanced_dir), fs::directory_iterator{}) ==
                                std::distance(fs::directory_iterator(b.enhanced_dir), fs::directory_iterator{});
  return {counts_match, std::to_string(compared) + " files bit-identical (caches, checkpoint, enhanced WAVs)"};
}

Outcome mask_range(const DeskRun& r) {
  const bool ok = r.mask_cells > 0 && r.mask_min > 0.0 && r.mask_max < 1.0;
  return {ok, std::to_string(r.mask_cells) + " values in [" + fmt(r.mask_min, 6) + ", " + fmt(r.mask_max, 6) + "]"};
}

// 9 ----------------------------------------------------------------------

Outcome metric_sanity(const fs::path& work) {
  const AudioBuffer s = synth_speech_like(31, 3.0);
  const double self_stoi = stoi(s, s);
  const double self_sdr = sdr(s, s);

  SynthOptions so;
  so.out_dir = work / "snr_corpus";
  so.utterances = 3;
  so.test_utterances = 1;
  so.duration_s = 2.0;
  so.seed = 9;
  MixOptions mo;
  mo.manifest = cmd_synth(so);
  mo.out_dir = work / "snr_mixed";
  mo.snrs = {-10, -5, 0, 2.5, 5, 20};
  mo.seed = 4;
  double worst = 0.0;
  for (const auto& rec : cmd_mix(mo).records)
    worst = std::max(worst, std::fabs(rec.achieved_snr_db - rec.requested_snr_db));
  const bool ok = self_stoi >= kSelfStoiMin && self_sdr == kSdrSentinelDb && worst <= kMixSnrTol;
  return {ok, "stoi(s,s) " + fmt(self_stoi, 6) + ", sdr(s,s) " + fmt(self_sdr) + " dB, mix SNR error " +
                  fmt(worst, 2) + " dB"};
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path work = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "afpc_acceptance";
  fs::create_directories(work);
  std::printf("kernels: %s\n", std::string(simd::to_string(simd::active_backend())).c_str());

  run(1, "feature sizes", feature_sizes);
  run(2, "generator parameter counts", parameter_counts);
  run(3, "STFT round trip", stft_round_trip);
  run(4, "feature math oracles", feature_oracles);
  run(5, "gradient check", gradient_check);
  run(6, "oracle mask SDR gain", oracle_mask);

  std::unique_ptr<DeskRun> first, second;
  std::string desk_error;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    first = std::make_unique<DeskRun>(desk_run(work / "run_a"));
  } catch (const std::exception& e) {
    desk_error = e.what();
  }
  const double desk_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("      desk run: %.1f s\n", desk_seconds);
  run(7, "desk-scale learning gate", [&] {
    return first ? learning_gate(*first) : Outcome{false, "pipeline failed: " + desk_error};
  });
  run(8, "determinism", [&] {
    if (!first) return Outcome{false, "pipeline failed: " + desk_error};
    second = std::make_unique<DeskRun>(desk_run(work / "run_b"));
    return determinism(*first, *second);
  });
  run(9, "metric sanity", [&] { return metric_sanity(work); });
  run(10, "mask range", [&] {
    return first ? mask_range(*first) : Outcome{false, "pipeline failed: " + desk_error};
  });

  std::printf("%s: %d of 10 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
