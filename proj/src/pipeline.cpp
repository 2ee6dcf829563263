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

#include "afpc/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "afpc/audio.hpp"
#include "afpc/digest.hpp"
#include "afpc/error.hpp"
#include "afpc/feature_cache.hpp"
#include "afpc/mask.hpp"
#include "afpc/nn/checkpoint.hpp"
#include "afpc/synth.hpp"

namespace afpc {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
  return splitmix64(splitmix64(splitmix64(seed) ^ a) ^ b);
}

std::string snr_tag(double snr) {
  std::ostringstream s;
  s << snr;
  return "snr" + s.str();
}

std::string fixed(double v, int digits = 6) {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) fail(ErrorCode::IoFailure, "cannot create " + path.string());
  f << text;
  if (!f) fail(ErrorCode::IoFailure, "write error on " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream f(path);
  if (!f) fail(ErrorCode::IoFailure, "cannot open " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct CachePaths {
  fs::path context, current, irm, spec, key;
};

CachePaths cache_paths(const fs::path& dir, const std::string& stem) {
  return {dir / (stem + ".ctx.afpc"), dir / (stem + ".cur.afpc"), dir / (stem + ".irm"), dir / (stem + ".spec"),
          dir / (stem + ".key")};
}

void require_mixed(const ManifestEntry& e) {
  if (e.noisy.empty() || e.synthetic_noise())
    fail(ErrorCode::InvalidArgument, "manifest entry for " + e.clean.string() + " has not been mixed");
}

// Removes files created by a failing command.
class OutputGuard {
 public:
  void track(const fs::path& p) { created_.push_back(p); }
  void commit() { created_.clear(); }
  ~OutputGuard() {
    std::error_code ec;
    for (auto it = created_.rbegin(); it != created_.rend(); ++it) fs::remove(*it, ec);
  }

 private:
  std::vector<fs::path> created_;
};

void make_dir(const fs::path& dir, OutputGuard& guard) {
  if (fs::exists(dir)) return;
  std::vector<fs::path> made;
  for (fs::path p = dir; !p.empty() && !fs::exists(p); p = p.parent_path()) made.push_back(p);
  fs::create_directories(dir);
  for (const auto& p : made) guard.track(p);
}

std::vector<fs::path> expand_wavs(const std::vector<fs::path>& inputs) {
  std::vector<fs::path> out;
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::directory_iterator(in))
        if (e.is_regular_file() && e.path().extension() == ".wav") found.push_back(e.path());
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else {
      out.push_back(in);
    }
  }
  return out;
}

}  // namespace

fs::path cmd_synth(const SynthOptions& opt) {
  require(opt.utterances > 0, ErrorCode::InvalidArgument, "need at least one utterance");
  require(opt.test_utterances <= opt.utterances, ErrorCode::InvalidArgument, "more test utterances than utterances");
  require(!opt.noises.empty(), ErrorCode::InvalidArgument, "need at least one noise");
  for (const auto& n : opt.noises)
    if (!parse_noise_kind(n)) fail(ErrorCode::InvalidArgument, "unknown synthetic noise " + n);

  fs::create_directories(opt.out_dir / "clean");
  DatasetManifest manifest;
  const std::size_t first_test = opt.utterances - opt.test_utterances;
  for (std::size_t i = 0; i < opt.utterances; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "utt%03zu.wav", i);
    const fs::path clean = opt.out_dir / "clean" / name;
    write_wav(synth_speech_like(derive_seed(opt.seed, 1, i), opt.duration_s), clean);
    for (const auto& n : opt.noises) {
      ManifestEntry e;
      e.clean = clean;
      e.noise = std::string(to_string(*parse_noise_kind(n)));
      e.snr_db = 0.0;
      e.split = i < first_test ? Split::Train : Split::Test;
      manifest.entries.push_back(e);
    }
  }
  const fs::path path = opt.out_dir / "manifest.tsv";
  write_manifest(manifest, path);
  return path;
}

MixResult cmd_mix(const MixOptions& opt) {
  const DatasetManifest in = read_manifest(opt.manifest);
  if (in.entries.empty()) fail(ErrorCode::EmptyDataset, "manifest " + opt.manifest.string() + " has no entries");

  OutputGuard guard;
  make_dir(opt.out_dir, guard);
  for (const char* sub : {"clean", "noise", "noisy"}) make_dir(opt.out_dir / sub, guard);

  MixResult result;
  DatasetManifest out;
  std::set<std::string> stems;
  for (std::size_t i = 0; i < in.entries.size(); ++i) {
    const ManifestEntry& e = in.entries[i];
    const AudioBuffer clean = read_wav(e.clean);
    const auto kind = e.synthetic_noise();
    const std::string label = kind ? std::string(to_string(*kind)) : fs::path(e.noise).stem().string();
    const std::vector<double> snrs = opt.snrs.empty() ? std::vector<double>{e.snr_db} : opt.snrs;

    for (std::size_t k = 0; k < snrs.size(); ++k) {
      const std::uint64_t seed = derive_seed(opt.seed, i, k);
      AudioBuffer noise;
      if (kind) {
        noise = synth_noise(*kind, seed, clean.size(), clean.sample_rate);
      } else {
        noise = read_wav(e.noise);
        if (noise.sample_rate != clean.sample_rate)
          fail(ErrorCode::SampleRateMismatch, "noise " + e.noise + " is not at " + std::to_string(clean.sample_rate) +
                                                  " Hz");
        if (noise.size() > clean.size()) {
          std::mt19937_64 rng(seed);
          const std::size_t offset =
              std::uniform_int_distribution<std::size_t>(0, noise.size() - clean.size())(rng);
          noise.samples = std::vector<double>(noise.samples.begin() + static_cast<std::ptrdiff_t>(offset),
                                              noise.samples.begin() +
                                                  static_cast<std::ptrdiff_t>(offset + clean.size()));
        }
      }
      const Mixture mix = mix_at_snr(clean, noise, snrs[k]);

      const std::string stem = e.clean.stem().string() + "_" + label + "_" + snr_tag(snrs[k]);
      if (!stems.insert(stem).second) fail(ErrorCode::InvalidArgument, "duplicate mixture name " + stem);
      const std::string file = stem + ".wav";
      ManifestEntry m;
      m.clean = opt.out_dir / "clean" / file;
      m.noise = (opt.out_dir / "noise" / file).string();
      m.noisy = opt.out_dir / "noisy" / file;
      m.snr_db = snrs[k];
      m.split = e.split;
      m.noise_label = label;
      for (const fs::path& p : {m.clean, fs::path(m.noise), m.noisy}) guard.track(p);
      write_wav(clean, m.clean);
      write_wav(mix.scaled_noise, m.noise);
      write_wav(mix.noisy, m.noisy);
      out.entries.push_back(m);
      result.records.push_back(
          {stem, snrs[k], measured_snr_db(clean.samples, mix.scaled_noise.samples), mix.gain});
    }
  }

  result.manifest = opt.out_dir / "manifest.tsv";
  guard.track(result.manifest);
  write_manifest(out, result.manifest);

  std::ostringstream report;
  report << "stem\trequested_snr_db\tachieved_snr_db\tgain\n";
  report.precision(17);
  for (const auto& r : result.records)
    report << r.stem << '\t' << r.requested_snr_db << '\t' << r.achieved_snr_db << '\t' << r.gain << '\n';
  guard.track(opt.out_dir / "mix_report.tsv");
  write_text(opt.out_dir / "mix_report.tsv", report.str());
  guard.commit();
  return result;
}

std::string cache_key(const RunConfig& cfg, const ManifestEntry& entry) {
  json key{{"cache_version", kCacheVersion},
           {"stft", cfg.stft},
           {"features", cfg.features},
           {"noisy", sha256_file(entry.noisy)},
           {"clean", sha256_file(entry.clean)},
           {"noise", sha256_file(entry.noise)}};
  return key.dump(2) + "\n";
}

ExtractResult cmd_extract(const RunConfig& cfg, const ExtractOptions& opt) {
  cfg.validate();
  const DatasetManifest manifest = read_manifest(opt.manifest);
  if (manifest.entries.empty()) fail(ErrorCode::EmptyDataset, "manifest " + opt.manifest.string() + " has no entries");
  fs::create_directories(opt.cache_dir);

  ExtractResult result;
  result.context_dim = context_dimension(cfg.features, cfg.stft);
  result.feature_dim = feature_dimension(cfg.features, cfg.stft);
  for (const auto& e : manifest.entries) {
    require_mixed(e);
    const CachePaths paths = cache_paths(opt.cache_dir, e.stem());
    const std::string key = cache_key(cfg, e);
    if (fs::exists(paths.key)) {
      if (read_text(paths.key) == key) {
        ++result.hits;
        continue;
      }
      if (!opt.force)
        fail(ErrorCode::CacheMismatch, "cache for " + e.stem() + " was built from a different config or input (" +
                                           paths.key.string() + "); rerun with --force to rebuild");
    }

    const AudioBuffer noisy = read_wav(e.noisy);
    const AudioBuffer clean = read_wav(e.clean);
    const AudioBuffer noise = read_wav(e.noise);
    const ExtractedFeatures feats = extract_features(noisy, cfg.features, cfg.stft);
    const IrmSpectrogram irm = compute_irm(stft(clean, cfg.stft), stft(noise, cfg.stft));
    if (irm.rows != feats.current.frames())
      fail(ErrorCode::CacheMismatch, "frame counts differ between features and targets for " + e.stem());

    // The key goes last so an interrupted run never looks like a cache hit.
    std::error_code ec;
    fs::remove(paths.key, ec);
    const FeatureSet set = cfg.features.feature_set;
    write_feature_cache(paths.context, set, feats.context.values);
    write_feature_cache(paths.current, set, feats.current.values);
    write_mask_cache(paths.irm, set, irm);
    write_spectrogram_cache(paths.spec, set, feats.spectrogram);
    write_text(paths.key, key);
    ++result.written;
  }
  return result;
}

nn::TrainingSet load_training_set(const RunConfig& cfg, const fs::path& manifest_path, const fs::path& cache_dir) {
  const DatasetManifest manifest = read_manifest(manifest_path);
  const auto entries = manifest.split(Split::Train);
  if (entries.empty()) fail(ErrorCode::EmptyDataset, "manifest has no training entries");

  std::vector<Matrix<float>> ctx, cur, tgt;
  std::size_t frames = 0;
  for (const auto& e : entries) {
    require_mixed(e);
    const CachePaths paths = cache_paths(cache_dir, e.stem());
    if (!fs::exists(paths.key)) fail(ErrorCode::CacheMismatch, "no feature cache for " + e.stem() + "; run extract");
    if (read_text(paths.key) != cache_key(cfg, e))
      fail(ErrorCode::CacheMismatch, "cache for " + e.stem() + " does not match the requested config");
    ctx.push_back(read_feature_cache(paths.context));
    cur.push_back(read_feature_cache(paths.current));
    tgt.push_back(read_mask_cache(paths.irm));
    if (ctx.back().rows != tgt.back().rows || cur.back().rows != tgt.back().rows)
      fail(ErrorCode::CacheMismatch, "cache frame counts disagree for " + e.stem());
    frames += tgt.back().rows;
  }

  auto stack = [frames](const std::vector<Matrix<float>>& parts) {
    Matrix<float> out(frames, parts.front().cols);
    std::size_t row = 0;
    for (const auto& p : parts) {
      if (p.cols != out.cols) fail(ErrorCode::CacheMismatch, "cache dimensions differ between utterances");
      std::copy(p.data.begin(), p.data.end(), out.data.begin() + static_cast<std::ptrdiff_t>(row * out.cols));
      row += p.rows;
    }
    return out;
  };
  return {stack(ctx), stack(cur), stack(tgt)};
}

TrainResult cmd_train(const RunConfig& cfg, const TrainOptions& opt) {
  cfg.validate();
  const nn::TrainingSet data = load_training_set(cfg, opt.manifest, opt.cache_dir);

  nn::TrainConfig tc = cfg.train;
  tc.seed = cfg.seed;
  nn::GanModel model;
  const bool resuming = opt.resume && fs::exists(opt.checkpoint);
  if (resuming) {
    model = nn::load_checkpoint(opt.checkpoint);
    if (!(model.features == cfg.features) || !(model.stft == cfg.stft) || !(model.arch == cfg.arch))
      fail(ErrorCode::ConfigMismatch, "checkpoint " + opt.checkpoint.string() + " was trained with another config");
    model.train.epochs = tc.epochs;
  } else {
    model = nn::make_gan_model(cfg.features, cfg.stft, cfg.arch, tc);
  }

  TrainResult result;
  result.loss_csv = opt.checkpoint.string() + ".loss.csv";
  if (!opt.checkpoint.parent_path().empty()) fs::create_directories(opt.checkpoint.parent_path());
  std::ofstream csv(result.loss_csv, resuming ? std::ios::app : std::ios::trunc);
  if (!csv) fail(ErrorCode::IoFailure, "cannot create " + result.loss_csv.string());
  if (!resuming) csv << "epoch,rate,loss_d_real,loss_d_fake,loss_g_adversarial,loss_g,mean_abs_error,batches,seconds\n";
  csv.precision(9);

  nn::train(model, data, [&](const nn::EpochRecord& r, std::chrono::duration<double> elapsed) {
    csv << r.epoch << ',' << r.rate << ',' << r.loss_d_real << ',' << r.loss_d_fake << ',' << r.loss_g_adversarial
        << ',' << r.loss_g << ',' << r.mean_abs_error << ',' << r.batches << ',' << elapsed.count() << '\n';
    csv.flush();
    if (opt.log)
      *opt.log << "epoch " << r.epoch << "/" << model.train.epochs << "  lr " << r.rate << "  D(real) "
               << r.loss_d_real << "  D(fake) " << r.loss_d_fake << "  G " << r.loss_g << "  |e| "
               << r.mean_abs_error << "  " << fixed(elapsed.count(), 1) << " s\n";
  });
  nn::save_checkpoint(model, opt.checkpoint);
  result.model = std::move(model);
  return result;
}

AudioBuffer enhance(const nn::GanModel& model, const AudioBuffer& noisy, const nn::ZPolicy& z) {
  const ExtractedFeatures feats = extract_features(noisy, model.features, model.stft);
  Matrix<float> context(feats.context.values.rows, feats.context.values.cols);
  for (std::size_t i = 0; i < context.size(); ++i) context.data[i] = static_cast<float>(feats.context.values.data[i]);
  const IrmSpectrogram mask = nn::infer_mask(model, context, z);
  return apply_mask_and_reconstruct(mask, feats.spectrogram, noisy.size());
}

std::vector<fs::path> cmd_enhance(const EnhanceOptions& opt) {
  const nn::GanModel model = nn::load_checkpoint(opt.checkpoint);
  if (opt.features) {
    const std::size_t expected = model.context_dim();
    const std::size_t found = context_dimension(*opt.features, model.stft);
    if (expected != found || !(*opt.features == model.features))
      fail(ErrorCode::DimensionMismatch,
           "checkpoint expects " + std::string(to_string(model.features.feature_set)) + " context features of dimension " +
               std::to_string(expected) + ", requested " + std::string(to_string(opt.features->feature_set)) +
               " gives dimension " + std::to_string(found));
  }
  const auto inputs = expand_wavs(opt.inputs);
  if (inputs.empty()) fail(ErrorCode::EmptyDataset, "no input WAV files");
  fs::create_directories(opt.out_dir);
  std::vector<fs::path> written;
  for (const auto& in : inputs) {
    const fs::path out = opt.out_dir / in.filename();
    write_wav(enhance(model, read_wav(in), opt.z), out);
    written.push_back(out);
  }
  return written;
}

namespace {

std::map<std::string, double> read_pesq(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoFailure, "cannot open " + path.string());
  std::map<std::string, double> out;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) fail(ErrorCode::InvalidArgument, "bad PESQ row '" + line + "'");
    const std::string name = line.substr(0, comma);
    const std::string value = line.substr(comma + 1);
    if (header && name == "file") {
      header = false;
      continue;
    }
    header = false;
    out[fs::path(name).filename().string()] = std::stod(value);
  }
  return out;
}

EvalResult mean_of(const std::vector<const EvalResult*>& rows, const std::string& name) {
  EvalResult m;
  m.file = name;
  double pesq = 0.0;
  std::size_t pesq_n = 0;
  for (const auto* r : rows) {
    m.sdr_db += r->sdr_db;
    m.stoi += r->stoi;
    if (r->pesq) {
      pesq += *r->pesq;
      ++pesq_n;
    }
  }
  m.sdr_db /= static_cast<double>(rows.size());
  m.stoi /= static_cast<double>(rows.size());
  if (pesq_n == rows.size() && pesq_n > 0) m.pesq = pesq / static_cast<double>(pesq_n);
  m.snr_db = std::nan("");
  return m;
}

}  // namespace

EvaluateResult cmd_evaluate(const EvaluateOptions& opt) {
  struct Pair {
    fs::path clean, processed;
    double snr = std::nan("");
    std::string noise;
  };
  std::vector<Pair> pairs;
  if (opt.manifest) {
    for (const auto& e : read_manifest(*opt.manifest).split(Split::Test)) {
      const std::string file = e.stem() + ".wav";
      pairs.push_back({opt.clean_dir.empty() ? e.clean : opt.clean_dir / file, opt.processed_dir / file, e.snr_db,
                       e.noise_label});
    }
  } else {
    for (const auto& p : expand_wavs({opt.processed_dir})) pairs.push_back({opt.clean_dir / p.filename(), p, std::nan(""), ""});
  }
  if (pairs.empty()) fail(ErrorCode::EmptyDataset, "nothing to evaluate");
  for (const auto& p : pairs) {
    if (!fs::exists(p.processed)) fail(ErrorCode::UnpairedFile, "no processed file " + p.processed.string());
    if (!fs::exists(p.clean)) fail(ErrorCode::UnpairedFile, "no clean reference for " + p.processed.string());
  }
  const auto pesq = opt.pesq_csv ? read_pesq(*opt.pesq_csv) : std::map<std::string, double>{};

  EvaluateResult result;
  for (const auto& p : pairs) {
    const AudioBuffer ref = read_wav(p.clean);
    const AudioBuffer est = read_wav(p.processed);
    EvalResult r;
    r.file = p.processed.filename().string();
    r.snr_db = p.snr;
    r.noise = p.noise;
    r.sdr_db = sdr(ref, est);
    r.stoi = stoi(ref, est);
    if (opt.pesq_csv) {
      const auto it = pesq.find(r.file);
      if (it == pesq.end()) fail(ErrorCode::UnpairedFile, "no PESQ value for " + r.file);
      r.pesq = it->second;
    }
    result.rows.push_back(r);
  }

  std::vector<const EvalResult*> all;
  std::map<std::pair<double, std::string>, std::vector<const EvalResult*>> by_cell;
  std::map<double, std::vector<const EvalResult*>> by_snr;
  for (const auto& r : result.rows) {
    all.push_back(&r);
    if (!std::isnan(r.snr_db)) {
      by_cell[{r.snr_db, r.noise}].push_back(&r);
      by_snr[r.snr_db].push_back(&r);
    }
  }
  result.aggregate = mean_of(all, "AGGREGATE");

  std::ostringstream csv;
  const bool with_pesq = opt.pesq_csv.has_value();
  csv << "file,snr_db,noise,sdr_db,stoi" << (with_pesq ? ",pesq" : "") << '\n';
  auto row = [&](const EvalResult& r) {
    csv << r.file << ',' << fixed(r.snr_db, 2) << ',' << r.noise << ',' << fixed(r.sdr_db) << ',' << fixed(r.stoi);
    if (with_pesq) csv << ',' << (r.pesq ? fixed(*r.pesq) : "");
    csv << '\n';
  };
  for (const auto& r : result.rows) row(r);
  for (const auto& [cell, rows] : by_cell) {
    EvalResult g = mean_of(rows, "GROUP");
    g.snr_db = cell.first;
    g.noise = cell.second;
    row(g);
  }
  for (const auto& [snr, rows] : by_snr) {
    EvalResult g = mean_of(rows, "GROUP");
    g.snr_db = snr;
    g.noise = "all";
    row(g);
  }
  row(result.aggregate);
  if (!opt.report.parent_path().empty()) fs::create_directories(opt.report.parent_path());
  write_text(opt.report, csv.str());
  return result;
}

InfoRow info_for(const RunConfig& cfg, FeatureSet set) {
  FeatureConfig f = cfg.features;
  f.feature_set = set;
  InfoRow row;
  row.set = set;
  row.feature_dim = feature_dimension(f, cfg.stft);
  row.context_dim = context_dimension(f, cfg.stft);
  row.generator_params = nn::parameter_count(nn::generator_dims(f, cfg.stft, cfg.arch));
  row.discriminator_params = nn::parameter_count(nn::discriminator_dims(f, cfg.stft, cfg.arch));
  return row;
}

void cmd_info(const RunConfig& cfg, std::ostream& out) {
  char line[160];
  std::snprintf(line, sizeof line, "%-10s %8s %12s %12s %12s\n", "features", "dim", "context_dim", "G_params",
                "D_params");
  out << line;
  for (FeatureSet set : {FeatureSet::Stft, FeatureSet::StftNssc, FeatureSet::StftMfcc, FeatureSet::MfccNssc,
                         FeatureSet::Mfcc, FeatureSet::Nssc}) {
    const InfoRow r = info_for(cfg, set);
    std::snprintf(line, sizeof line, "%-10s %8zu %12zu %12zu %12zu%s\n", std::string(to_string(set)).c_str(),
                  r.feature_dim, r.context_dim, r.generator_params, r.discriminator_params,
                  set == cfg.features.feature_set ? "  *" : "");
    out << line;
  }
  out << "context j = " << cfg.features.context << ", latent z = " << cfg.arch.latent_dim << ", hidden =";
  for (auto h : cfg.arch.hidden) out << ' ' << h;
  out << '\n';
}

}  // namespace afpc
