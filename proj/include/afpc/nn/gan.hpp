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

#include <chrono>
#include <functional>
#include <span>
#include <vector>

#include "afpc/features.hpp"
#include "afpc/mask.hpp"
#include "afpc/nn/adam.hpp"
#include "afpc/nn/losses.hpp"
#include "afpc/nn/network.hpp"
#include "afpc/stft.hpp"

namespace afpc::nn {

/// Rate used from `first_epoch` (1-based) until the next phase starts.
struct LrPhase {
  std::size_t first_epoch = 1;
  double rate = 1e-4;
  bool operator==(const LrPhase&) const = default;
};

struct TrainConfig {
  std::size_t epochs = 50;
  std::size_t batch_size = 128;
  /// Empty means: initial_rate for the first half of the epochs, final_rate after.
  std::vector<LrPhase> lr_schedule;
  double initial_rate = 1e-4;
  double final_rate = 1e-5;
  double lambda_l1 = 100.0;
  AdamHyper adam;
  std::uint64_t seed = 0;
  bool normalize_inputs = true;

  std::vector<LrPhase> effective_schedule() const;
  double rate_for_epoch(std::size_t epoch) const;  // 1-based
  void validate() const;
  bool operator==(const TrainConfig&) const = default;
};

struct GanArchitecture {
  std::vector<std::size_t> hidden = {512, 512, 512};
  std::size_t latent_dim = 15;
  double dropout = 0.2;
  bool discriminator_dropout = true;
  bool operator==(const GanArchitecture&) const = default;
};

/// Per-dimension z-score statistics of the current-frame features.
struct NormStats {
  std::vector<double> mean;
  std::vector<double> stdev;

  bool empty() const noexcept { return mean.empty(); }
  bool operator==(const NormStats&) const = default;
};

inline constexpr double kStdFloor = 1e-8;

NormStats compute_norm_stats(const Matrix<float>& features);
/// Normalizes each `stats.mean.size()`-wide column block of every row.
void apply_norm_stats(const NormStats& stats, Matrix<float>& features);

struct EpochRecord {
  std::size_t epoch = 0;
  double rate = 0.0;
  double loss_d_real = 0.0;
  double loss_d_fake = 0.0;
  double loss_g_adversarial = 0.0;
  double loss_g = 0.0;
  double mean_abs_error = 0.0;  // mean |irm_hat - irm| per cell
  std::size_t batches = 0;
  bool operator==(const EpochRecord&) const = default;
};

struct GanModel {
  FeatureConfig features;
  StftConfig stft;
  GanArchitecture arch;
  TrainConfig train;
  DenseNetwork<float> generator;
  DenseNetwork<float> discriminator;
  AdamState<float> generator_opt;
  AdamState<float> discriminator_opt;
  NormStats norm;
  std::size_t epochs_done = 0;
  Rng rng;
  std::vector<EpochRecord> history;

  std::size_t feature_dim() const { return feature_dimension(features, stft); }
  std::size_t context_dim() const { return context_dimension(features, stft); }
  std::size_t mask_dim() const { return stft.bins(); }

  bool operator==(const GanModel&) const = default;
};

std::vector<std::size_t> generator_dims(const FeatureConfig& f, const StftConfig& s, const GanArchitecture& a);
std::vector<std::size_t> discriminator_dims(const FeatureConfig& f, const StftConfig& s, const GanArchitecture& a);

GanModel make_gan_model(const FeatureConfig& features, const StftConfig& stft, const GanArchitecture& arch,
                        const TrainConfig& train);

template <typename T>
Matrix<T> concat_columns(const Matrix<T>& left, const Matrix<T>& right);

// Objective pieces, templated so the same code serves float training and
// double-precision gradient checks.

template <typename T>
struct DiscriminatorTerm {
  double loss = 0.0;
  Matrix<T> output;
  Gradients<T> grads;
};

/// mean (D(input) - target)^2 and its gradient w.r.t. D's parameters.
template <typename T>
DiscriminatorTerm<T> discriminator_term(const DenseNetwork<T>& d, const Matrix<T>& input, double target, Mode mode,
                                        Rng& rng);

template <typename T>
struct GeneratorPass {
  Matrix<T> irm_hat;
  Tape<T> tape;
};

template <typename T>
GeneratorPass<T> generator_pass(const DenseNetwork<T>& g, const Matrix<T>& g_input, Mode mode, Rng& rng);

template <typename T>
struct GeneratorTerm {
  double loss = 0.0;
  double adversarial = 0.0;
  double l1 = 0.0;
  Gradients<T> grads;
};

/// mean (D([irm_hat, condition]) - 1)^2 + lambda mean ||irm_hat - irm||_1 and
/// its gradient w.r.t. G's parameters. D is only read.
template <typename T>
GeneratorTerm<T> generator_term(const DenseNetwork<T>& g, const GeneratorPass<T>& pass, const DenseNetwork<T>& d,
                                const Matrix<T>& condition, const Matrix<T>& irm, double lambda_l1, Mode mode,
                                Rng& rng);

/// Frame-aligned training data: context features, current-frame features, IRM targets.
struct TrainingSet {
  Matrix<float> context;
  Matrix<float> current;
  Matrix<float> target;

  std::size_t frames() const noexcept { return target.rows; }
};

struct Batch {
  Matrix<float> generator_input;  // normalized context features followed by z
  Matrix<float> condition;        // normalized current-frame features
  Matrix<float> target;
};

struct BatchLosses {
  double d_real = 0.0;
  double d_fake = 0.0;
  double g_adversarial = 0.0;
  double g_total = 0.0;
  double l1 = 0.0;
  double abs_error_sum = 0.0;  // sum |irm_hat - irm| over the batch, before the update of G
};

/// Runs the three-step update of one batch: D toward 1 on real masks, D
/// toward 0 on generated masks, then G against the frozen D.
class GanTrainer {
 public:
  explicit GanTrainer(GanModel& model) : model_(model) {}

  /// Gathers rows of an already-normalized set and draws z from the model RNG.
  Batch make_batch(const TrainingSet& normalized, std::span<const std::size_t> rows);

  BatchLosses train_batch(const Batch& batch, double rate);

  double discriminator_real_step(const Batch& batch, double rate);
  double discriminator_fake_step(const Batch& batch, double rate);
  GeneratorTerm<float> generator_step(const Batch& batch, double rate);

 private:
  GanModel& model_;
  GeneratorPass<float> pass_;
  bool have_pass_ = false;
};

using EpochCallback = std::function<void(const EpochRecord&, std::chrono::duration<double>)>;

/// Trains from model.epochs_done up to model.train.epochs. Normalization
/// statistics are computed on the first call and reused when resuming.
void train(GanModel& model, const TrainingSet& data, const EpochCallback& on_epoch = {});

/// Copy of `data` with the stored statistics applied to its context and current features.
TrainingSet normalized_copy(const GanModel& model, const TrainingSet& data);

struct ZPolicy {
  enum class Kind { Sample, Zeros };
  Kind kind = Kind::Sample;
  std::uint64_t seed = 0;
};

/// Eval-mode generator output per frame for raw context features.
IrmSpectrogram infer_mask(const GanModel& model, const Matrix<float>& context, const ZPolicy& z = {});

}  // namespace afpc::nn
